//! Independent numerical checks: brute-force product-state counting and a
//! randomized search over product filters.

mod cma;
mod search;
mod small;
mod zeros;

pub use search::{search_best_protocol, RestartSummary, SearchConfig, SearchResult};
pub use zeros::{sample_product_zeros, ProductZeros};
