//! Separable CMA-ES (diagonal covariance), minimizing.

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone)]
pub(crate) struct SepCma {
    n: usize,
    lambda: usize,
    weights: Vec<f64>,
    mu_eff: f64,
    c_sigma: f64,
    d_sigma: f64,
    c_c: f64,
    c_1: f64,
    c_mu: f64,
    chi_n: f64,
    pub mean: Vec<f64>,
    pub sigma: f64,
    diag: Vec<f64>,
    p_sigma: Vec<f64>,
    p_c: Vec<f64>,
    generation: usize,
}

pub(crate) struct Offspring {
    pub x: Vec<f64>,
    z: Vec<f64>,
}

impl SepCma {
    pub fn new(mean: Vec<f64>, sigma: f64) -> Self {
        let n = mean.len();
        let nf = n as f64;
        let lambda = 4 + (3.0 * nf.ln()).floor() as usize;
        let mu = lambda / 2;
        let raw: Vec<f64> = (0..mu).map(|i| (mu as f64 + 0.5).ln() - ((i + 1) as f64).ln()).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
        let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
        let c1 = 2.0 / ((nf + 1.3).powi(2) + mu_eff);
        let cmu = (2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff)).min(1.0 - c1);
        // the diagonal model learns n parameters, so its rates can be (n+2)/3 larger
        let boost = (nf + 2.0) / 3.0;
        let c_1 = (c1 * boost).min(0.5);
        let c_mu = (cmu * boost).min(1.0 - c_1);
        Self {
            n,
            lambda,
            weights,
            mu_eff,
            c_sigma,
            d_sigma,
            c_c,
            c_1,
            c_mu,
            chi_n: nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf)),
            mean,
            sigma,
            diag: vec![1.0; n],
            p_sigma: vec![0.0; n],
            p_c: vec![0.0; n],
            generation: 0,
        }
    }

    /// Largest coordinate step length.
    pub fn step_scale(&self) -> f64 {
        self.sigma * self.diag.iter().fold(0.0f64, |m, &d| m.max(d.sqrt()))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Offspring> {
        (0..self.lambda)
            .map(|_| {
                let z: Vec<f64> = (0..self.n).map(|_| rng.sample(StandardNormal)).collect();
                let x = (0..self.n).map(|i| self.mean[i] + self.sigma * self.diag[i].sqrt() * z[i]).collect();
                Offspring { x, z }
            })
            .collect()
    }

    /// Updates the distribution from offspring and their costs (lower is better).
    pub fn tell(&mut self, offspring: &[Offspring], costs: &[f64]) {
        let mut order: Vec<usize> = (0..offspring.len()).collect();
        order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(a.cmp(&b)));
        let n = self.n;
        let mut zw = vec![0.0; n];
        let mut yw = vec![0.0; n];
        for (w, &k) in self.weights.iter().zip(&order) {
            for i in 0..n {
                zw[i] += w * offspring[k].z[i];
                yw[i] += w * self.diag[i].sqrt() * offspring[k].z[i];
            }
        }
        for i in 0..n {
            self.mean[i] += self.sigma * yw[i];
        }
        self.generation += 1;
        let cs = self.c_sigma;
        let ps_rate = (cs * (2.0 - cs) * self.mu_eff).sqrt();
        for i in 0..n {
            self.p_sigma[i] = (1.0 - cs) * self.p_sigma[i] + ps_rate * zw[i];
        }
        let ps_norm = self.p_sigma.iter().map(|v| v * v).sum::<f64>().sqrt();
        let decay = 1.0 - (1.0 - cs).powi(2 * self.generation as i32);
        let h_sigma = ps_norm / decay.sqrt() < (1.4 + 2.0 / (n as f64 + 1.0)) * self.chi_n;
        let cc = self.c_c;
        let pc_rate = (cc * (2.0 - cc) * self.mu_eff).sqrt();
        for i in 0..n {
            self.p_c[i] = (1.0 - cc) * self.p_c[i] + if h_sigma { pc_rate * yw[i] } else { 0.0 };
        }
        let correction = if h_sigma { 0.0 } else { cc * (2.0 - cc) };
        for i in 0..n {
            let mut rank_mu = 0.0;
            for (w, &k) in self.weights.iter().zip(&order) {
                let y = self.diag[i].sqrt() * offspring[k].z[i];
                rank_mu += w * y * y;
            }
            self.diag[i] = (1.0 - self.c_1 - self.c_mu) * self.diag[i]
                + self.c_1 * (self.p_c[i] * self.p_c[i] + correction * self.diag[i])
                + self.c_mu * rank_mu;
        }
        self.sigma *= ((cs / self.d_sigma) * (ps_norm / self.chi_n - 1.0)).min(1.0).exp();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn minimizes_ellipsoid() {
        let n = 20;
        let f = |x: &[f64]| -> f64 {
            x.iter().enumerate().map(|(i, v)| 10f64.powf(3.0 * i as f64 / (n - 1) as f64) * (v - 1.0).powi(2)).sum()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut es = SepCma::new(vec![0.0; n], 0.5);
        for _ in 0..1500 {
            let kids = es.sample(&mut rng);
            let costs: Vec<f64> = kids.iter().map(|k| f(&k.x)).collect();
            es.tell(&kids, &costs);
        }
        assert!(f(&es.mean) < 1e-12, "{}", f(&es.mean));
    }
}
