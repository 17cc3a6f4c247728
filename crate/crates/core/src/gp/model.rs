use std::f64::consts::PI;

use super::data::ObservationSet;
use super::kernel::{matern52_from_sq, KernelHyperparams};
use crate::error::{Error, Result};
use crate::linalg::{dot, Cholesky, PackedLower};

/// First jitter tried when a Gram matrix fails to factorize.
pub const JITTER_START: f64 = 1e-10;
/// Largest jitter before giving up.
pub const JITTER_MAX: f64 = 1e-4;

/// Hyperprior mean of every log lengthscale (inputs live in the unit cube).
pub const PRIOR_LOG_LENGTHSCALE_MEAN: f64 = -1.609_437_912_434_100_3; // ln 0.2
pub const PRIOR_LOG_LENGTHSCALE_SD: f64 = 1.0;
pub const PRIOR_LOG_SIGNAL_MEAN: f64 = 0.0;
pub const PRIOR_LOG_SIGNAL_SD: f64 = 1.0;

fn normal_log_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * (2.0 * PI).ln()
}

/// Log density of the independent log-normal hyperpriors.
pub fn log_hyperprior(theta: &KernelHyperparams) -> f64 {
    theta
        .log_lengthscales()
        .iter()
        .map(|&l| normal_log_density(l, PRIOR_LOG_LENGTHSCALE_MEAN, PRIOR_LOG_LENGTHSCALE_SD))
        .sum::<f64>()
        + normal_log_density(
            theta.log_signal_variance(),
            PRIOR_LOG_SIGNAL_MEAN,
            PRIOR_LOG_SIGNAL_SD,
        )
}

/// Squared per-dimension differences for every pair `j ≤ i`, so that Gram
/// matrices for many hyperparameter settings can be rebuilt cheaply.
pub(crate) struct PairwiseSqDiffs {
    n: usize,
    dim: usize,
    diffs: Vec<f64>,
}

impl PairwiseSqDiffs {
    pub(crate) fn new(data: &ObservationSet) -> Self {
        let (n, dim) = (data.len(), data.dim());
        let mut diffs = Vec::with_capacity(n * (n + 1) / 2 * dim);
        for i in 0..n {
            let xi = data.x(i);
            for j in 0..=i {
                for (a, b) in xi.iter().zip(data.x(j)) {
                    diffs.push((a - b) * (a - b));
                }
            }
        }
        Self { n, dim, diffs }
    }

    /// `k(X, X)` without the noise term.
    pub(crate) fn gram(&self, theta: &KernelHyperparams) -> PackedLower {
        let inv = theta.inverse_sq_lengthscales();
        let sf2 = theta.signal_variance();
        let d = self.dim;
        let mut p = 0;
        PackedLower::from_fn(self.n, |_, _| {
            let r2: f64 = self.diffs[p * d..(p + 1) * d]
                .iter()
                .zip(&inv)
                .map(|(a, b)| a * b)
                .sum();
            p += 1;
            matern52_from_sq(sf2, r2)
        })
    }
}

/// Factorizes `gram`, adding diagonal jitter from `JITTER_START` up to
/// `JITTER_MAX` (×10 per attempt) if the plain matrix is not positive definite.
/// Returns the factor, the jitter used, and the matrix that was factorized.
pub(crate) fn factor_with_jitter(gram: PackedLower) -> Option<(Cholesky, f64, PackedLower)> {
    if let Some(c) = Cholesky::factor(&gram) {
        return Some((c, 0.0, gram));
    }
    let mut jitter = JITTER_START;
    while jitter <= JITTER_MAX * (1.0 + 1e-9) {
        let mut k = gram.clone();
        k.add_diagonal(jitter);
        if let Some(c) = Cholesky::factor(&k) {
            return Some((c, jitter, k));
        }
        jitter *= 10.0;
    }
    None
}

pub(crate) fn log_marginal_likelihood_with(
    diffs: &PairwiseSqDiffs,
    ys: &[f64],
    theta: &KernelHyperparams,
    noise_variance: f64,
) -> Option<f64> {
    let mut k = diffs.gram(theta);
    k.add_diagonal(noise_variance);
    let (chol, _, _) = factor_with_jitter(k)?;
    let alpha = chol.solve(ys);
    let n = ys.len() as f64;
    let fit = -0.5 * dot(ys, &alpha);
    let v = fit - 0.5 * chol.log_det() - 0.5 * n * (2.0 * PI).ln() + log_hyperprior(theta);
    v.is_finite().then_some(v)
}

/// Log evidence of a zero-mean GP plus the log hyperprior density.
pub fn log_marginal_likelihood(
    data: &ObservationSet,
    theta: &KernelHyperparams,
    noise_variance: f64,
) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::State("log marginal likelihood of an empty dataset".into()));
    }
    check_theta(data.dim(), theta)?;
    if !(noise_variance >= 0.0) {
        return Err(Error::invalid("noise variance must be non-negative"));
    }
    log_marginal_likelihood_with(&PairwiseSqDiffs::new(data), data.ys(), theta, noise_variance)
        .ok_or(Error::NotPositiveDefinite {
            theta_index: 0,
            max_jitter: JITTER_MAX,
        })
}

fn check_theta(dim: usize, theta: &KernelHyperparams) -> Result<()> {
    if theta.dim() != dim {
        return Err(Error::invalid(format!(
            "hyperparameters for dimension {} used with {}-dimensional data",
            theta.dim(),
            dim
        )));
    }
    Ok(())
}

/// Predictive mean and variance under one hyperparameter sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

impl Prediction {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

#[derive(Debug, Clone)]
struct Component {
    theta: KernelHyperparams,
    inv_sq_ls: Vec<f64>,
    signal_variance: f64,
    chol: Cholesky,
    chol_inv: PackedLower,
    gram: PackedLower,
    alpha: Vec<f64>,
    jitter: f64,
}

/// GP posterior under a set of hyperparameter samples; the predictive
/// distribution is the equally weighted mixture of the per-sample Gaussians.
///
/// Immutable once built, so it can be shared between threads.
#[derive(Debug, Clone)]
pub struct GpModel {
    data: ObservationSet,
    noise_variance: f64,
    components: Vec<Component>,
}

impl GpModel {
    pub fn fit(
        data: ObservationSet,
        theta_samples: &[KernelHyperparams],
        noise_variance: f64,
    ) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::State("cannot fit a GP to an empty dataset".into()));
        }
        if theta_samples.is_empty() {
            return Err(Error::invalid("at least one hyperparameter sample is required"));
        }
        if !(noise_variance >= 0.0) || !noise_variance.is_finite() {
            return Err(Error::invalid("noise variance must be finite and non-negative"));
        }
        let diffs = PairwiseSqDiffs::new(&data);
        let mut components = Vec::with_capacity(theta_samples.len());
        for (index, theta) in theta_samples.iter().enumerate() {
            check_theta(data.dim(), theta)?;
            let mut k = diffs.gram(theta);
            k.add_diagonal(noise_variance);
            let (chol, jitter, gram) =
                factor_with_jitter(k).ok_or(Error::NotPositiveDefinite {
                    theta_index: index,
                    max_jitter: JITTER_MAX,
                })?;
            let alpha = chol.solve(data.ys());
            components.push(Component {
                theta: theta.clone(),
                inv_sq_ls: theta.inverse_sq_lengthscales(),
                signal_variance: theta.signal_variance(),
                chol_inv: chol.inverse_factor(),
                chol,
                gram,
                alpha,
                jitter,
            });
        }
        Ok(Self {
            data,
            noise_variance,
            components,
        })
    }

    pub fn data(&self) -> &ObservationSet {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn num_samples(&self) -> usize {
        self.components.len()
    }

    pub fn theta(&self, i: usize) -> &KernelHyperparams {
        &self.components[i].theta
    }

    /// Jitter that had to be added to the `i`-th Gram matrix (0 if none).
    pub fn jitter(&self, i: usize) -> f64 {
        self.components[i].jitter
    }

    /// The factorized matrix `k_i(X, X) + I(σ_η² + jitter)`.
    pub fn gram(&self, i: usize) -> &PackedLower {
        &self.components[i].gram
    }

    pub fn cholesky(&self, i: usize) -> &Cholesky {
        &self.components[i].chol
    }

    fn kernel_vector(&self, c: &Component, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.data.rows()) {
            let r2: f64 = row
                .iter()
                .zip(x)
                .zip(&c.inv_sq_ls)
                .map(|((a, b), w)| (a - b) * (a - b) * w)
                .sum();
            *o = matern52_from_sq(c.signal_variance, r2);
        }
    }

    /// Calls `f(point_index, prediction)` for every hyperparameter sample and
    /// every point. Points are processed together so each row of `L⁻¹` is
    /// loaded once per sample; `scratch` is reused between calls.
    pub(crate) fn for_each_prediction(
        &self,
        points: &[&[f64]],
        scratch: &mut Vec<f64>,
        mut f: impl FnMut(usize, Prediction),
    ) {
        let n = self.data.len();
        let np = points.len();
        scratch.clear();
        scratch.resize(np * (n + 1), 0.0);
        let (ks, explained) = scratch.split_at_mut(np * n);
        for c in &self.components {
            for (k, x) in ks.chunks_exact_mut(n).zip(points) {
                debug_assert_eq!(x.len(), self.dim());
                self.kernel_vector(c, x, k);
            }
            explained.fill(0.0);
            for i in 0..n {
                let row = c.chol_inv.row(i);
                for (e, k) in explained.iter_mut().zip(ks.chunks_exact(n)) {
                    let v = dot(row, &k[..=i]);
                    *e += v * v;
                }
            }
            for (p, (k, e)) in ks.chunks_exact(n).zip(explained.iter()).enumerate() {
                f(
                    p,
                    Prediction {
                        mean: dot(k, &c.alpha),
                        variance: (c.signal_variance - e).max(0.0),
                    },
                );
            }
        }
    }

    /// Per-sample predictive `(μ_i, σ_i²)` at `x`, variances clamped at zero.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<Prediction>> {
        self.check_point(x)?;
        let mut out = Vec::with_capacity(self.components.len());
        let mut scratch = Vec::new();
        self.for_each_prediction(&[x], &mut scratch, |_, p| out.push(p));
        Ok(out)
    }

    /// Mean over hyperparameter samples of the posterior mean `μ_i(x)`.
    pub fn mean(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let mut scratch = Vec::with_capacity(self.data.len());
        Ok(self.mean_with(x, &mut scratch))
    }

    pub(crate) fn mean_with(&self, x: &[f64], scratch: &mut Vec<f64>) -> f64 {
        let total: f64 = self
            .components
            .iter()
            .map(|c| {
                scratch.resize(self.data.len(), 0.0);
                self.kernel_vector(c, x, scratch);
                dot(scratch, &c.alpha)
            })
            .sum();
        total / self.components.len() as f64
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "query of dimension {} for a {}-dimensional model",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::kernel::matern52;

    fn theta(ls: &[f64], sf2: f64) -> KernelHyperparams {
        KernelHyperparams::from_natural(ls, sf2).unwrap()
    }

    #[test]
    fn single_point_gram() {
        let data = ObservationSet::from_rows(&[vec![0.3, 0.4]], &[1.0]).unwrap();
        let m = GpModel::fit(data, &[theta(&[0.2, 0.5], 1.7)], 0.01).unwrap();
        assert!((m.gram(0).get(0, 0) - 1.71).abs() < 1e-15);
    }

    #[test]
    fn interpolates_training_points_without_noise() {
        let rows = vec![vec![0.1], vec![0.5], vec![0.8]];
        let ys = [0.3, -1.0, 2.0];
        let data = ObservationSet::from_rows(&rows, &ys).unwrap();
        let m = GpModel::fit(data, &[theta(&[0.3], 1.0)], 0.0).unwrap();
        for (r, y) in rows.iter().zip(ys) {
            let p = m.predict(r).unwrap()[0];
            assert!((p.mean - y).abs() < 1e-8);
            assert!(p.variance < 1e-8);
        }
    }

    #[test]
    fn reverts_to_prior_far_away() {
        let data = ObservationSet::from_rows(&[vec![0.0]], &[3.0]).unwrap();
        let m = GpModel::fit(data, &[theta(&[0.001], 2.0)], 1e-8).unwrap();
        let p = m.predict(&[1.0]).unwrap()[0];
        assert!(p.mean.abs() < 1e-12);
        assert!((p.variance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn duplicate_rows_need_jitter() {
        let rows = vec![vec![0.5, 0.5], vec![0.5, 0.5], vec![0.2, 0.9]];
        let data = ObservationSet::from_rows(&rows, &[1.0, 1.0, 0.0]).unwrap();
        let m = GpModel::fit(data, &[theta(&[0.3, 0.3], 1.0)], 1e-8).unwrap();
        assert!(m.predict(&[0.5, 0.5]).unwrap()[0].mean.is_finite());
    }

    #[test]
    fn empty_dataset_is_a_state_error() {
        let data = ObservationSet::new(1).unwrap();
        assert!(matches!(
            GpModel::fit(data.clone(), &[theta(&[0.3], 1.0)], 0.0),
            Err(Error::State(_))
        ));
        assert!(matches!(
            log_marginal_likelihood(&data, &theta(&[0.3], 1.0), 0.0),
            Err(Error::State(_))
        ));
    }

    #[test]
    fn lml_at_origin() {
        let data = ObservationSet::from_rows(&[vec![0.5]], &[0.0]).unwrap();
        let th = theta(&[0.2], 1.0);
        let v = log_marginal_likelihood(&data, &th, 0.0).unwrap();
        assert!((v - (-0.5 * (2.0 * PI).ln() + log_hyperprior(&th))).abs() < 1e-14);
    }

    #[test]
    fn larger_outcomes_lower_the_data_fit() {
        let rows = vec![vec![0.1], vec![0.6]];
        let th = theta(&[0.2], 1.0);
        let small = ObservationSet::from_rows(&rows, &[0.3, -0.2]).unwrap();
        let big = ObservationSet::from_rows(&rows, &[3.0, -2.0]).unwrap();
        assert!(
            log_marginal_likelihood(&big, &th, 1e-6).unwrap()
                < log_marginal_likelihood(&small, &th, 1e-6).unwrap()
        );
    }

    #[test]
    fn gram_uses_kernel() {
        let rows = vec![vec![0.1, 0.2], vec![0.7, 0.4], vec![0.3, 0.9]];
        let data = ObservationSet::from_rows(&rows, &[0.0; 3]).unwrap();
        let th = theta(&[0.3, 0.6], 1.3);
        let g = PairwiseSqDiffs::new(&data).gram(&th);
        for i in 0..3 {
            for j in 0..3 {
                let k = matern52(&rows[i], &rows[j], &th).unwrap();
                assert!((g.get(i, j) - k).abs() < 1e-15);
            }
        }
    }
}
