use crate::error::{Error, Result};

const SQRT_5: f64 = 2.236_067_977_499_79;

/// Matérn-5/2 hyperparameters in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelHyperparams {
    log_lengthscales: Vec<f64>,
    log_signal_variance: f64,
}

impl KernelHyperparams {
    pub fn new(log_lengthscales: Vec<f64>, log_signal_variance: f64) -> Result<Self> {
        if log_lengthscales.is_empty() {
            return Err(Error::invalid("kernel needs at least one lengthscale"));
        }
        if !log_signal_variance.is_finite() || log_lengthscales.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("kernel hyperparameters must be finite"));
        }
        Ok(Self {
            log_lengthscales,
            log_signal_variance,
        })
    }

    /// Builds from natural-scale values.
    pub fn from_natural(lengthscales: &[f64], signal_variance: f64) -> Result<Self> {
        if lengthscales.iter().any(|&l| !(l > 0.0)) || !(signal_variance > 0.0) {
            return Err(Error::invalid("lengthscales and signal variance must be positive"));
        }
        Self::new(
            lengthscales.iter().map(|l| l.ln()).collect(),
            signal_variance.ln(),
        )
    }

    /// Packs `(log ℓ_1..log ℓ_d, log σ_f²)` into a flat vector.
    pub(crate) fn from_flat(v: &[f64]) -> Result<Self> {
        let (last, ls) = v
            .split_last()
            .ok_or_else(|| Error::invalid("empty hyperparameter vector"))?;
        Self::new(ls.to_vec(), *last)
    }

    pub fn dim(&self) -> usize {
        self.log_lengthscales.len()
    }

    pub fn log_lengthscales(&self) -> &[f64] {
        &self.log_lengthscales
    }

    pub fn log_signal_variance(&self) -> f64 {
        self.log_signal_variance
    }

    pub fn lengthscales(&self) -> Vec<f64> {
        self.log_lengthscales.iter().map(|l| l.exp()).collect()
    }

    pub fn signal_variance(&self) -> f64 {
        self.log_signal_variance.exp()
    }

    pub(crate) fn inverse_sq_lengthscales(&self) -> Vec<f64> {
        self.log_lengthscales
            .iter()
            .map(|l| (-2.0 * l).exp())
            .collect()
    }
}

/// Matérn-5/2 profile as a function of the squared scaled distance.
#[inline]
pub(crate) fn matern52_from_sq(signal_variance: f64, r2: f64) -> f64 {
    let sr = SQRT_5 * r2.sqrt();
    signal_variance * (1.0 + sr + 5.0 * r2 / 3.0) * (-sr).exp()
}

/// `σ_f² (1 + √5 r + 5r²/3) exp(−√5 r)` with ARD-scaled distance `r`.
pub fn matern52(x: &[f64], x2: &[f64], theta: &KernelHyperparams) -> Result<f64> {
    if x.len() != theta.dim() || x2.len() != theta.dim() {
        return Err(Error::invalid(format!(
            "kernel dimension {} does not match points of length {} and {}",
            theta.dim(),
            x.len(),
            x2.len()
        )));
    }
    let r2: f64 = x
        .iter()
        .zip(x2)
        .zip(theta.log_lengthscales())
        .map(|((a, b), l)| {
            let t = (a - b) / l.exp();
            t * t
        })
        .sum();
    Ok(matern52_from_sq(theta.signal_variance(), r2))
}
