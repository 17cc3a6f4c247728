//! Unscented transform of isotropic Gaussian input noise: sigma points,
//! unscented expected improvement, and the unscented outcome/incumbent.

use crate::acquisition::{argmax_first, expected_improvement_component, Incumbent, IncumbentKind};
use crate::error::{Error, Result};
use crate::gp::{GpModel, ObservationSet};

/// Isotropic input noise `N(0, I σ_x²)` plus the free scale parameter `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputNoise {
    sigma_x: f64,
    k_scale: f64,
}

impl InputNoise {
    pub const DEFAULT_SIGMA_X: f64 = 0.03;
    pub const DEFAULT_K_SCALE: f64 = 1.0;

    pub fn new(sigma_x: f64, k_scale: f64) -> Result<Self> {
        if !(sigma_x > 0.0) || !sigma_x.is_finite() || !k_scale.is_finite() {
            return Err(Error::invalid("sigma_x must be positive and k_scale finite"));
        }
        Ok(Self { sigma_x, k_scale })
    }

    pub fn sigma_x(&self) -> f64 {
        self.sigma_x
    }

    pub fn k_scale(&self) -> f64 {
        self.k_scale
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if !(d as f64 + self.k_scale > 0.0) {
            return Err(Error::invalid(format!(
                "d + k must be positive (d = {d}, k = {})",
                self.k_scale
            )));
        }
        Ok(())
    }
}

impl Default for InputNoise {
    fn default() -> Self {
        Self {
            sigma_x: Self::DEFAULT_SIGMA_X,
            k_scale: Self::DEFAULT_K_SCALE,
        }
    }
}

/// `2d + 1` sigma points (center first, then `+e_i`, `-e_i` per axis),
/// clamped into the unit hypercube, with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaPointSet {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub fn sigma_points(center: &[f64], noise: &InputNoise) -> Result<SigmaPointSet> {
    let d = center.len();
    if d == 0 {
        return Err(Error::invalid("sigma points need a non-empty center"));
    }
    noise.check_dim(d)?;
    let dk = d as f64 + noise.k_scale;
    let offset = dk.sqrt() * noise.sigma_x;
    let clamp = |x: &mut Vec<f64>| x.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));

    let mut points = Vec::with_capacity(2 * d + 1);
    let mut c = center.to_vec();
    clamp(&mut c);
    points.push(c);
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut p = center.to_vec();
            p[i] += sign * offset;
            clamp(&mut p);
            points.push(p);
        }
    }
    let mut weights = vec![1.0 / (2.0 * dk); 2 * d + 1];
    weights[0] = noise.k_scale / dk;
    Ok(SigmaPointSet { points, weights })
}

impl SigmaPointSet {
    /// `Σ w⁽ⁱ⁾ g(x⁽ⁱ⁾)`.
    pub fn expectation(&self, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * g(p))
            .sum()
    }
}

/// Expected improvement averaged over the sigma points of `x`.
pub fn unscented_expected_improvement(
    model: &GpModel,
    x: &[f64],
    y_best: f64,
    noise: &InputNoise,
) -> Result<f64> {
    model.check_point(x)?;
    noise.check_dim(x.len())?;
    let mut scratch = Vec::with_capacity(model.data().len());
    Ok(unscented_expected_improvement_with(model, x, y_best, noise, &mut scratch))
}

pub(crate) fn unscented_expected_improvement_with(
    model: &GpModel,
    x: &[f64],
    y_best: f64,
    noise: &InputNoise,
    scratch: &mut Vec<f64>,
) -> f64 {
    let sp = sigma_points(x, noise).expect("dimension checked by the caller");
    let points: Vec<&[f64]> = sp.points.iter().map(Vec::as_slice).collect();
    let mut totals = vec![0.0; points.len()];
    model.for_each_prediction(&points, scratch, |i, p| {
        totals[i] += expected_improvement_component(p, y_best);
    });
    let m = model.num_samples() as f64;
    sp.weights
        .iter()
        .zip(&totals)
        .map(|(w, t)| w * (t / m))
        .sum::<f64>()
        .max(0.0)
}

/// Sigma-point weighted, hyperparameter-averaged posterior mean at `x`.
pub fn unscented_outcome(model: &GpModel, x: &[f64], noise: &InputNoise) -> Result<f64> {
    model.check_point(x)?;
    let sp = sigma_points(x, noise)?;
    let mut scratch = Vec::with_capacity(model.data().len());
    Ok(sp.expectation(|p| model.mean_with(p, &mut scratch)))
}

/// The observed query with the highest unscented outcome.
pub fn unscented_incumbent(
    model: &GpModel,
    data: &ObservationSet,
    noise: &InputNoise,
) -> Result<Incumbent> {
    if data.is_empty() {
        return Err(Error::State("no observations to pick an incumbent from".into()));
    }
    let outcomes = data
        .rows()
        .map(|x| unscented_outcome(model, x, noise))
        .collect::<Result<Vec<_>>>()?;
    let index = argmax_first(outcomes.iter().copied()).expect("non-empty");
    Ok(Incumbent {
        index,
        x_opt: data.x(index).to_vec(),
        y_opt: outcomes[index],
        kind: IncumbentKind::Unscented,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_points_and_weights() {
        let noise = InputNoise::new(0.03, 1.0).unwrap();
        let sp = sigma_points(&[0.5, 0.5], &noise).unwrap();
        let o = 3f64.sqrt() * 0.03;
        assert!((o - 0.051_962).abs() < 1e-6);
        let expected = [
            [0.5, 0.5],
            [0.5 + o, 0.5],
            [0.5 - o, 0.5],
            [0.5, 0.5 + o],
            [0.5, 0.5 - o],
        ];
        for (p, e) in sp.points.iter().zip(expected) {
            assert!((p[0] - e[0]).abs() < 1e-15 && (p[1] - e[1]).abs() < 1e-15);
        }
        let w = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (a, b) in sp.weights.iter().zip(w) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn clamps_at_the_boundary() {
        let noise = InputNoise::new(0.03, 1.0).unwrap();
        let sp = sigma_points(&[0.01, 0.5], &noise).unwrap();
        assert_eq!(sp.points[2][0], 0.0);
        assert!((sp.points[1][0] - (0.01 + 3f64.sqrt() * 0.03)).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one() {
        for d in 1..6 {
            for k in [0.5, 1.0, 2.0, 3.0 - d as f64 + 0.1] {
                let noise = InputNoise::new(0.05, k).unwrap();
                let sp = sigma_points(&vec![0.5; d], &noise).unwrap();
                assert_eq!(sp.points.len(), 2 * d + 1);
                assert!((sp.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_noise() {
        assert!(InputNoise::new(0.0, 1.0).is_err());
        let noise = InputNoise::new(0.1, -3.0).unwrap();
        assert!(sigma_points(&[0.5, 0.5], &noise).is_err());
    }
}
