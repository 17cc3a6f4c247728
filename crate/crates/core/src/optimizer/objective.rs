use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grasp::{evaluate_grasp, GraspScene};

/// Raw outcome of one evaluation of the target function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub quality: f64,
    pub colliding_joints: usize,
}

impl Evaluation {
    pub fn collision_free(quality: f64) -> Self {
        Self {
            quality,
            colliding_joints: 0,
        }
    }
}

/// A deterministic target defined on the unit hypercube.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;
    fn evaluate(&self, u: &[f64]) -> Result<Evaluation>;
}

impl Objective for GraspScene {
    fn dimension(&self) -> usize {
        GraspScene::dimension(self)
    }

    fn evaluate(&self, u: &[f64]) -> Result<Evaluation> {
        let o = evaluate_grasp(self, u)?;
        Ok(Evaluation {
            quality: o.quality,
            colliding_joints: o.colliding_joints,
        })
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(&self, u: &[f64]) -> Result<Evaluation> {
        (**self).evaluate(u)
    }
}

/// Wraps a plain function `[0,1]^d → ℝ` that never collides.
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObjective<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, u: &[f64]) -> Result<Evaluation> {
        check_dim(self.dim, u)?;
        Ok(Evaluation::collision_free((self.f)(u)))
    }
}

fn check_dim(dim: usize, u: &[f64]) -> Result<()> {
    if u.len() != dim {
        return Err(Error::invalid(format!(
            "objective is {dim}-dimensional, got a point of length {}",
            u.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntheticKind {
    SafeRisky1d,
    SafeRisky2d,
    GaussianMix,
}

impl SyntheticKind {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::SafeRisky1d => "safe-risky-1d",
            SyntheticKind::SafeRisky2d => "safe-risky-2d",
            SyntheticKind::GaussianMix => "gaussian-mix",
        }
    }
}

impl fmt::Display for SyntheticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "safe-risky-1d" => Ok(SyntheticKind::SafeRisky1d),
            "safe-risky-2d" => Ok(SyntheticKind::SafeRisky2d),
            "gaussian-mix" => Ok(SyntheticKind::GaussianMix),
            other => Err(Error::invalid(format!("unknown synthetic objective '{other}'"))),
        }
    }
}

/// Isotropic Gaussian bump `height · exp(−‖x − center‖² / (2 width²))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub center: Vec<f64>,
    pub height: f64,
    pub width: f64,
}

/// Sum of Gaussian bumps on the unit hypercube.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticObjective {
    dim: usize,
    peaks: Vec<Peak>,
}

impl SyntheticObjective {
    pub fn from_peaks(peaks: Vec<Peak>) -> Result<Self> {
        let dim = peaks
            .first()
            .map(|p| p.center.len())
            .ok_or_else(|| Error::invalid("at least one peak is required"))?;
        if dim == 0 {
            return Err(Error::invalid("peaks need a non-empty center"));
        }
        for p in &peaks {
            if p.center.len() != dim {
                return Err(Error::invalid("all peaks must share a dimension"));
            }
            if !(p.width > 0.0) || !p.height.is_finite() || p.center.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid("peak widths must be positive and values finite"));
            }
        }
        Ok(Self { dim, peaks })
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.peaks
            .iter()
            .map(|p| {
                let r2: f64 = p.center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                p.height * (-r2 / (2.0 * p.width * p.width)).exp()
            })
            .sum()
    }
}

impl Objective for SyntheticObjective {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, u: &[f64]) -> Result<Evaluation> {
        check_dim(self.dim, u)?;
        Ok(Evaluation::collision_free(self.value(u)))
    }
}

fn peak(center: &[f64], height: f64, width: f64) -> Peak {
    Peak {
        center: center.to_vec(),
        height,
        width,
    }
}

/// Benchmark functions with a narrow tall peak next to a broad lower one.
pub fn make_synthetic_objective(kind: SyntheticKind) -> SyntheticObjective {
    let peaks = match kind {
        SyntheticKind::SafeRisky1d => vec![peak(&[0.2], 1.0, 0.01), peak(&[0.7], 0.8, 0.1)],
        SyntheticKind::SafeRisky2d => vec![
            peak(&[0.2, 0.25], 1.0, 0.02),
            peak(&[0.7, 0.65], 0.8, 0.12),
        ],
        SyntheticKind::GaussianMix => vec![
            peak(&[0.15, 0.8], 0.9, 0.025),
            peak(&[0.55, 0.3], 0.7, 0.1),
            peak(&[0.85, 0.75], 0.5, 0.2),
        ],
    };
    SyntheticObjective::from_peaks(peaks).expect("bundled peaks are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in [
            SyntheticKind::SafeRisky1d,
            SyntheticKind::SafeRisky2d,
            SyntheticKind::GaussianMix,
        ] {
            assert_eq!(k.name().parse::<SyntheticKind>().unwrap(), k);
        }
        assert!("rosenbrock".parse::<SyntheticKind>().is_err());
    }

    #[test]
    fn dimension_is_checked() {
        let f = make_synthetic_objective(SyntheticKind::SafeRisky2d);
        assert!(f.evaluate(&[0.5]).is_err());
        assert_eq!(f.evaluate(&[0.5, 0.5]).unwrap().colliding_joints, 0);
    }
}
