use crate::error::{Error, Result};
use crate::gp::{GpModel, ObservationSet, Prediction};
use crate::normal;

/// Improvement expected from one Gaussian component over `y_best`.
#[inline]
pub fn expected_improvement_component(p: Prediction, y_best: f64) -> f64 {
    let gap = p.mean - y_best;
    let sd = p.std_dev();
    if sd <= 0.0 {
        return gap.max(0.0);
    }
    let z = gap / sd;
    (gap * normal::cdf(z) + sd * normal::pdf(z)).max(0.0)
}

/// Expected improvement under the equally weighted predictive mixture:
/// the mean over hyperparameter samples of the closed-form Gaussian EI.
pub fn expected_improvement(model: &GpModel, x: &[f64], y_best: f64) -> Result<f64> {
    model.check_point(x)?;
    let mut scratch = Vec::with_capacity(model.data().len());
    Ok(expected_improvement_with(model, x, y_best, &mut scratch))
}

pub(crate) fn expected_improvement_with(
    model: &GpModel,
    x: &[f64],
    y_best: f64,
    scratch: &mut Vec<f64>,
) -> f64 {
    let mut total = 0.0;
    model.for_each_prediction(&[x], scratch, |_, p| {
        total += expected_improvement_component(p, y_best);
    });
    total / model.num_samples() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncumbentKind {
    BestObserved,
    Unscented,
}

/// The query currently considered optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub index: usize,
    pub x_opt: Vec<f64>,
    pub y_opt: f64,
    pub kind: IncumbentKind,
}

/// Running maximum of the observed outcomes; ties go to the earliest query.
pub fn best_observed_incumbent(data: &ObservationSet) -> Result<Incumbent> {
    let index = argmax_first(data.ys().iter().copied())
        .ok_or_else(|| Error::State("no observations to pick an incumbent from".into()))?;
    Ok(Incumbent {
        index,
        x_opt: data.x(index).to_vec(),
        y_opt: data.ys()[index],
        kind: IncumbentKind::BestObserved,
    })
}

/// Index of the first maximal element.
pub(crate) fn argmax_first(values: impl IntoIterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(mean: f64, sd: f64) -> Prediction {
        Prediction {
            mean,
            variance: sd * sd,
        }
    }

    #[test]
    fn hand_values() {
        assert!((expected_improvement_component(pred(1.0, 1.0), 0.0) - 1.083_316).abs() < 1e-5);
        assert!((expected_improvement_component(pred(0.0, 1.0), 0.0) - 0.398_942).abs() < 1e-5);
        assert_eq!(expected_improvement_component(pred(0.4, 0.0), 0.4), 0.0);
        assert_eq!(expected_improvement_component(pred(0.9, 0.0), 0.4), 0.5);
    }

    #[test]
    fn far_below_incumbent_is_non_negative() {
        let v = expected_improvement_component(pred(-50.0, 0.1), 10.0);
        assert!(v >= 0.0);
    }

    #[test]
    fn incumbent_picks_max_then_lowest_index() {
        let d = ObservationSet::from_rows(&[vec![0.1], vec![0.2], vec![0.3]], &[0.1, 0.5, 0.3])
            .unwrap();
        let inc = best_observed_incumbent(&d).unwrap();
        assert_eq!(inc.index, 1);
        assert_eq!(inc.y_opt, 0.5);
        assert_eq!(inc.x_opt, vec![0.2]);

        let d = ObservationSet::from_rows(&[vec![0.1], vec![0.2]], &[0.5, 0.5]).unwrap();
        assert_eq!(best_observed_incumbent(&d).unwrap().index, 0);

        let d = ObservationSet::from_rows(&[vec![0.7]], &[-2.0]).unwrap();
        assert_eq!(best_observed_incumbent(&d).unwrap().index, 0);
    }

    #[test]
    fn empty_set_has_no_incumbent() {
        let d = ObservationSet::new(1).unwrap();
        assert!(matches!(best_observed_incumbent(&d), Err(Error::State(_))));
    }
}
