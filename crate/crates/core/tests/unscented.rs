use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use safegrasp::acquisition::{best_observed_incumbent, expected_improvement};
use safegrasp::gp::{GpModel, KernelHyperparams, ObservationSet};
use safegrasp::optimizer::{make_synthetic_objective, SyntheticKind};
use safegrasp::unscented::{
    sigma_points, unscented_expected_improvement, unscented_incumbent, unscented_outcome,
};
use safegrasp::{Error, IncumbentKind, InputNoise};

fn random_model(seed: u64, n: usize, d: usize, m: usize) -> GpModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random()).collect())
        .collect();
    let ys: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().enumerate().map(|(i, v)| ((i + 3) as f64 * v).cos()).sum())
        .collect();
    let thetas: Vec<KernelHyperparams> = (0..m)
        .map(|_| {
            let ls: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..0.6)).collect();
            KernelHyperparams::from_natural(&ls, rng.random_range(0.5..2.0)).unwrap()
        })
        .collect();
    GpModel::fit(ObservationSet::from_rows(&rows, &ys).unwrap(), &thetas, 1e-8).unwrap()
}

/// GP posterior mean for one hyperparameter sample, computed from scratch
/// with a dense Gaussian elimination.
fn posterior_mean(model: &GpModel, i: usize, x: &[f64]) -> f64 {
    let data = model.data();
    let th = model.theta(i);
    let ls = th.lengthscales();
    let k = |a: &[f64], b: &[f64]| {
        let r = a
            .iter()
            .zip(b)
            .zip(&ls)
            .map(|((p, q), l)| ((p - q) / l).powi(2))
            .sum::<f64>()
            .sqrt();
        let s = 5f64.sqrt() * r;
        th.signal_variance() * (1.0 + s + s * s / 3.0) * (-s).exp()
    };
    let n = data.len();
    let diag = model.noise_variance() + model.jitter(i);
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row: Vec<f64> = (0..n).map(|c| k(data.x(r), data.x(c))).collect();
            row[r] += diag;
            row.push(data.ys()[r]);
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&p, &q| a[p][c].abs().total_cmp(&a[q][c].abs())).unwrap();
        a.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..=n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    let mut alpha = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|j| a[r][j] * alpha[j]).sum();
        alpha[r] = (a[r][n] - s) / a[r][r];
    }
    (0..n).map(|j| k(x, data.x(j)) * alpha[j]).sum()
}

/// `Σ_i w_i · mean_j μ_j(x_i)` with the sigma points written out by hand.
fn outcome_by_expansion(model: &GpModel, x: &[f64], sigma_x: f64, k: f64) -> f64 {
    let d = x.len();
    let off = ((d as f64 + k) * sigma_x * sigma_x).sqrt();
    let mut pts = vec![(x.to_vec(), k / (d as f64 + k))];
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut p = x.to_vec();
            p[i] = (p[i] + s * off).clamp(0.0, 1.0);
            pts.push((p, 0.5 / (d as f64 + k)));
        }
    }
    let m = model.num_samples();
    pts.iter()
        .map(|(p, w)| w * (0..m).map(|j| posterior_mean(model, j, p)).sum::<f64>() / m as f64)
        .sum()
}

#[test]
fn sigma_point_example() {
    let noise = InputNoise::new(0.03, 1.0).unwrap();
    let sp = sigma_points(&[0.5, 0.5], &noise).unwrap();
    let expected = [
        [0.5, 0.5],
        [0.551_962, 0.5],
        [0.448_038, 0.5],
        [0.5, 0.551_962],
        [0.5, 0.448_038],
    ];
    for (p, e) in sp.points.iter().zip(expected) {
        assert!((p[0] - e[0]).abs() < 1e-6 && (p[1] - e[1]).abs() < 1e-6, "{p:?}");
    }
    let w = [1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
    for (a, b) in sp.weights.iter().zip(w) {
        assert!((a - b).abs() < 1e-12);
    }
    let clamped = sigma_points(&[0.01, 0.5], &noise).unwrap();
    assert_eq!(clamped.points[2][0], 0.0);
}

#[test]
fn invalid_noise_is_rejected() {
    assert!(InputNoise::new(0.0, 1.0).is_err());
    assert!(InputNoise::new(0.03, -3.0).is_ok());
    let noise = InputNoise::new(0.03, -3.0).unwrap();
    assert!(sigma_points(&[0.5, 0.5], &noise).is_err());
}

#[test]
fn outcome_matches_direct_expansion() {
    let model = random_model(3, 12, 2, 3);
    let noise = InputNoise::new(0.03, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let x = [rng.random::<f64>(), rng.random::<f64>()];
        let got = unscented_outcome(&model, &x, &noise).unwrap();
        let want = outcome_by_expansion(&model, &x, 0.03, 1.0);
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
    // near a corner, where clamping kicks in
    let x = [0.005, 0.999];
    let got = unscented_outcome(&model, &x, &noise).unwrap();
    assert!((got - outcome_by_expansion(&model, &x, 0.03, 1.0)).abs() < 1e-8);
}

#[test]
fn uei_collapses_to_ei_without_noise() {
    let model = random_model(9, 15, 3, 4);
    let noise = InputNoise::new(1e-12, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let x: Vec<f64> = (0..3).map(|_| rng.random()).collect();
        let ei = expected_improvement(&model, &x, 0.5).unwrap();
        let uei = unscented_expected_improvement(&model, &x, 0.5, &noise).unwrap();
        assert!((ei - uei).abs() < 1e-9, "{ei} vs {uei}");
    }
}

#[test]
fn uei_is_the_weighted_ei_of_sigma_points() {
    let model = random_model(4, 10, 2, 2);
    let noise = InputNoise::new(0.05, 1.0).unwrap();
    let x = [0.3, 0.8];
    let sp = sigma_points(&x, &noise).unwrap();
    let want = sp.expectation(|p| expected_improvement(&model, p, 1.2).unwrap());
    let got = unscented_expected_improvement(&model, &x, 1.2, &noise).unwrap();
    assert!((got - want).abs() < 1e-12);
    assert!(got >= 0.0);
}

/// Dense fit of the narrow/broad test function, then an incumbent choice
/// between the two peak centers only.
#[test]
fn unscented_incumbent_prefers_the_broad_peak() {
    let f = make_synthetic_objective(SyntheticKind::SafeRisky1d);
    let rows: Vec<Vec<f64>> = (0..=100).map(|i| vec![i as f64 / 100.0]).collect();
    let ys: Vec<f64> = rows.iter().map(|r| f.value(r)).collect();
    let th = KernelHyperparams::from_natural(&[0.01], 1.0).unwrap();
    let model = GpModel::fit(ObservationSet::from_rows(&rows, &ys).unwrap(), &[th], 1e-8).unwrap();
    let candidates =
        ObservationSet::from_rows(&[vec![0.2], vec![0.7]], &[f.value(&[0.2]), f.value(&[0.7])]).unwrap();

    let wide = InputNoise::new(0.03, 1.0).unwrap();
    let u_narrow = outcome_by_expansion(&model, &[0.2], 0.03, 1.0);
    let u_broad = outcome_by_expansion(&model, &[0.7], 0.03, 1.0);
    assert!(u_broad > u_narrow, "{u_broad} vs {u_narrow}");
    let inc = unscented_incumbent(&model, &candidates, &wide).unwrap();
    assert_eq!((inc.index, inc.kind), (1, IncumbentKind::Unscented));
    assert!((inc.y_opt - u_broad).abs() < 1e-8);

    // with negligible noise the sharp peak wins again, like the best observation
    let tight = InputNoise::new(1e-6, 1.0).unwrap();
    let inc = unscented_incumbent(&model, &candidates, &tight).unwrap();
    assert_eq!(inc.index, best_observed_incumbent(&candidates).unwrap().index);
    assert_eq!(inc.index, 0);
}

#[test]
fn unscented_incumbent_edge_cases() {
    let model = random_model(5, 6, 2, 1);
    let noise = InputNoise::default();
    let single = ObservationSet::from_rows(&[vec![0.4, 0.4]], &[0.0]).unwrap();
    let inc = unscented_incumbent(&model, &single, &noise).unwrap();
    assert_eq!(inc.index, 0);
    assert_eq!(inc.x_opt, vec![0.4, 0.4]);
    let empty = ObservationSet::new(2).unwrap();
    assert!(matches!(unscented_incumbent(&model, &empty, &noise), Err(Error::State(_))));
}

#[test]
fn incumbent_is_invariant_to_outcome_scaling() {
    let base = random_model(6, 14, 2, 3);
    let noise = InputNoise::default();
    let data = base.data().clone();
    let thetas: Vec<KernelHyperparams> = (0..3).map(|i| base.theta(i).clone()).collect();
    let inc = unscented_incumbent(&base, &data, &noise).unwrap();
    for a in [0.1, 3.0, 250.0] {
        let rows: Vec<Vec<f64>> = data.rows().map(<[f64]>::to_vec).collect();
        let ys: Vec<f64> = data.ys().iter().map(|y| a * y).collect();
        let scaled = GpModel::fit(ObservationSet::from_rows(&rows, &ys).unwrap(), &thetas, 1e-8).unwrap();
        let inc2 = unscented_incumbent(&scaled, &data, &noise).unwrap();
        assert_eq!(inc.index, inc2.index);
        assert!((inc2.y_opt - a * inc.y_opt).abs() < 1e-8 * a.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn weights_sum_to_one(d in 1usize..8, k in 0.0..5.0f64, sigma in 1e-4..0.2f64) {
        let noise = InputNoise::new(sigma, k).unwrap();
        let sp = sigma_points(&vec![0.5; d], &noise).unwrap();
        prop_assert_eq!(sp.points.len(), 2 * d + 1);
        let total: f64 = sp.weights.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn affine_maps_are_exact_in_the_interior(
        center in prop::collection::vec(0.25..0.75f64, 1..5),
        coef in prop::collection::vec(-3.0..3.0f64, 5),
        offset in -2.0..2.0f64,
    ) {
        let noise = InputNoise::new(0.03, 1.0).unwrap();
        let sp = sigma_points(&center, &noise).unwrap();
        let g = |x: &[f64]| offset + x.iter().zip(&coef).map(|(a, b)| a * b).sum::<f64>();
        prop_assert!((sp.expectation(g) - g(&center)).abs() < 1e-12);
    }

    #[test]
    fn points_stay_in_the_cube(center in prop::collection::vec(0.0..=1.0f64, 1..5), sigma in 1e-3..0.5f64) {
        let noise = InputNoise::new(sigma, 1.0).unwrap();
        let sp = sigma_points(&center, &noise).unwrap();
        for p in &sp.points {
            prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        prop_assert_eq!(&sp.points[0], &center);
    }
}
