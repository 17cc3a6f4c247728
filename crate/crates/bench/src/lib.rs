//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use safegrasp::gp::{GpModel, KernelHyperparams, ObservationSet};
use safegrasp::grasp::Point3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points in `[0,1]^d` with a smooth response.
pub fn dataset(n: usize, d: usize, seed: u64) -> ObservationSet {
    let mut r = rng(seed);
    let mut data = ObservationSet::new(d).expect("d >= 1");
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| r.random()).collect();
        let y = x.iter().map(|v| (5.0 * v).sin()).sum::<f64>();
        data.push(&x, y).expect("finite point in the unit cube");
    }
    data
}

/// A model with `m` identical moderate hyperparameter samples.
pub fn model(n: usize, d: usize, m: usize) -> GpModel {
    let theta = KernelHyperparams::new(vec![0.2f64.ln(); d], 0.0).expect("valid");
    GpModel::fit(dataset(n, d, 7), &vec![theta; m], 1e-8).expect("positive definite")
}

pub fn wrench_cloud(n: usize, seed: u64) -> Vec<Point3> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| [0; 3].map(|_| r.random_range(-1.0..1.0)))
        .collect()
}
