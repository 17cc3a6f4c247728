use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use safegrasp::acquisition::{expected_improvement, maximize_acquisition};
use safegrasp::gp::{log_marginal_likelihood, KernelHyperparams};
use safegrasp::grasp::{evaluate_grasp, grasp_wrench_volume, GraspScene, SearchMode};
use safegrasp::unscented::{unscented_expected_improvement, InputNoise};
use safegrasp_bench::{dataset, model, wrench_cloud};

fn surrogate(c: &mut Criterion) {
    let mut g = c.benchmark_group("surrogate");
    for n in [40, 160] {
        let data = dataset(n, 3, 1);
        let theta = KernelHyperparams::new(vec![-1.5; 3], 0.0).unwrap();
        g.bench_with_input(BenchmarkId::new("log_marginal_likelihood", n), &n, |b, _| {
            b.iter(|| log_marginal_likelihood(black_box(&data), &theta, 1e-8).unwrap())
        });
        let m = model(n, 3, 10);
        let x = [0.31, 0.52, 0.77];
        g.bench_with_input(BenchmarkId::new("ei", n), &n, |b, _| {
            b.iter(|| expected_improvement(&m, black_box(&x), 1.0).unwrap())
        });
        let noise = InputNoise::default();
        g.bench_with_input(BenchmarkId::new("uei", n), &n, |b, _| {
            b.iter(|| unscented_expected_improvement(&m, black_box(&x), 1.0, &noise).unwrap())
        });
    }
    g.finish();
}

fn acquisition(c: &mut Criterion) {
    let m = model(60, 2, 10);
    c.bench_function("maximize_ei_d2_budget500", |b| {
        b.iter(|| {
            maximize_acquisition(|x| expected_improvement(&m, x, 1.5).unwrap(), 2, 500).unwrap()
        })
    });
}

fn grasping(c: &mut Criterion) {
    let cloud = wrench_cloud(16, 3);
    c.bench_function("grasp_wrench_volume_16", |b| {
        b.iter(|| grasp_wrench_volume(black_box(&cloud)))
    });
    let mut g = c.benchmark_group("evaluate_grasp");
    for object in ["glass", "bottle", "mug"] {
        let scene = GraspScene::bundled(object, SearchMode::TranslationRotation).unwrap();
        g.bench_function(object, |b| {
            b.iter(|| evaluate_grasp(&scene, black_box(&[0.5, 0.2, 0.5])).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, surrogate, acquisition, grasping);
criterion_main!(benches);
