use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mmdist::boxdist::{box_distance, BoxOptions};
use mmdist::eurandom::{eurandom_distance, EurOptions};
use mmdist::generate::{dirichlet, random_space, rng};
use mmdist::prohorov::prohorov_bruteforce;
use mmdist::space::MMSpace;
use std::hint::black_box;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("sequential", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("parallel", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn spaces(seed: u64, n: usize, m: usize) -> (MMSpace, MMSpace) {
    let mut r = rng(seed);
    (random_space(n, &mut r).unwrap(), random_space(m, &mut r).unwrap())
}

fn bench(c: &mut Criterion) {
    let pools = pools();

    let mut g = c.benchmark_group("prohorov_bruteforce_14");
    let mut r = rng(1);
    let x = random_space(14, &mut r).unwrap();
    let nu = dirichlet(14, &mut r);
    for (name, pool) in &pools {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| prohorov_bruteforce(black_box(x.mass()), &nu, x.space()).unwrap()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("box_exact_4x4");
    let (x, y) = spaces(2, 4, 4);
    for (name, pool) in &pools {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| box_distance(black_box(&x), &y, BoxOptions::exact()).unwrap()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("eurandom_3x2");
    g.sample_size(10);
    let (x, y) = spaces(3, 3, 2);
    for (name, pool) in &pools {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| eurandom_distance(black_box(&x), &y, &EurOptions::default()).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
