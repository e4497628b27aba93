use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symcomp_core::partitions::{col, enumerate_partitions, Partition};
use symcomp_core::random::{random_filtered_complex, FilteredParams};
use symcomp_core::spectral::compute_pages;
use symcomp_core::strata::salvetti::Salvetti;
use symcomp_core::strata::plane_configuration_homology;
use symcomp_core::transfer::{ConfigurationModel, DoldSystem};

fn salvetti(c: &mut Criterion) {
    let mut g = c.benchmark_group("salvetti_homology");
    for n in 2..=4 {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| Salvetti::new(n).unwrap().chain_complex().unwrap().homology())
        });
    }
    g.finish();
    let lambda: Partition = "1+1+2".parse().unwrap();
    c.bench_function("plane_oracle_1+1+2", |b| b.iter(|| plane_configuration_homology(black_box(&lambda)).unwrap()));
}

fn pages(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let instances: Vec<_> = (0..8).map(|_| random_filtered_complex(&mut rng, FilteredParams::default())).collect();
    c.bench_function("spectral_pages_8_random", |b| {
        b.iter(|| {
            for fc in &instances {
                black_box(compute_pages(fc).unwrap());
            }
        })
    });
}

fn collapses(c: &mut Criterion) {
    let mut g = c.benchmark_group("col_all_p");
    for k in [8usize, 12, 16] {
        let all = enumerate_partitions(k).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(k), &all, |b, all| {
            b.iter(|| {
                let lambda = &all[all.len() / 2];
                (0..=k).map(|p| col(lambda, p).unwrap().len()).sum::<usize>()
            })
        });
    }
    g.finish();
}

fn dold(c: &mut Criterion) {
    let model = ConfigurationModel::mixed(2, 0);
    c.bench_function("dold_from_mixed_model_top4", |b| b.iter(|| DoldSystem::from_model(black_box(&model), 4).unwrap()));
}

criterion_group!(benches, salvetti, pages, collapses, dold);
criterion_main!(benches);
