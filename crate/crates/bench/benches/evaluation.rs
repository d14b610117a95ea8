use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modheat::h_family::{h_alpha, HFamilyArgs};
use modheat::multivar_hyper::appell_f1;
use modheat::special_fn::gauss_2f1;
use modheat::spectral::{self, SpectralRoute};
use modheat::symbol;
use modheat::{GaussParams, HRoute, MultiIndex};

fn gauss(c: &mut Criterion) {
    let p = GaussParams::new(1.3, 0.7, 2.9);
    let mut g = c.benchmark_group("2f1");
    for z in [0.3, -0.8, 0.95] {
        g.bench_with_input(BenchmarkId::from_parameter(z), &z, |b, &z| b.iter(|| gauss_2f1(p, black_box(z), 1e-14)));
    }
    g.finish();
    c.bench_function("appell_f1/near_one", |b| {
        b.iter(|| appell_f1(7.0, 1.0, 1.0, 4.0, black_box(0.8), black_box(0.96), 1e-12))
    });
}

fn h_family(c: &mut Criterion) {
    let alpha = MultiIndex::new(vec![2, 1, 1]).unwrap();
    let args = HFamilyArgs::new(vec![0.4, -0.3], 4.0);
    let mut g = c.benchmark_group("h_alpha");
    for route in HRoute::ALL {
        g.bench_function(route.name(), |b| b.iter(|| h_alpha(&alpha, black_box(&args), route, 1e-12)));
    }
    g.finish();
}

fn spectral_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral");
    for route in SpectralRoute::ALL {
        g.bench_function(format!("k_delta/{route}"), |b| b.iter(|| spectral::k_delta(black_box(0.6), 3.5, route)));
        g.bench_function(format!("h_delta/{route}"), |b| b.iter(|| spectral::h_delta(black_box(0.6), 1.7, 3.5, route)));
    }
    g.bench_function("cm_residual", |b| {
        b.iter(|| spectral::cm_residual(black_box(0.7), 1.9, 5.5, SpectralRoute::Closed))
    });
    g.finish();
}

fn derivation(c: &mut Criterion) {
    c.bench_function("b2_integrated", |b| b.iter(symbol::b2_integrated));
}

criterion_group!(benches, gauss, h_family, spectral_functions, derivation);
criterion_main!(benches);
