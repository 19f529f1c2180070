use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use g2forge::cech::FiniteComplex;
use g2forge::chern_weil::verify_adjunction_identity;
use g2forge::cy_product::{divisor_solve, SolveMode, SubTorus4};
use g2forge::exterior::parse_form;
use g2forge::torus_field::{gerbe_connection, linking_number};
use g2forge::{CoassocTorus, Convention, G2Structure};

fn exterior(c: &mut Criterion) {
    let g2 = G2Structure::model(Convention::Default);
    let a = parse_form("e12 - 3/2 e34 + e56 + 2 e17").unwrap();
    c.bench_function("wedge_psi_then_hodge", |b| b.iter(|| black_box(&a).wedge(g2.psi()).hodge()));
    c.bench_function("decompose2", |b| b.iter(|| g2.decompose2(black_box(&a)).unwrap()));
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    g.bench_function("identity_suite", |b| {
        b.iter(|| G2Structure::from_phi(G2Structure::model(Convention::Default).phi().clone(), "bench").unwrap().identity_suite())
    });
    g.bench_function("adjunction_identity", |b| b.iter(|| verify_adjunction_identity().unwrap()));
    g.finish();
}

fn gerbe(c: &mut Criterion) {
    let g2 = G2Structure::model(Convention::Default);
    let torus = CoassocTorus::new([1, 2, 3], [0.5; 3], g2).unwrap();
    let mut g = c.benchmark_group("gerbe_connection");
    g.sample_size(10);
    for k in [4, 8, 12] {
        g.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| b.iter(|| gerbe_connection(&torus, 0.03, k, g2).unwrap()));
    }
    g.finish();
    let sol = gerbe_connection(&torus, 0.03, 8, g2).unwrap();
    let mut g = c.benchmark_group("linking");
    g.sample_size(10);
    g.bench_function("k8_order26", |b| b.iter(|| linking_number(&sol, 0.25, 26).unwrap()));
    g.finish();
}

fn toy_and_cech(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipelines");
    g.sample_size(10);
    let d = SubTorus4::divisor_z3([0.5, 0.5], 0.5);
    g.bench_function("divisor_k6", |b| b.iter(|| divisor_solve(&d, 0.03, 0.03, 6, SolveMode::Strict).unwrap()));
    let t7 = FiniteComplex::cubical_torus(7, 2).unwrap();
    g.bench_function("t7_h3", |b| b.iter(|| t7.cohomology(3).unwrap()));
    g.finish();
}

criterion_group!(benches, exterior, identities, gerbe, toy_and_cech);
criterion_main!(benches);
