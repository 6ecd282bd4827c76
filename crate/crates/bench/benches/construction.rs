use std::hint::black_box;

use coheyting::caps::Caps;
use coheyting::kripke::{free_quotient, universal_frame};
use coheyting::verify::{run_suite, Config};
use coheyting::{canonical_form, enumerate_posets, Algebra, Poset};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn universal(c: &mut Criterion) {
    let caps = Caps::default();
    let mut g = c.benchmark_group("universal_frame");
    for (n, d) in [(1, 3), (2, 2), (1, 4)] {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{n},{d}")),
            &(n, d),
            |b, &(n, d)| b.iter(|| universal_frame(n, d, &caps).unwrap().len()),
        );
    }
    g.finish();
}

fn posets(c: &mut Criterion) {
    let caps = Caps::default();
    let mut g = c.benchmark_group("enumerate_posets");
    g.sample_size(10);
    for n in [4, 5, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_posets(n, &caps).unwrap().len())
        });
    }
    g.finish();
}

fn canonical(c: &mut Criterion) {
    let caps = Caps::default();
    let u = universal_frame(2, 2, &caps).unwrap();
    let frame = u.model.frame().clone();
    let colors = u.model.colors().to_vec();
    let antichain = Poset::antichain(8);
    c.bench_function("canonical_form/U(2,2)", |b| {
        b.iter(|| canonical_form(black_box(&frame), &colors, &caps).unwrap())
    });
    c.bench_function("canonical_form/antichain8", |b| {
        b.iter(|| canonical_form(black_box(&antichain), &[(); 8], &caps).unwrap())
    });
}

fn closure(c: &mut Criterion) {
    let caps = Caps::default();
    let fq = free_quotient(1, 3, &caps).unwrap();
    let chain = Algebra::new(Poset::chain(6));
    let gens: Vec<_> = (0..6).step_by(2).map(|p| chain.principal(p)).collect();
    let mut g = c.benchmark_group("subalgebra_generated");
    g.bench_function("F(1,3)", |b| {
        b.iter(|| {
            fq.algebra
                .subalgebra_generated(&fq.gens, caps.max_elements)
                .unwrap()
                .len()
        })
    });
    g.bench_function("chain6", |b| {
        b.iter(|| {
            chain
                .subalgebra_generated(&gens, caps.max_elements)
                .unwrap()
                .len()
        })
    });
    g.finish();
}

fn suites(c: &mut Criterion) {
    let cfg = Config {
        budget: 1000,
        max_points: 5,
        ..Config::default()
    };
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for name in ["s2-identities", "quotient-fiber"] {
        g.bench_function(name, |b| b.iter(|| run_suite(name, &cfg).unwrap().cases));
    }
    g.finish();
}

criterion_group!(benches, universal, posets, canonical, closure, suites);
criterion_main!(benches);
