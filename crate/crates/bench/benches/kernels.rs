use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zeqsing::coeffs::Tower;
use zeqsing::elim::{discriminant, discriminant_locus};
use zeqsing::equising::{check_nu_ze_family, reduced_discriminant, shear_family};
use zeqsing::puiseux::{hensel_lift_parameter, newton_puiseux, parameterize_wedges};
use zeqsing::series::weierstrass_prepare;
use zeqsing::Rational;
use zeqsing_bench::{curve, family, CONE};

fn prepare(c: &mut Criterion) {
    let f = family("z^2 - x^2 - (1+t)*y^2 + z^3 + x*y*z");
    let mut g = c.benchmark_group("weierstrass_prepare");
    for n in [8u32, 12, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| weierstrass_prepare(black_box(&f), 2, n).unwrap()));
    }
    g.finish();
}

fn discriminants(c: &mut Criterion) {
    let sh = shear_family(&family(CONE)).unwrap();
    c.bench_function("discriminant/sheared cone", |b| b.iter(|| discriminant_locus(black_box(&sh), 2, 16, false).unwrap()));
    let (_, p) = weierstrass_prepare(&family("z^3 - x*y*z + x^4 - y^5 + t*x^2*z"), 2, 12).unwrap();
    c.bench_function("discriminant/cubic resultant", |b| b.iter(|| discriminant(black_box(&p))));
    c.bench_function("reduced discriminant/sheared cone", |b| b.iter(|| reduced_discriminant(black_box(&sh), 2, 1, 16).unwrap()));
}

fn puiseux(c: &mut Criterion) {
    let g = curve("y^3 - x^7 + t*x^5*y");
    let g0 = g.eval_var(2, &Rational::from(0)).unwrap();
    c.bench_function("newton_puiseux/E12", |b| {
        b.iter(|| {
            let mut t: Tower = None;
            newton_puiseux(black_box(&g0), 32, &mut t).unwrap()
        })
    });
    let mut t: Tower = None;
    let br = newton_puiseux(&g0, 32, &mut t).unwrap();
    c.bench_function("hensel_lift_parameter/E12 N=16", |b| b.iter(|| hensel_lift_parameter(black_box(&br), &g, 16).unwrap()));
}

fn pipelines(c: &mut Criterion) {
    let f = family(CONE);
    c.bench_function("check_nu_ze_family/cone", |b| b.iter(|| check_nu_ze_family(black_box(&f), 16, 20, 1).unwrap()));
    let sh = shear_family(&f).unwrap();
    let mut g = c.benchmark_group("parameterize_wedges/cone");
    g.sample_size(10);
    for n in [8u32, 16] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| {
                let mut t: Tower = None;
                parameterize_wedges(black_box(&sh), n, &mut t).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, prepare, discriminants, puiseux, pipelines);
criterion_main!(benches);
