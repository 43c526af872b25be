use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use locres::hyperfac::{assemble_block_mf, ci_homotopies, higher_homotopies, homotopy_chain};
use locres::localdiv::{mora_divide, Budget};
use locres::parse::{parse_poly, parse_polys};
use locres::periodicity::{an_pair, check_asymptotic_periodicity, PeriodicityInstance};
use locres::resolution::{free_resolution, twist_exactness_check};
use locres::stdbasis::standard_basis;
use locres::RingSpec;

const IDEALS: &[(&str, &[&str])] = &[
    ("koszul2", &["x", "y"]),
    ("three_gen", &["x^2+y^2", "x*y", "y^3"]),
    ("cusp", &["x^2+y^3", "x*y^2", "y^5"]),
];

fn division(c: &mut Criterion) {
    let r = RingSpec::q(&["x", "y", "z"]);
    let f = parse_poly("x^3*y+y^5*z+x^2-z^4+3*x*y*z", &r).unwrap();
    let g = parse_polys(&["x^2+y^2*z", "x*y-z^3", "y^3+x*z"], &r).unwrap();
    c.bench_function("mora_divide/3vars", |b| b.iter(|| mora_divide(black_box(&f), &g, &r).unwrap()));
}

fn bases_and_resolutions(c: &mut Criterion) {
    let r = RingSpec::q(&["x", "y"]);
    let mut group = c.benchmark_group("resolution");
    for (name, gens) in IDEALS {
        let g = parse_polys(gens, &r).unwrap();
        group.bench_with_input(BenchmarkId::new("standard_basis", name), &g, |b, g| {
            b.iter(|| standard_basis(g, &r).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("free_resolution", name), &g, |b, g| {
            b.iter(|| free_resolution(g, &r).unwrap())
        });
        let res = free_resolution(&g, &r).unwrap();
        group.bench_with_input(BenchmarkId::new("twist_check_cap10", name), &res, |b, res| {
            b.iter(|| twist_exactness_check(res, 1, 10).unwrap())
        });
    }
    group.finish();
}

fn factorizations(c: &mut Criterion) {
    let r = RingSpec::q(&["x", "y"]);
    let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap(), &r).unwrap();
    let w = parse_poly("x^2+y^2", &r).unwrap();
    c.bench_function("matfac/three_gen", |b| {
        b.iter(|| {
            let mut budget = Budget::default();
            let fam = higher_homotopies(homotopy_chain(&res, &w, &mut budget).unwrap(), &mut budget).unwrap();
            assemble_block_mf(&fam, None).unwrap()
        })
    });
    let koszul = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
    let (w1, w2) = (parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap());
    c.bench_function("ci_homotopies/koszul2", |b| {
        b.iter(|| ci_homotopies(&koszul, &w1, &w2, None, &mut Budget::default()).unwrap())
    });
}

fn periodicity(c: &mut Criterion) {
    let r = RingSpec::q(&["x", "y"]);
    let mut group = c.benchmark_group("periodicity");
    for (a, e) in [(3, 4), (4, 5), (7, 9)] {
        let (am, bm, w) = an_pair(a, e, &r).unwrap();
        let inst = PeriodicityInstance::from_pair(&am, &bm, &w, &r).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{a}_{e}")), &inst, |b, inst| {
            b.iter(|| check_asymptotic_periodicity(inst))
        });
    }
    group.finish();
}

criterion_group!(benches, division, bases_and_resolutions, factorizations, periodicity);
criterion_main!(benches);
