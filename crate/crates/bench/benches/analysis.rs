use criterion::{black_box, criterion_group, criterion_main, Criterion};
use isostat::laman::{self, Graph};
use isostat::maxwell;
use isostat::numrank::{self, DEFAULT_RANK_TOL};
use isostat::symdetect::{self, DEFAULT_GEOM_TOL};
use isostat_bench::{rotor, stellated_icosahedron};

fn bench(c: &mut Criterion) {
    let f = stellated_icosahedron();
    c.bench_function("symmetry stellated icosahedron", |b| {
        b.iter(|| symdetect::analyze_symmetry(black_box(&f), DEFAULT_GEOM_TOL).unwrap())
    });
    c.bench_function("mobility stellated icosahedron", |b| {
        b.iter(|| numrank::mobility(black_box(&f), DEFAULT_RANK_TOL).unwrap())
    });
    let sym = symdetect::analyze_symmetry(&f, DEFAULT_GEOM_TOL).unwrap();
    c.bench_function("conditions stellated icosahedron", |b| {
        b.iter(|| maxwell::isostatic_necessary(black_box(&f), &sym))
    });
    c.bench_function("character table Ih", |b| {
        b.iter(|| maxwell::character_table(black_box(&sym.group)).unwrap())
    });
    let big = Graph::from_framework(&rotor(60));
    c.bench_function("pebble game 120 joints", |b| {
        b.iter(|| laman::pebble_game_2_3(black_box(&big)).unwrap())
    });
    c.bench_function("subgraph scan cap 5", |b| {
        b.iter(|| laman::subgraph_maxwell_scan_3d(black_box(&f), 5).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
