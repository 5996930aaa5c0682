use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cgeom::catalog::{load_example, run_example};
use cgeom::verify::Verifier;

fn curvature(c: &mut Criterion) {
    let (job, _) = load_example("5.3").unwrap();
    let m = &job.setup.total;
    let p = job.points[0].clone();
    c.bench_function("christoffel 3d", |b| b.iter(|| m.christoffel_symbols(black_box(&p)).unwrap()));
    c.bench_function("ricci 3d", |b| b.iter(|| m.ricci_matrix(black_box(&p)).unwrap()));
}

fn identities(c: &mut Criterion) {
    let (job, _) = load_example("5.3").unwrap();
    let v = Verifier::new(&job.setup, 1e-6, 42);
    let p = job.points[0].clone();
    c.bench_function("point context 5.3", |b| b.iter(|| v.point(black_box(&p)).unwrap()));
    let pc = v.point(&p).unwrap();
    for id in ["G2.12", "G2.16", "E3.3", "R3.13"] {
        c.bench_function(&format!("{id} on 5.3"), |b| b.iter(|| v.run_at(id, &pc).unwrap()));
    }
}

fn catalog(c: &mut Criterion) {
    c.bench_function("example 5.1", |b| b.iter(|| run_example("5.1", 1e-6, None).unwrap()));
}

criterion_group!(benches, curvature, identities, catalog);
criterion_main!(benches);
