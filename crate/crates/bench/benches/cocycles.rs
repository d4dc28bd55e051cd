use criterion::{criterion_group, criterion_main, Criterion};
use posetcoh::cocycle::{check_cocycle, check_path_independence, find_intertwiner, trivialize};
use posetcoh::homotopy::RelationMode;
use posetcoh::spacetime::{diamond_poset, Topology};
use posetcoh::{Cocycle, LocalNet, Region, Tolerances};
use std::hint::black_box;

fn cocycles(c: &mut Criterion) {
    let p = diamond_poset(Topology::Cylinder { m: 6, t: 2 })
        .unwrap()
        .poset;
    let full = Region::full(p.len());
    let tol = Tolerances::default();
    let w = Cocycle::winding(&p, &full, 1, 0.3).unwrap();
    let twisted = w.twist(|a| posetcoh::linalg::phase(1, 0.1 * a as f64));
    let net = LocalNet::full(p.len(), 1);
    c.bench_function("check_cocycle winding cylinder(6,2)", |b| {
        b.iter(|| {
            check_cocycle(
                black_box(&w),
                &p,
                Some(&net),
                RelationMode::Generating,
                &tol,
            )
        })
    });
    c.bench_function("path independence winding cylinder(6,2)", |b| {
        b.iter(|| check_path_independence(black_box(&w), &p, &full, &tol).unwrap())
    });
    c.bench_function("trivialize winding cylinder(6,2)", |b| {
        b.iter(|| trivialize(black_box(&w), &p, &full, &tol).unwrap())
    });
    c.bench_function("find_intertwiner twisted winding cylinder(6,2)", |b| {
        b.iter(|| find_intertwiner(black_box(&w), &twisted, &p, &net, true, &tol).unwrap())
    });
}

criterion_group!(benches, cocycles);
criterion_main!(benches);
