use criterion::{criterion_group, criterion_main, Criterion};
use posetcoh::homotopy::{abelianization, pi1_presentation, simplify_presentation};
use posetcoh::spacetime::{circle_poset, diamond_poset, Topology};
use posetcoh::{decide_homotopy, Path, Simplex1};
use std::hint::black_box;

fn presentations(c: &mut Criterion) {
    let dp = diamond_poset(Topology::Cylinder { m: 6, t: 2 }).unwrap();
    let p = dp.poset;
    c.bench_function("pi1_presentation cylinder(6,2)", |b| {
        b.iter(|| pi1_presentation(black_box(&p), 0).unwrap())
    });
    let g = pi1_presentation(&p, 0).unwrap();
    c.bench_function("abelianization cylinder(6,2)", |b| {
        b.iter(|| abelianization(black_box(&g)))
    });
    c.bench_function("tietze cylinder(6,2)", |b| {
        b.iter(|| simplify_presentation(black_box(&g)))
    });
}

fn decisions(c: &mut Criterion) {
    let n = 6;
    let p = circle_poset(n);
    // Once around the circle through arcs and overlaps, against staying put.
    let mut around = Vec::new();
    for i in 0..n {
        let o = n + i;
        let next = (i + 1) % n;
        around.push(Simplex1::new(o, next, next));
        around.push(Simplex1::new(next, n + next, next));
    }
    let start = around[0].d1;
    let around = Path::new(around).unwrap();
    let stay = Path::degenerate(start);
    let detour = Path::new(vec![Simplex1::new(start, 1, 1), Simplex1::new(1, start, 1)]).unwrap();
    c.bench_function("decide non-homotopic circle(6)", |b| {
        b.iter(|| decide_homotopy(black_box(&p), &around, &stay, 12).unwrap())
    });
    c.bench_function("decide homotopic detour circle(6)", |b| {
        b.iter(|| decide_homotopy(black_box(&p), &detour, &stay, 12).unwrap())
    });
}

criterion_group!(benches, presentations, decisions);
criterion_main!(benches);
