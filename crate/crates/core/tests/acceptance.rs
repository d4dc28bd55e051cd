//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Tolerances and fixtures are pinned
//! below.

mod common;

use common::{
    annulus, cylinder, deform, order_complex_h1, random_directed, random_path, random_su2, rng,
};
use num_complex::Complex64;
use posetcoh::cocycle::{
    check_cocycle, check_path_independence, find_intertwiner, induced_representation,
    representation_equivalence, trivialize,
};
use posetcoh::glue::{glue, GlueError, PunctureFamily};
use posetcoh::homotopy::{
    abelianization, generator_of, path_class, pi1_presentation, replay, simplify_presentation,
    GroupShape, HomotopyDecider, HomotopyVerdict, RelationMode, DEFAULT_DEPTH,
};
use posetcoh::linalg::{dist, identity, phase, unitarity_defect};
use posetcoh::refinement::{check_refinement, Refinement};
use posetcoh::sector::{Battery, SectorContext};
use posetcoh::spacetime::{circle_poset, generate_diamond_poset, CausalLattice, Topology};
use posetcoh::{CMat, Cocycle, Intertwiner, LocalNet, Path, Poset, Region, Simplex1, Tolerances};
use rand::Rng;
use std::f64::consts::PI;
use std::fmt::Display;
use std::time::{Duration, Instant};

const HOMOTOPY_INVARIANCE_TOL: f64 = 1e-8;
const REPRESENTATION_TOL: f64 = 1e-10;
const NATURALITY_TOL: f64 = 1e-9;
const AXIOM_TOL: f64 = 1e-9;
const CONJUGATE_TOL: f64 = 1e-10;
const CORRUPTION_ANGLE: f64 = PI / 7.0;

const DIRECTED_BUDGET: Duration = Duration::from_secs(10);
const CIRCLE_MODEL_BUDGET: Duration = Duration::from_secs(5);
const DIRECTEDNESS_BUDGET: Duration = Duration::from_secs(1);

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn ok<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn full(p: &Poset) -> Region {
    Region::full(p.len())
}

fn directed_posets_are_simply_connected() -> Verdict {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut loops = 0;
    for k in 0..20 {
        let n = rng.random_range(4..=12);
        let p = random_directed(&mut rng, n, 0.35);
        ensure!(p.is_directed(), "poset {k} is not directed");
        let g = ok(pi1_presentation(&p, 0))?;
        let shape = simplify_presentation(&g).shape;
        ensure!(shape == GroupShape::Trivial, "poset {k}: {shape:?}");
        let decider = ok(HomotopyDecider::new(&p, DEFAULT_DEPTH))?;
        for _ in 0..50 {
            let base = rng.random_range(0..n);
            let len = rng.random_range(1..=6);
            let walk = random_path(&mut rng, &p, base, len);
            let close = Path::single(Simplex1::new(walk.end(), base, n - 1));
            let lp = ok(walk.then(&close))?;
            let stay = Path::degenerate(base);
            match ok(decider.decide(&lp, &stay))? {
                HomotopyVerdict::Homotopic { witness } => {
                    let end = ok(replay(&p, &lp, &witness))?;
                    ensure!(end == stay, "poset {k}: witness for {lp} does not replay");
                }
                v => return Err(format!("poset {k}: loop {lp} is {}", v.label())),
            }
            loops += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < DIRECTED_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "20 posets trivial, {loops} loops collapsed with replayed witnesses"
    ))
}

fn circle_model_has_integer_homology() -> Verdict {
    let mut detail = Vec::new();
    for m in 4..=6 {
        let start = Instant::now();
        let dp = cylinder(m, 2);
        let (rank, torsion) = order_complex_h1(&dp.poset);
        ensure!(
            rank == 1 && torsion.is_empty(),
            "cylinder({m},2): oracle rank {rank}, torsion {torsion:?}"
        );
        let ab = abelianization(&ok(pi1_presentation(&dp.poset, 0))?);
        ensure!(
            ab.rank == 1 && ab.torsion.is_empty(),
            "cylinder({m},2): library rank {}, torsion {:?}",
            ab.rank,
            ab.torsion
        );
        let elapsed = start.elapsed();
        ensure!(
            elapsed < CIRCLE_MODEL_BUDGET,
            "cylinder({m},2) took {elapsed:?}"
        );
        detail.push(format!("m={m} {:.2}s", elapsed.as_secs_f64()));
    }
    Ok(format!("H1 = Z without torsion ({})", detail.join(", ")))
}

fn cylinders_are_not_directed() -> Verdict {
    let start = Instant::now();
    let (mut cylinders, mut tops) = (0, 0);
    for m in 4..=8 {
        for t in 1..=3 {
            let lattice = ok(CausalLattice::new(Topology::Cylinder { m, t }))?;
            for base in 2..=lattice.default_max_base() {
                let dp = ok(generate_diamond_poset(lattice.clone(), base))?;
                ensure!(
                    !dp.poset.is_directed(),
                    "cylinder({m},{t}) base {base} is directed"
                );
                cylinders += 1;
            }
        }
    }
    for width in 2..=6 {
        for t in 1..=3 {
            let lattice = ok(CausalLattice::new(Topology::Strip { width, t }))?;
            for base in 1..=width {
                let dp = ok(generate_diamond_poset(lattice.clone(), base))?;
                if dp.poset.top().is_some() {
                    ensure!(
                        dp.poset.is_directed(),
                        "strip({width},{t}) base {base} has a top but is not directed"
                    );
                    tops += 1;
                }
            }
        }
    }
    ensure!(tops > 0, "no strip fixture has a top element");
    let elapsed = start.elapsed();
    ensure!(elapsed < DIRECTEDNESS_BUDGET, "took {elapsed:?}");
    Ok(format!(
        "{cylinders} cylinders undirected, {tops} strips with a top directed"
    ))
}

/// Cocycles of dimensions 1 and 2 on a poset with a winding.
fn fixture_cocycles(p: &Poset, rng: &mut impl Rng) -> Result<Vec<Cocycle>, String> {
    let f = full(p);
    let fields: Vec<CMat> = (0..p.len()).map(|_| random_su2(rng)).collect();
    let twist: Vec<CMat> = (0..p.len()).map(|_| random_su2(rng)).collect();
    Ok(vec![
        Cocycle::trivial(p, &f, 2),
        ok(Cocycle::winding(p, &f, 1, 0.7))?,
        ok(Cocycle::winding(p, &f, 2, 1.3))?.twist(|a| twist[a].clone()),
        ok(Cocycle::holonomy(p, &f, &random_su2(rng)))?.twist(|a| twist[a].clone()),
        Cocycle::coboundary(p, &f, 2, |a| fields[a].clone()),
    ])
}

fn cocycles_are_homotopy_invariant() -> Verdict {
    let mut rng = rng(4);
    let fixtures = [cylinder(6, 2).poset, circle_poset(5)];
    let (mut worst, mut pairs, mut moved) = (0.0f64, 0, 0);
    for p in &fixtures {
        let zs = fixture_cocycles(p, &mut rng)?;
        for z in &zs {
            ensure!(
                check_cocycle(z, p, None, RelationMode::Generating, &tol()).passed(),
                "fixture cocycle fails the cocycle identity"
            );
        }
        for _ in 0..100 {
            let start = rng.random_range(0..p.len());
            let len = rng.random_range(1..=6);
            let a = random_path(&mut rng, p, start, len);
            let moves = rng.random_range(1..=6);
            let b = deform(&mut rng, p, &a, moves);
            moved += usize::from(a != b);
            for z in &zs {
                worst = worst.max(dist(&ok(z.evaluate(&a))?, &ok(z.evaluate(&b))?));
            }
            pairs += 1;
        }
    }
    ensure!(
        moved * 10 >= pairs * 9,
        "only {moved} of {pairs} pairs differ"
    );
    ensure!(worst <= HOMOTOPY_INVARIANCE_TOL, "deviation {worst:e}");
    Ok(format!(
        "{pairs} pairs ({moved} distinct) on 5 cocycles per fixture, max deviation {worst:.1e}"
    ))
}

fn word_value(images: &[CMat], word: &posetcoh::homotopy::Word, d: usize) -> CMat {
    let mut m = identity(d);
    for &l in word.letters() {
        let img = &images[generator_of(l)];
        m = if l > 0 { m * img } else { m * img.adjoint() };
    }
    m
}

/// The loop once around the circle poset from the overlap `n`, `k` times.
fn around(n: usize, k: i64) -> Path {
    let mut once = Vec::new();
    for i in 0..n {
        let next = (i + 1) % n;
        once.push(Simplex1::new(n + i, next, next));
        once.push(Simplex1::new(next, n + next, next));
    }
    let once = Path::new(once).expect("chained");
    let step = if k < 0 { once.reverse() } else { once };
    let mut v = Vec::new();
    for _ in 0..k.unsigned_abs() {
        v.extend_from_slice(step.simplices());
    }
    if v.is_empty() {
        return Path::degenerate(n);
    }
    Path::new(v).expect("chained")
}

fn windings_induce_characters() -> Verdict {
    let theta = 0.7;
    let mut rng = rng(5);
    let mut worst = 0.0f64;
    for n in 3..=6 {
        let p = circle_poset(n);
        let f = full(&p);
        let g = ok(pi1_presentation(&p, n))?;
        let shape = simplify_presentation(&g).shape;
        ensure!(
            matches!(
                shape,
                GroupShape::Free { rank: 1 } | GroupShape::FreeAbelian { rank: 1 }
            ),
            "C_{n}: group {shape:?}"
        );
        let w = ok(Cocycle::winding(&p, &f, 1, theta))?;
        let r = ok(induced_representation(&w, &g, &tol()))?;
        // The orientation of the generator is a convention; fix it from k = 1.
        let once = ok(w.evaluate(&around(n, 1)))?[(0, 0)];
        let sigma = if (once - Complex64::from_polar(1.0, theta)).norm()
            <= (once - Complex64::from_polar(1.0, -theta)).norm()
        {
            1.0
        } else {
            -1.0
        };
        for k in -3..=3 {
            let lp = around(n, k);
            let expected = phase(1, sigma * k as f64 * theta);
            let word = ok(path_class(&g, &lp))?;
            worst = worst.max(dist(&word_value(&r.images, &word, 1), &expected));
            worst = worst.max(dist(&ok(w.evaluate(&lp))?, &expected));
        }
        for d in [1, 2] {
            let wd = ok(Cocycle::winding(&p, &f, d, theta))?;
            let field: Vec<CMat> = (0..p.len())
                .map(|a| {
                    if d == 1 {
                        phase(1, 0.37 * (a + 1) as f64)
                    } else {
                        random_su2(&mut rng)
                    }
                })
                .collect();
            let twisted = wd.twist(|a| field[a].clone());
            let r1 = ok(induced_representation(&wd, &g, &tol()))?;
            let r2 = ok(induced_representation(&twisted, &g, &tol()))?;
            let u = representation_equivalence(&r1, &r2, &tol())
                .ok_or(format!("C_{n}, d={d}: twisted winding not equivalent"))?;
            worst = worst.max(unitarity_defect(&u));
            for (a, b) in r1.images.iter().zip(&r2.images) {
                worst = worst.max(dist(&(&u * a), &(b * &u)));
            }
        }
        let net = LocalNet::full(p.len(), 1);
        for phi in [1.9, -theta, theta + PI] {
            let wp = ok(Cocycle::winding(&p, &f, 1, phi))?;
            ensure!(
                ok(find_intertwiner(&w, &wp, &p, &net, true, &tol()))?.is_none(),
                "C_{n}: w_{theta} and w_{phi} are equivalent"
            );
        }
        let same = ok(Cocycle::winding(&p, &f, 1, theta + 2.0 * PI))?;
        ensure!(
            ok(find_intertwiner(&w, &same, &p, &net, true, &tol()))?.is_some(),
            "C_{n}: w_θ and w_θ+2π are not equivalent"
        );
    }
    ensure!(worst <= REPRESENTATION_TOL, "residual {worst:e}");
    Ok(format!(
        "C_3..C_6: characters, twisted equivalences and separations, max residual {worst:.1e}"
    ))
}

fn triviality_matches_path_independence() -> Verdict {
    let mut rng = rng(6);
    let (mut total, mut trivial) = (0, 0);
    for p in [cylinder(6, 2).poset, circle_poset(5)] {
        let f = full(&p);
        let mut battery = Vec::new();
        for i in 0..25 {
            battery.push(if i % 2 == 0 {
                let angles: Vec<f64> = (0..p.len()).map(|_| rng.random_range(-PI..PI)).collect();
                Cocycle::coboundary(&p, &f, 1, |a| phase(1, angles[a]))
            } else {
                let field: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
                Cocycle::coboundary(&p, &f, 2, |a| field[a].clone())
            });
        }
        for i in 0..25i32 {
            let theta = if i < 5 {
                2.0 * PI * f64::from(i - 2)
            } else {
                rng.random_range(0.1..2.0 * PI - 0.1)
            };
            let d = 1 + (i as usize % 2);
            let w = ok(Cocycle::winding(&p, &f, d, theta))?;
            let field: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
            battery.push(if d == 2 {
                w.twist(|a| field[a].clone())
            } else {
                w
            });
        }
        for (i, z) in battery.iter().enumerate() {
            let t = ok(trivialize(z, &p, &f, &tol()))?.is_trivial();
            let pi = ok(check_path_independence(z, &p, &f, &tol()))?.independent;
            ensure!(
                t == pi,
                "cocycle {i}: trivialize says {t}, path-independence says {pi}"
            );
            trivial += usize::from(t);
            total += 1;
        }
    }
    ensure!(
        trivial > 0 && trivial < total,
        "battery is one-sided: {trivial} of {total} trivial"
    );
    Ok(format!(
        "{total} cocycles ({trivial} trivial), no disagreement"
    ))
}

fn refinement_is_an_equivalence() -> Verdict {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for m in [6, 7] {
        let lattice = ok(CausalLattice::new(Topology::Cylinder { m, t: 2 }))?;
        let dp = ok(generate_diamond_poset(lattice, 4))?;
        let p = &dp.poset;
        let f = full(p);
        let sub = Region::from_members(
            p.len(),
            (0..p.len()).filter(|&e| dp.table.diamonds[e].base.len() <= 3),
        );
        let r = ok(Refinement::new(p, sub, None))?;
        let mut rng = rng(7 + m as u64);
        let v: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
        let w: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
        let su2 = ok(Cocycle::holonomy(p, &f, &random_su2(&mut rng)))?.twist(|a| w[a].clone());
        let ph: Vec<CMat> = (0..p.len()).map(|a| phase(1, 0.3 * a as f64)).collect();
        let u1 = ok(Cocycle::winding(p, &f, 1, 0.9))?;
        for (z, field) in [(su2, &v), (u1, &ph)] {
            let z1 = z.twist(|a| field[a].clone());
            let t = Intertwiner::from_entries(
                z.d(),
                (0..p.len()).map(|a| (a, field[a].clone())).collect(),
            );
            let report = ok(check_refinement(p, &r, &z, &z1, &t))?;
            ensure!(
                report.round_trip_exact,
                "cylinder({m},2): R(F(R z)) differs from R z by {:e}",
                report.round_trip_distance
            );
            worst = worst
                .max(report.naturality_residual)
                .max(report.unit_unitarity_defect)
                .max(report.unit_intertwining_residual);
            cases += 1;
        }
    }
    ensure!(worst <= NATURALITY_TOL, "naturality residual {worst:e}");
    Ok(format!(
        "{cases} cocycle pairs on two nested fixtures, exact round trip, max residual {worst:.1e}"
    ))
}

fn gluing_round_trips_and_detects_corruption() -> Verdict {
    let expected_norm = (Complex64::from_polar(1.0, CORRUPTION_ANGLE) - 1.0).norm();
    let mut corruptions = 0;
    for m in [8, 9] {
        let dp = cylinder(m, 2);
        let p = &dp.poset;
        let fam = ok(PunctureFamily::new(p, dp.all_punctures()))?;
        ensure!(
            fam.len() >= 3,
            "cylinder({m},2) has {} punctures",
            fam.len()
        );
        let mut rng = rng(8 + m as u64);
        let w: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
        let zs = [
            ok(Cocycle::winding(p, &full(p), 1, 0.4))?,
            ok(Cocycle::holonomy(p, &full(p), &random_su2(&mut rng)))?.twist(|a| w[a].clone()),
        ];
        let shared: Vec<Simplex1> = p
            .simplices1()
            .into_iter()
            .filter(|b| fam.containing(b).count() >= 2)
            .collect();
        for z in &zs {
            let locals = fam.restrict(z);
            let glued = ok(glue(&fam, &locals, p, &tol()))?;
            ensure!(
                glued.cocycle == *z,
                "cylinder({m},2): glued cocycle differs from the original"
            );
            for (k, b) in shared.iter().step_by(shared.len() / 6 + 1).enumerate() {
                let owners: Vec<usize> = fam.containing(b).collect();
                let target = if k % 2 == 0 {
                    owners[0]
                } else {
                    owners[owners.len() - 1]
                };
                let mut bad = locals.clone();
                let entry = bad[target]
                    .entries_mut()
                    .get_mut(b)
                    .ok_or("missing local entry")?;
                *entry *= Complex64::from_polar(1.0, CORRUPTION_ANGLE);
                let ids = |i: usize| fam.punctures()[i].id.clone();
                let (first, second) = if target == owners[0] {
                    (ids(owners[0]), ids(owners[1]))
                } else {
                    (ids(owners[0]), ids(target))
                };
                match glue(&fam, &bad, p, &tol()) {
                    Err(GlueError::OverlapConflict {
                        simplex,
                        first: f1,
                        second: s1,
                        norm,
                    }) => {
                        ensure!(
                            simplex == *b && f1 == first && s1 == second,
                            "corruption at {b} in {} reported as {simplex} between {f1} and {s1}",
                            ids(target)
                        );
                        ensure!(
                            (norm - expected_norm).abs() <= 1e-12,
                            "conflict norm {norm} for {b}"
                        );
                    }
                    other => {
                        return Err(format!(
                            "corruption at {b} not detected: {:?}",
                            other.map(|g| g.all_locals_independent)
                        ))
                    }
                }
                corruptions += 1;
            }
        }
    }
    Ok(format!(
        "exact round trips on cylinder(8,2) and (9,2), {corruptions} corruptions located"
    ))
}

fn category_axioms_hold() -> Verdict {
    let mut detail = Vec::new();
    for m in [8, 9] {
        let dp = cylinder(m, 2);
        let p = &dp.poset;
        let fam = ok(PunctureFamily::new(p, dp.all_punctures()))?;
        let net = LocalNet::full(p.len(), 1);
        let ctx = ok(SectorContext::new(p, &net, &fam, tol()))?;
        let battery = ok(Battery::windings(p, 1, &[0.4, 1.1]))?;
        let report = ctx.verify_category_axioms(&battery, &[]);
        let worst = report
            .rows
            .iter()
            .map(|r| r.residual)
            .fold(0.0f64, f64::max);
        if let Some(row) = report.rows.iter().find(|r| !r.passed) {
            return Err(format!(
                "cylinder({m},2): {} fails: {}",
                row.axiom,
                row.witness.clone().unwrap_or_default()
            ));
        }
        ensure!(worst <= AXIOM_TOL, "cylinder({m},2): residual {worst:e}");
        for z in &battery.objects {
            for z1 in &battery.objects {
                let t = ok(ctx.tensor(z, z1))?;
                for x in fam.punctures() {
                    let r = ok(check_path_independence(&t, p, &x.members, &tol()))?;
                    ensure!(
                        r.independent,
                        "cylinder({m},2): tensor product not path-independent on {}",
                        x.id
                    );
                }
            }
        }
        detail.push(format!(
            "m={m}: {} axioms, max residual {worst:.1e}",
            report.rows.len()
        ));
    }
    Ok(detail.join("; "))
}

fn conjugates_of_windings() -> Verdict {
    let dp = cylinder(8, 2);
    let p = &dp.poset;
    let fam = ok(PunctureFamily::new(p, dp.all_punctures()))?;
    let net = LocalNet::full(p.len(), 1);
    let ctx = ok(SectorContext::new(p, &net, &fam, tol()))?;
    let mut worst = 0.0f64;
    for theta in [0.4, 1.1, -2.3] {
        let w = ok(Cocycle::winding(p, &full(p), 1, theta))?;
        let bar = ok(ctx.conjugate(&w))?;
        worst = worst.max(ok(bar.distance(&ok(Cocycle::winding(
            p,
            &full(p),
            1,
            -theta,
        ))?))?);
        for prod in [ok(ctx.tensor(&w, &bar))?, ok(ctx.tensor(&bar, &w))?] {
            for m in prod.entries().values() {
                worst = worst.max(dist(m, &identity(1)));
            }
        }
        let stats = ok(ctx.statistics(&w))?;
        ensure!(
            stats.chi == Some(1) && stats.dimension == Some(1),
            "θ={theta}: χ={:?}, d={:?}",
            stats.chi,
            stats.dimension
        );
    }
    ensure!(worst <= CONJUGATE_TOL, "residual {worst:e}");
    Ok(format!(
        "three windings: conjugate is w_-θ, products are 1 within {worst:.1e}, χ=+1, d=1"
    ))
}

fn local_path_independence_glues() -> Verdict {
    let dp = annulus(6, 3, 1);
    let p = &dp.poset;
    let f = full(p);
    let fam = ok(PunctureFamily::new(p, dp.all_punctures()))?;
    ensure!(
        fam.uncovered(p).is_none(),
        "annulus punctures leave a simplex uncovered"
    );
    let mut rng = rng(11);
    let mut battery = vec![Cocycle::trivial(p, &f, 1)];
    for i in 0..4 {
        battery.push(if i % 2 == 0 {
            let angles: Vec<f64> = (0..p.len()).map(|_| rng.random_range(-PI..PI)).collect();
            Cocycle::coboundary(p, &f, 1, |a| phase(1, angles[a]))
        } else {
            let field: Vec<CMat> = (0..p.len()).map(|_| random_su2(&mut rng)).collect();
            Cocycle::coboundary(p, &f, 2, |a| field[a].clone())
        });
    }
    for theta in [0.4, 1.1, 2.0 * PI] {
        battery.push(ok(Cocycle::winding(p, &f, 1, theta))?);
    }
    let (mut premise, mut refused) = (0, 0);
    for (i, z) in battery.iter().enumerate() {
        let glued = ok(glue(&fam, &fam.restrict(z), p, &tol()))?;
        let global = glued
            .global
            .ok_or("annulus is not pathwise connected")?
            .independent;
        if glued.all_locals_independent {
            ensure!(
                global,
                "cocycle {i} is path-independent on every puncture but not globally"
            );
            premise += 1;
        } else {
            refused += 1;
        }
    }
    ensure!(
        premise >= 6 && refused >= 2,
        "{premise} locally independent, {refused} not"
    );

    // The same gluing with punctures that miss a simplex.
    let w = &battery[battery.len() - 2];
    let b = *p
        .simplices1()
        .iter()
        .rev()
        .find(|b| b.d1 != b.d0)
        .ok_or("no simplex")?;
    let kept: Vec<_> = fam
        .punctures()
        .iter()
        .filter(|x| !x.contains_simplex(&b))
        .cloned()
        .collect();
    let partial = ok(PunctureFamily::new(p, kept))?;
    let hole = partial
        .uncovered(p)
        .ok_or("dropping punctures left no hole")?;
    match glue(&partial, &partial.restrict(w), p, &tol()) {
        Err(GlueError::IncompleteCover { simplex }) if simplex == hole => {}
        other => {
            return Err(format!(
                "non-covering punctures not refused: {:?}",
                other.err()
            ))
        }
    }
    let small = annulus(4, 3, 1);
    let small_fam = ok(PunctureFamily::new(&small.poset, small.all_punctures()))?;
    let sw = ok(Cocycle::winding(&small.poset, &full(&small.poset), 1, 0.4))?;
    match glue(&small_fam, &small_fam.restrict(&sw), &small.poset, &tol()) {
        Err(GlueError::IncompleteCover { .. }) => {}
        other => return Err(format!("annulus(4,3,1) not refused: {:?}", other.err())),
    }
    Ok(format!("annulus(6,3,1): {premise} locally independent cocycles glue to globally independent ones, {refused} rejected locally; non-covering families refused"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "directed posets are simply connected",
            directed_posets_are_simply_connected,
        ),
        (
            "diamond cylinders have H1 = Z",
            circle_model_has_integer_homology,
        ),
        ("cylinders are not directed", cylinders_are_not_directed),
        (
            "cocycles are homotopy invariant",
            cocycles_are_homotopy_invariant,
        ),
        ("windings induce characters", windings_induce_characters),
        (
            "triviality matches path-independence",
            triviality_matches_path_independence,
        ),
        ("refinement is an equivalence", refinement_is_an_equivalence),
        (
            "gluing round trips and locates conflicts",
            gluing_round_trips_and_detects_corruption,
        ),
        ("tensor and symmetry axioms", category_axioms_hold),
        ("conjugates of simple sectors", conjugates_of_windings),
        (
            "local path-independence glues",
            local_path_independence_glues,
        ),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} {tag} [{secs:6.2}s] {name}: {detail}",
            i + 1
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
