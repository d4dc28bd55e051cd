use super::*;
use crate::cocycle::{check_path_independence, find_intertwiner, winding_numbers};
use crate::glue::Puncture;
use crate::linalg::{c, exp_i_hermitian, kron_all, paulis};
use crate::spacetime::{circle_poset, diamond_poset, DiamondPoset, Topology};
use std::f64::consts::PI;

fn tol() -> Tolerances {
    Tolerances::default()
}

struct U1 {
    dp: DiamondPoset,
    net: LocalNet,
    fam: PunctureFamily,
}

fn u1() -> U1 {
    let dp = diamond_poset(Topology::Cylinder { m: 8, t: 2 }).unwrap();
    let fam = PunctureFamily::new(&dp.poset, dp.all_punctures()).unwrap();
    assert!(fam.uncovered(&dp.poset).is_none());
    let net = LocalNet::full(dp.len(), 1);
    U1 { dp, net, fam }
}

fn w(p: &Poset, theta: f64) -> Cocycle {
    Cocycle::winding(p, &Region::full(p.len()), 1, theta).unwrap()
}

/// Four arcs with one qubit each and scalar overlaps, punctured at each
/// overlap.
struct Qubits {
    p: Poset,
    net: LocalNet,
    fam: PunctureFamily,
}

const N: usize = 4;

fn qubits() -> Qubits {
    let p = circle_poset(N);
    let sites: Vec<Vec<usize>> = (0..2 * N)
        .map(|e| if e < N { vec![e] } else { vec![] })
        .collect();
    let net = LocalNet::qubit_sites(N, &sites, &tol());
    let xs = (0..N)
        .map(|k| {
            let drop = [k, (k + 1) % N, N + k];
            Puncture {
                id: format!("x{k}"),
                members: Region::from_members(2 * N, (0..2 * N).filter(|e| !drop.contains(e))),
                sequence: vec![N + (k + 2) % N, N + (k + 1) % N, N + (k + 3) % N],
            }
        })
        .collect();
    let fam = PunctureFamily::new(&p, xs).unwrap();
    Qubits { p, net, fam }
}

fn site_op(site: usize, m: &CMat) -> CMat {
    kron_all(
        &(0..N)
            .map(|k| if k == site { m.clone() } else { identity(2) })
            .collect::<Vec<_>>(),
    )
}

/// A unitary on the qubit of each arc, the identity on overlaps.
fn field(seed: f64) -> impl Fn(Element) -> CMat {
    let [x, _, z] = paulis();
    move |a| {
        if a >= N {
            return identity(1 << N);
        }
        let h =
            &x * c((seed + 0.3 * a as f64).cos(), 0.0) + &z * c((seed * 1.7 + a as f64).sin(), 0.0);
        site_op(a, &exp_i_hermitian(&h))
    }
}

fn coboundary(q: &Qubits, seed: f64) -> Cocycle {
    Cocycle::coboundary(&q.p, &Region::full(2 * N), 1 << N, field(seed))
}

/// A coboundary times a winding phase: local and not globally trivial.
fn charged(q: &Qubits, seed: f64, theta: f64) -> Cocycle {
    let k = winding_numbers(&q.p, &Region::full(2 * N)).unwrap();
    let mut z = coboundary(q, seed);
    for (b, m) in z.entries_mut() {
        *m *= Complex64::from_polar(1.0, theta * k[b] as f64);
    }
    z
}

#[test]
fn scalar_nets_pass_the_duality_gate_and_qubit_nets_do_not() {
    let f = u1();
    assert!(SectorContext::new(&f.dp.poset, &f.net, &f.fam, tol()).is_ok());
    let q = qubits();
    assert!(matches!(
        SectorContext::new(&q.p, &q.net, &q.fam, tol()),
        Err(SectorError::DualityRefused { .. })
    ));
}

#[test]
fn localized_endomorphism_of_scalars_is_the_identity() {
    let f = u1();
    let ctx = SectorContext::new(&f.dp.poset, &f.net, &f.fam, tol()).unwrap();
    let x = &f.fam.punctures()[0];
    let a = x.members.members()[3];
    let locus = x.members.members()[0];
    for z in [ctx.unit(), w(&f.dp.poset, 0.7)] {
        let y = ctx.localized_endomorphism(&z, a, &x.id, locus).unwrap();
        assert!(y.deviation <= 1e-12);
        assert_eq!(y.transport.end(), a);
        assert!(f.dp.poset.disjoint(y.far, locus));
        let m = identity(1) * c(0.3, -2.0);
        assert!(dist(&y.apply(&m), &m) < 1e-12);
    }
}

#[test]
fn cocycles_must_be_trivial_on_punctures() {
    let f = u1();
    let ctx = SectorContext::new(&f.dp.poset, &f.net, &f.fam, tol()).unwrap();
    let mut z = w(&f.dp.poset, 0.7);
    let b = *f.fam.punctures()[0]
        .members
        .members()
        .iter()
        .find_map(|&e| z.entries().keys().find(|b| b.support == e && b.d0 != b.d1))
        .unwrap();
    *z.entries_mut().get_mut(&b).unwrap() *= Complex64::from_polar(1.0, 0.2);
    assert!(matches!(
        ctx.tensor(&z, &ctx.unit()),
        Err(SectorError::NotPathIndependent { .. })
    ));
}

#[test]
fn windings_multiply_under_tensor() {
    let f = u1();
    let p = &f.dp.poset;
    let ctx = SectorContext::new(p, &f.net, &f.fam, tol()).unwrap();
    let glued = ctx.tensor_glued(&w(p, 0.4), &w(p, 1.1)).unwrap();
    assert!(glued.all_locals_independent);
    assert!(glued.cocycle.distance(&w(p, 1.5)).unwrap() < 1e-12);
    assert!(
        ctx.tensor(&ctx.unit(), &w(p, 0.4))
            .unwrap()
            .distance(&w(p, 0.4))
            .unwrap()
            < 1e-12
    );
}

#[test]
fn symmetry_of_scalars_is_trivial() {
    let f = u1();
    let p = &f.dp.poset;
    let ctx = SectorContext::new(p, &f.net, &f.fam, tol()).unwrap();
    let tab = ctx.symmetry_table(&w(p, 0.4), &w(p, -2.0)).unwrap();
    assert_eq!(tab.table.entries().len(), p.len());
    for m in tab.table.entries().values() {
        assert!(dist(m, &identity(1)) < 1e-12);
    }
}

#[test]
fn scalar_statistics_and_conjugates() {
    let f = u1();
    let p = &f.dp.poset;
    let ctx = SectorContext::new(p, &f.net, &f.fam, tol()).unwrap();
    let z = w(p, PI / 5.0);
    let s = ctx.statistics(&z).unwrap();
    assert!(s.simple && s.irreducible && s.stabilized);
    assert_eq!((s.chi, s.dimension), (Some(1), Some(1)));
    assert!((s.lambda.unwrap() - 1.0).norm() < 1e-12);
    let zbar = ctx.conjugate(&z).unwrap();
    assert!(zbar.distance(&w(p, -PI / 5.0)).unwrap() < 1e-12);
    assert!(
        ctx.tensor(&z, &zbar)
            .unwrap()
            .distance(&ctx.unit())
            .unwrap()
            < 1e-12
    );
    let l = ctx.lemma_chi(&z).unwrap();
    assert!(l.simplices_checked > 0 && l.residual_d0 < 1e-12 && l.residual_d1 < 1e-12);
    let t = Intertwiner::scalar(&Region::full(p.len()), 1, c(0.5, 0.25));
    assert!(ctx.left_inverse(&z, &t).unwrap().distance(&t) < 1e-12);
}

#[test]
fn scalar_battery_satisfies_every_axiom() {
    let f = u1();
    let p = &f.dp.poset;
    let ctx = SectorContext::new(p, &f.net, &f.fam, tol()).unwrap();
    let battery = Battery::windings(p, 1, &[0.4, -1.3]).unwrap();
    let report = ctx.verify_category_axioms(&battery, &[]);
    for row in &report.rows {
        assert!(row.passed, "{row:?}");
    }
    assert!(report.row("functoriality").unwrap().cases > 0);
    assert!(report.row("symmetry hexagon").unwrap().cases > 0);
}

#[test]
fn corrupted_tensor_entry_fails_functoriality() {
    let f = u1();
    let p = &f.dp.poset;
    let ctx = SectorContext::new(p, &f.net, &f.fam, tol()).unwrap();
    let battery = Battery::windings(p, 1, &[0.4]).unwrap();
    let z = ctx
        .tensor(&battery.objects[1], &battery.objects[1])
        .unwrap();
    let simplex = *z.entries().keys().find(|b| b.d0 != b.d1).unwrap();
    let fault = TensorFault {
        left: 1,
        right: 1,
        simplex,
        factor: Complex64::from_polar(1.0, PI / 7.0),
    };
    let report = ctx.verify_category_axioms(&battery, &[fault]);
    let row = report.row("functoriality").unwrap();
    assert!(!row.passed);
    assert!(
        row.witness.as_ref().unwrap().contains(&simplex.to_string()),
        "{row:?}"
    );
}

#[test]
fn y_is_well_defined_and_localized_on_qubits() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let z = charged(&q, 0.3, 0.9);
    for x in q.fam.punctures() {
        for &a in x.members.members() {
            for &locus in x.members.members() {
                let y = match ctx.localized_endomorphism(&z, a, &x.id, locus) {
                    Ok(y) => y,
                    Err(SectorError::NoFarElement { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                assert!(y.deviation < 1e-10);
                for m in q.net.algebra(locus).basis() {
                    assert!(dist(&y.apply_inverse(&y.apply(m)), m) < 1e-10);
                    if q.p.disjoint(a, locus) {
                        assert!(dist(&y.apply(m), m) < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn tensor_of_coboundaries_is_the_coboundary_of_the_product() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let (wf, vf) = (field(0.3), field(1.1));
    let glued = ctx
        .tensor_glued(&coboundary(&q, 0.3), &coboundary(&q, 1.1))
        .unwrap();
    assert!(glued.all_locals_independent);
    let expected = Cocycle::coboundary(&q.p, &Region::full(2 * N), 1 << N, |a| wf(a) * vf(a));
    assert!(glued.cocycle.distance(&expected).unwrap() < 1e-10);
}

#[test]
fn qubit_symmetry_is_an_involutive_intertwiner() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let (z, z1) = (charged(&q, 0.3, 0.9), charged(&q, 1.4, -0.5));
    let e = ctx.symmetry_table(&z, &z1).unwrap().table;
    let e1 = ctx.symmetry_table(&z1, &z).unwrap().table;
    for (a, m) in e.entries() {
        assert!(dist(&(m * &e1.entries()[a]), &identity(1 << N)) < 1e-10);
        assert!(dist(&m.adjoint(), &e1.entries()[a]) < 1e-10);
    }
    let zz1 = ctx.tensor(&z, &z1).unwrap();
    let z1z = ctx.tensor(&z1, &z).unwrap();
    assert!(e.intertwining_residual(&zz1, &z1z).unwrap() < 1e-10);
    let unit = ctx.symmetry_table(&ctx.unit(), &z).unwrap().table;
    assert!(unit
        .entries()
        .values()
        .all(|m| dist(m, &identity(1 << N)) < 1e-10));
}

#[test]
fn qubit_sectors_are_simple_bosons_with_conjugates() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let z = charged(&q, 0.3, 0.9);
    let s = ctx.statistics(&z).unwrap();
    assert!(s.simple && s.irreducible && s.stabilized, "{s:?}");
    assert_eq!((s.chi, s.dimension), (Some(1), Some(1)));
    let l = ctx.lemma_chi(&z).unwrap();
    assert!(l.residual_d0 < 1e-10 && l.residual_d1 < 1e-10);
    let zbar = ctx.conjugate(&z).unwrap();
    assert!(
        ctx.tensor(&z, &zbar)
            .unwrap()
            .distance(&ctx.unit())
            .unwrap()
            < 1e-10
    );
    assert!(
        ctx.tensor(&zbar, &z)
            .unwrap()
            .distance(&ctx.unit())
            .unwrap()
            < 1e-10
    );
    let back = ctx.conjugate(&zbar).unwrap();
    assert!(find_intertwiner(&back, &z, &q.p, &q.net, true, &tol())
        .unwrap()
        .is_some());
}

#[test]
fn qubit_battery_satisfies_every_axiom() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let full = Region::full(2 * N);
    let d = 1 << N;
    let wf = field(0.3);
    let battery = Battery {
        objects: vec![ctx.unit(), coboundary(&q, 0.3), charged(&q, 1.4, -0.5)],
        arrows: vec![
            Arrow {
                source: 0,
                target: 1,
                t: Intertwiner::from_entries(d, (0..2 * N).map(|a| (a, wf(a))).collect()),
            },
            Arrow {
                source: 2,
                target: 2,
                t: Intertwiner::scalar(&full, d, c(0.0, 3.0)),
            },
        ],
    };
    let report = ctx.verify_category_axioms(&battery, &[]);
    for row in &report.rows {
        assert!(row.passed, "{row:?}");
    }
}

#[test]
fn left_inverse_reports_oscillation() {
    let q = qubits();
    let k = 0;
    let drop = [k, k + 1, N + k];
    let x = Puncture {
        id: "x".into(),
        members: Region::from_members(2 * N, (0..2 * N).filter(|e| !drop.contains(e))),
        sequence: vec![k + 3, N + k + 3],
    };
    let fam = PunctureFamily::new(&q.p, vec![x]).unwrap();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &fam, tol()).unwrap();
    let z = coboundary(&q, 0.3);
    let a = N + k + 1;
    let t = Intertwiner::from_entries(1 << N, [(a, site_op(k + 3, &paulis()[0]))].into());
    assert!(
        matches!(ctx.left_inverse(&z, &t), Err(SectorError::NotStabilized { anchor, .. }) if anchor == a)
    );
}

#[test]
fn transport_matches_the_tree_transport() {
    let q = qubits();
    let ctx = SectorContext::unchecked(&q.p, &q.net, &q.fam, tol()).unwrap();
    let z = charged(&q, 0.3, 0.9);
    let zp = ctx.prepare(&z).unwrap();
    for (xi, x) in q.fam.punctures().iter().enumerate() {
        assert!(
            check_path_independence(&z, &q.p, &x.members, &tol())
                .unwrap()
                .independent
        );
        let a = x.members.members()[0];
        let locus = *x.members.members().last().unwrap();
        if let Ok(y) = ctx.localized_endomorphism(&z, a, &x.id, locus) {
            assert!(dist(&y.unitary, &zp.between(xi, y.far, a)) < 1e-10);
        }
    }
}
