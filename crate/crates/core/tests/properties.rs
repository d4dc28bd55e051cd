//! Property tests over random orders and random cocycles, checked against
//! the elimination oracle in `common`.

mod common;

use common::{
    deform, diagonalize, order_complex_h1, random_directed, random_order, random_path, random_su2,
    rng,
};
use posetcoh::cocycle::{check_path_independence, trivialize, CocycleError};
use posetcoh::glue::{glue, PunctureFamily};
use posetcoh::homotopy::{
    abelianization, pi1_presentation, replay, HomotopyDecider, HomotopyVerdict, DEFAULT_DEPTH,
};
use posetcoh::linalg::{dist, phase};
use posetcoh::poset::{components, Adjacency};
use posetcoh::spacetime::circle_poset;
use posetcoh::{apply_deformation, CMat, Cocycle, Region, Tolerances};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn oracle_diagonalizes_known_matrices() {
    // Columns of [[2, 6], [4, 8]]: determinant -8, invariant factors 2 and 4.
    assert_eq!(diagonalize(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
    assert_eq!(diagonalize(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    assert_eq!(
        diagonalize(vec![vec![0, 0], vec![0, 0]]),
        Vec::<i128>::new()
    );
    assert_eq!(diagonalize(vec![vec![1, 1, 1]]), vec![1]);
}

#[test]
fn oracle_sees_the_circle() {
    for n in 3..7 {
        assert_eq!(order_complex_h1(&circle_poset(n)), (1, vec![]), "C_{n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn abelianization_matches_the_order_complex(seed in any::<u64>(), n in 2usize..9, density in 0.1f64..0.6) {
        let p = random_order(&mut rng(seed), n, density);
        let (rank, torsion) = order_complex_h1(&p);
        let comp = components(&p, Adjacency::within(&Region::full(n)));
        // The oracle sums over components; compare on connected orders only.
        if comp.len() == 1 {
            let ab = abelianization(&pi1_presentation(&p, 0).unwrap());
            prop_assert_eq!(ab.rank, rank);
            prop_assert_eq!(ab.torsion.iter().map(|&t| t as i128).collect::<Vec<_>>(), torsion);
        }
    }

    #[test]
    fn deformations_are_invertible(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let p = random_order(&mut r, n, 0.4);
        let start = r.random_range(0..n);
        let path = random_path(&mut r, &p, start, 4);
        if let Some(d) = common::random_move(&mut r, &p, &path) {
            let moved = apply_deformation(&p, &path, &d).unwrap();
            prop_assert_eq!(moved.start(), path.start());
            prop_assert_eq!(moved.end(), path.end());
            prop_assert_eq!(apply_deformation(&p, &moved, &d.inverse()).unwrap(), path);
        }
    }

    #[test]
    fn homotopic_witnesses_replay(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let p = random_order(&mut r, n, 0.4);
        let start = r.random_range(0..n);
        let a = random_path(&mut r, &p, start, 3);
        let b = deform(&mut r, &p, &a, 3);
        let decider = HomotopyDecider::new(&p, DEFAULT_DEPTH).unwrap();
        match decider.decide(&a, &b).unwrap() {
            HomotopyVerdict::Homotopic { witness } => {
                prop_assert_eq!(replay(&p, &a, &witness).unwrap(), b);
            }
            HomotopyVerdict::NotHomotopic { certificate } => {
                prop_assert!(false, "deformed path refuted: {:?}", certificate);
            }
            HomotopyVerdict::Unknown { normal_forms_agree, .. } => prop_assert!(normal_forms_agree),
        }
    }

    #[test]
    fn directed_orders_have_trivial_cocycle_classes(seed in any::<u64>(), n in 3usize..10) {
        let mut r = rng(seed);
        let p = random_directed(&mut r, n, 0.3);
        let full = Region::full(n);
        prop_assert_eq!(order_complex_h1(&p), (0, vec![]));
        prop_assert_eq!(Cocycle::winding(&p, &full, 1, 0.5).unwrap_err(), CocycleError::NoWinding);
        let field: Vec<CMat> = (0..n).map(|_| random_su2(&mut r)).collect();
        let z = Cocycle::coboundary(&p, &full, 2, |a| field[a].clone());
        let tol = Tolerances::default();
        prop_assert!(trivialize(&z, &p, &full, &tol).unwrap().is_trivial());
        prop_assert!(check_path_independence(&z, &p, &full, &tol).unwrap().independent);
    }

    #[test]
    fn cocycle_values_survive_deformation(seed in any::<u64>(), theta in -3.0f64..3.0) {
        let mut r = rng(seed);
        let p = circle_poset(5);
        let z = Cocycle::winding(&p, &Region::full(p.len()), 1, theta).unwrap();
        let start = r.random_range(0..p.len());
        let a = random_path(&mut r, &p, start, 5);
        let b = deform(&mut r, &p, &a, 5);
        prop_assert!(dist(&z.evaluate(&a).unwrap(), &z.evaluate(&b).unwrap()) < 1e-12);
    }
}

#[test]
fn restriction_then_glue_is_the_identity_on_random_coboundaries() {
    let dp = common::cylinder(8, 2);
    let p = &dp.poset;
    let fam = PunctureFamily::new(p, dp.all_punctures()).unwrap();
    let mut r = rng(3);
    for _ in 0..5 {
        let angles: Vec<f64> = (0..p.len()).map(|_| r.random_range(-3.0..3.0)).collect();
        let z = Cocycle::coboundary(p, &Region::full(p.len()), 1, |a| phase(1, angles[a]));
        let glued = glue(&fam, &fam.restrict(&z), p, &Tolerances::default()).unwrap();
        assert_eq!(glued.cocycle, z);
        assert!(glued.global.unwrap().independent);
    }
}
