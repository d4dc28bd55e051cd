//! Local path-independence on every puncture implies global
//! path-independence only with two space dimensions. On a 1+1 cylinder the
//! punctures are simply connected and the winding cocycle is a
//! counterexample.

mod common;

use posetcoh::glue::{glue, PunctureFamily};
use posetcoh::homotopy::{abelianization, pi1_presentation_with, RelationMode};
use posetcoh::{Cocycle, Region, Tolerances};

#[test]
fn winding_on_a_cylinder_is_locally_but_not_globally_path_independent() {
    let dp = common::cylinder(8, 2);
    let p = &dp.poset;
    let fam = PunctureFamily::new(p, dp.all_punctures()).unwrap();
    assert!(fam.uncovered(p).is_none());
    for x in fam.punctures() {
        let g = pi1_presentation_with(
            p,
            &x.members,
            x.members.members()[0],
            RelationMode::Generating,
        )
        .unwrap();
        assert_eq!(abelianization(&g).rank, 0, "{} has a loop", x.id);
    }
    let w = Cocycle::winding(p, &Region::full(p.len()), 1, 0.4).unwrap();
    let glued = glue(&fam, &fam.restrict(&w), p, &Tolerances::default()).unwrap();
    assert!(glued.all_locals_independent);
    assert!(!glued.global.unwrap().independent);
}

#[test]
fn annulus_punctures_see_the_winding() {
    let dp = common::annulus(6, 3, 1);
    let p = &dp.poset;
    let fam = PunctureFamily::new(p, dp.all_punctures()).unwrap();
    let w = Cocycle::winding(p, &Region::full(p.len()), 1, 0.4).unwrap();
    let glued = glue(&fam, &fam.restrict(&w), p, &Tolerances::default()).unwrap();
    // Removing the cone of a middle-ring point cuts the annulus open; the
    // inner and outer rings keep the hole.
    for l in &glued.locals {
        assert_eq!(l.independent, l.id.contains("r1"), "{}", l.id);
    }
    assert!(!glued.global.unwrap().independent);
}
