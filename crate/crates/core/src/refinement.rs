//! Restriction to a refinement and extension back.
//!
//! For a locally relatively connected refinement `sub` of `p` and a choice
//! `f` with `f(a) = a` on `sub` and `f(a) <= a` elsewhere, restriction `R`
//! keeps the simplices of `sub` and extension `F` sets
//! `F(ẑ)(b) = ẑ(p̂)` for a path `p̂` in `sub` from `f(∂1 b)` to `f(∂0 b)`
//! below `|b|`. `R ∘ F` is the identity and `u(z)_a = z(a → f(a))` is a
//! natural unitary from `z` to `F(R(z))`.

use crate::cocycle::{Cocycle, CocycleError, Intertwiner};
use crate::linalg::{dist, identity, Tolerances};
use crate::poset::{
    find_path, is_refinement, Adjacency, Element, Poset, RefinementCheck, RefinementError, Region,
    Simplex1,
};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RefineError {
    #[error("not a locally relatively connected refinement: {0:?}")]
    NotARefinement(RefinementCheck),
    #[error(transparent)]
    Ambient(#[from] RefinementError),
    #[error("choice maps {element} to {chosen}, which is not a member below it")]
    Choice { element: Element, chosen: Element },
    #[error("choice has {got} entries, poset has {n}")]
    ChoiceLength { got: usize, n: usize },
    #[error("no path in the refinement below the support of {0}")]
    NoConnectingPath(Simplex1),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A validated refinement with its choice function.
#[derive(Debug, Clone)]
pub struct Refinement {
    sub: Region,
    choice: Vec<Element>,
}

/// The identity on `sub`, and elsewhere the smallest member of `sub` below
/// the element.
pub fn default_choice(p: &Poset, sub: &Region) -> Vec<Element> {
    (0..p.len())
        .map(|a| {
            if sub.contains(a) {
                a
            } else {
                sub.members()
                    .iter()
                    .copied()
                    .find(|&m| p.leq(m, a))
                    .unwrap_or(a)
            }
        })
        .collect()
}

impl Refinement {
    pub fn new(p: &Poset, sub: Region, choice: Option<Vec<Element>>) -> Result<Self, RefineError> {
        let check = is_refinement(&sub, p, true)?;
        if !check.is_refinement() {
            return Err(RefineError::NotARefinement(check));
        }
        let choice = choice.unwrap_or_else(|| default_choice(p, &sub));
        if choice.len() != p.len() {
            return Err(RefineError::ChoiceLength {
                got: choice.len(),
                n: p.len(),
            });
        }
        for (a, &f) in choice.iter().enumerate() {
            let ok = f < p.len() && sub.contains(f) && p.leq(f, a) && (!sub.contains(a) || f == a);
            if !ok {
                return Err(RefineError::Choice {
                    element: a,
                    chosen: f,
                });
            }
        }
        Ok(Refinement { sub, choice })
    }

    pub fn sub(&self) -> &Region {
        &self.sub
    }

    pub fn choice(&self) -> &[Element] {
        &self.choice
    }

    /// `R(z)`: the entries supported in the refinement.
    pub fn restrict(&self, z: &Cocycle) -> Cocycle {
        z.restrict(&self.sub)
    }

    pub fn restrict_intertwiner(&self, t: &Intertwiner) -> Intertwiner {
        t.restrict(&self.sub)
    }

    /// `F(ẑ)`. Simplices of the refinement keep their entry, so `R ∘ F` is
    /// the identity without rounding.
    pub fn extend(&self, p: &Poset, z: &Cocycle) -> Result<Cocycle, RefineError> {
        let mut entries = BTreeMap::new();
        for b in p.simplices1() {
            if self.sub.contains(b.d1) && self.sub.contains(b.d0) && self.sub.contains(b.support) {
                entries.insert(b, z.get(&b)?.clone());
                continue;
            }
            let below = self.sub.below(p, b.support);
            let path = find_path(
                p,
                Adjacency::within(&below),
                self.choice[b.d1],
                self.choice[b.d0],
            )
            .ok_or(RefineError::NoConnectingPath(b))?;
            entries.insert(b, z.evaluate(&path)?);
        }
        Ok(Cocycle::from_entries(z.d(), Region::full(p.len()), entries))
    }

    /// `F(t)_a = t_{f(a)}`.
    pub fn extend_intertwiner(&self, t: &Intertwiner) -> Intertwiner {
        let entries = self
            .choice
            .iter()
            .enumerate()
            .filter_map(|(a, &f)| t.get(f).map(|m| (a, m.clone())))
            .collect();
        Intertwiner::from_entries(t.d(), entries)
    }

    /// `u(z)_a = z(a → f(a))`, the simplex with support `a`.
    pub fn unit(&self, z: &Cocycle) -> Result<Intertwiner, RefineError> {
        let mut entries = BTreeMap::new();
        for (a, &f) in self.choice.iter().enumerate() {
            let m = if f == a {
                identity(z.d())
            } else {
                z.get(&Simplex1::new(a, f, a))?.clone()
            };
            entries.insert(a, m);
        }
        Ok(Intertwiner::from_entries(z.d(), entries))
    }
}

/// Numerical checks of the equivalence on one arrow `t ∈ (z, z1)`.
#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    /// `R(F(R(z))) == R(z)` bit for bit.
    pub round_trip_exact: bool,
    pub round_trip_distance: f64,
    pub unit_unitarity_defect: f64,
    /// `u(z) ∈ (z, F(R(z)))`.
    pub unit_intertwining_residual: f64,
    /// `max ‖u(z1)_a t_a − F(R(t))_a u(z)_a‖`.
    pub naturality_residual: f64,
}

impl RefinementReport {
    pub fn passed(&self, tol: &Tolerances) -> bool {
        self.round_trip_exact
            && self.unit_unitarity_defect <= tol.unitary
            && self.unit_intertwining_residual <= tol.unitary
            && self.naturality_residual <= tol.unitary
    }
}

pub fn check_refinement(
    p: &Poset,
    r: &Refinement,
    z: &Cocycle,
    z1: &Cocycle,
    t: &Intertwiner,
) -> Result<RefinementReport, RefineError> {
    let rz = r.restrict(z);
    let frz = r.extend(p, &rz)?;
    let back = r.restrict(&frz);
    let round_trip_distance = back.distance(&rz)?.max(rz.distance(&back)?);
    let u = r.unit(z)?;
    let u1 = r.unit(z1)?;
    let frt = r.extend_intertwiner(&r.restrict_intertwiner(t));
    let naturality_residual = (0..p.len())
        .map(|a| match (u1.get(a), t.get(a), frt.get(a), u.get(a)) {
            (Some(u1), Some(t), Some(ft), Some(u)) => dist(&(u1 * t), &(ft * u)),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    Ok(RefinementReport {
        round_trip_exact: back == rz,
        round_trip_distance,
        unit_unitarity_defect: u.unitarity_defect(),
        unit_intertwining_residual: u.intertwining_residual(z, &frz)?,
        naturality_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::check_cocycle;
    use crate::homotopy::RelationMode;
    use crate::linalg::{c, exp_i_hermitian, paulis};
    use crate::spacetime::{generate_diamond_poset, CausalLattice, Topology};

    fn nested() -> (Poset, Region) {
        let l = CausalLattice::new(Topology::Cylinder { m: 6, t: 2 }).unwrap();
        let dp = generate_diamond_poset(l, 4).unwrap();
        let sub = Region::from_members(
            dp.len(),
            (0..dp.len()).filter(|&e| dp.table.diamonds[e].base.len() <= 3),
        );
        (dp.poset, sub)
    }

    #[test]
    fn full_sub_with_identity_choice_is_the_identity() {
        let (p, _) = nested();
        let full = Region::full(p.len());
        let r = Refinement::new(&p, full.clone(), None).unwrap();
        let z = Cocycle::winding(&p, &full, 1, 0.3).unwrap();
        assert_eq!(r.extend(&p, &r.restrict(&z)).unwrap(), z);
    }

    #[test]
    fn nested_diamonds_form_an_equivalence() {
        let (p, sub) = nested();
        let full = Region::full(p.len());
        let r = Refinement::new(&p, sub, None).unwrap();
        let [x, y, _] = paulis();
        let w = |a: Element| exp_i_hermitian(&(&x * c(0.1 * a as f64, 0.0)));
        let v = |a: Element| exp_i_hermitian(&(&y * c(0.07 * a as f64, 0.0)));
        let z = Cocycle::holonomy(&p, &full, &x).unwrap();
        let z = Cocycle::from_entries(
            2,
            full.clone(),
            z.entries()
                .iter()
                .map(|(b, m)| (*b, &w(b.d0) * m * w(b.d1).adjoint()))
                .collect(),
        );
        let z1 = z.twist(v);
        // t_a = v(a) intertwines z and its twist.
        let t = Intertwiner::from_entries(2, (0..p.len()).map(|a| (a, v(a))).collect());
        assert!(t.intertwining_residual(&z, &z1).unwrap() < 1e-12);
        let report = check_refinement(&p, &r, &z, &z1, &t).unwrap();
        assert!(report.passed(&Tolerances::default()), "{report:?}");
        let fz = r.extend(&p, &r.restrict(&z)).unwrap();
        assert!(check_cocycle(
            &fz,
            &p,
            None,
            RelationMode::Generating,
            &Tolerances::default()
        )
        .passed());
    }

    #[test]
    fn restriction_is_faithful() {
        let (p, sub) = nested();
        let full = Region::full(p.len());
        let r = Refinement::new(&p, sub, None).unwrap();
        let a = Cocycle::winding(&p, &full, 1, 0.3).unwrap();
        let b = Cocycle::winding(&p, &full, 1, 0.4).unwrap();
        assert!(r.restrict(&a).distance(&r.restrict(&b)).unwrap() > 0.0);
    }

    #[test]
    fn bad_choices_are_rejected() {
        let (p, sub) = nested();
        let outside = (0..p.len()).find(|&e| !sub.contains(e)).unwrap();
        let mut choice = default_choice(&p, &sub);
        choice[outside] = outside;
        assert_eq!(
            Refinement::new(&p, sub, Some(choice)).unwrap_err(),
            RefineError::Choice {
                element: outside,
                chosen: outside
            }
        );
    }

    #[test]
    fn disconnected_sub_is_not_a_refinement() {
        let (p, _) = nested();
        let singles =
            Region::from_members(p.len(), (0..p.len()).filter(|&e| p.down_set(e).len() == 1));
        assert!(matches!(
            Refinement::new(&p, singles, None),
            Err(RefineError::NotARefinement(_))
        ));
    }
}
