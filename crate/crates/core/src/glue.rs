//! Families of punctured subposets and gluing of local cocycles and
//! intertwiners into global ones.

use crate::cocycle::{
    check_path_independence, Cocycle, CocycleError, Intertwiner, PathIndependence,
};
use crate::io::{PunctureJson, PuncturesJson};
use crate::linalg::{dist, Tolerances};
use crate::poset::{find_path, is_pathwise_connected, Adjacency, Element, Poset, Region, Simplex1};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GlueError {
    #[error("puncture {id:?}: element {element} is out of range")]
    UnknownElement { id: String, element: Element },
    #[error("puncture {id:?} is not downward closed: {member} contains {below}, which is missing")]
    NotASieve {
        id: String,
        member: Element,
        below: Element,
    },
    #[error("puncture {id:?}: sequence element {element} is not a member")]
    SequenceOutside { id: String, element: Element },
    #[error("puncture id {0:?} appears twice")]
    DuplicateId(String),
    #[error("no local value for puncture {0:?}")]
    MissingLocal(String),
    #[error("local value for puncture {id:?} has no entry at {simplex}")]
    LocalMissingEntry { id: String, simplex: Simplex1 },
    #[error("locals of {first:?} and {second:?} differ on {simplex} by {norm:e}")]
    OverlapConflict {
        simplex: Simplex1,
        first: String,
        second: String,
        norm: f64,
    },
    #[error("locals of {first:?} and {second:?} differ at element {element} by {norm:e}")]
    ElementConflict {
        element: Element,
        first: String,
        second: String,
        norm: f64,
    },
    #[error("simplex {simplex} lies in no puncture")]
    IncompleteCover { simplex: Simplex1 },
    #[error("element {element} lies in no puncture")]
    IncompleteElementCover { element: Element },
    #[error("locals have different dimensions")]
    Dimension,
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A punctured subposet `K_x` with an asymptotically disjoint sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Puncture {
    pub id: String,
    #[serde(serialize_with = "members")]
    pub members: Region,
    /// Elements of the puncture approaching the removed point.
    pub sequence: Vec<Element>,
}

fn members<S: serde::Serializer>(r: &Region, s: S) -> Result<S::Ok, S::Error> {
    r.members().serialize(s)
}

impl Puncture {
    pub fn contains_simplex(&self, b: &Simplex1) -> bool {
        self.members.contains(b.support)
            && self.members.contains(b.d0)
            && self.members.contains(b.d1)
    }

    /// The tail of the sequence that is disjoint from `a`: everything after
    /// the last element not disjoint from it.
    pub fn disjoint_tail(&self, p: &Poset, a: Element) -> &[Element] {
        let start = self
            .sequence
            .iter()
            .rposition(|&s| !p.disjoint(s, a))
            .map_or(0, |i| i + 1);
        &self.sequence[start..]
    }
}

/// Punctures over one ambient poset, each a sieve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PunctureFamily {
    punctures: Vec<Puncture>,
}

impl PunctureFamily {
    pub fn new(p: &Poset, punctures: Vec<Puncture>) -> Result<Self, GlueError> {
        let mut seen = std::collections::BTreeSet::new();
        for x in &punctures {
            if !seen.insert(x.id.clone()) {
                return Err(GlueError::DuplicateId(x.id.clone()));
            }
            if x.members.ambient() != p.len() {
                return Err(GlueError::UnknownElement {
                    id: x.id.clone(),
                    element: x.members.ambient(),
                });
            }
            if let Some((member, below)) = x.members.closure_failure(p) {
                return Err(GlueError::NotASieve {
                    id: x.id.clone(),
                    member,
                    below,
                });
            }
            if let Some(&element) = x.sequence.iter().find(|&&e| !x.members.contains(e)) {
                return Err(GlueError::SequenceOutside {
                    id: x.id.clone(),
                    element,
                });
            }
        }
        Ok(PunctureFamily { punctures })
    }

    pub fn from_json(p: &Poset, json: &PuncturesJson) -> Result<Self, GlueError> {
        let mut out = Vec::with_capacity(json.punctures.len());
        for x in &json.punctures {
            if let Some(&element) = x.members.iter().chain(&x.sequence).find(|&&e| e >= p.len()) {
                return Err(GlueError::UnknownElement {
                    id: x.id.clone(),
                    element,
                });
            }
            out.push(Puncture {
                id: x.id.clone(),
                members: Region::from_members(p.len(), x.members.iter().copied()),
                sequence: x.sequence.clone(),
            });
        }
        PunctureFamily::new(p, out)
    }

    pub fn to_json(&self) -> PuncturesJson {
        PuncturesJson {
            punctures: self
                .punctures
                .iter()
                .map(|x| PunctureJson {
                    id: x.id.clone(),
                    members: x.members.members().to_vec(),
                    sequence: x.sequence.clone(),
                })
                .collect(),
        }
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn len(&self) -> usize {
        self.punctures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Puncture> {
        self.punctures.iter().find(|x| x.id == id)
    }

    /// Indices of the punctures containing `b`.
    pub fn containing(&self, b: &Simplex1) -> impl Iterator<Item = usize> + '_ {
        let b = *b;
        self.punctures
            .iter()
            .enumerate()
            .filter(move |(_, x)| x.contains_simplex(&b))
            .map(|(i, _)| i)
    }

    /// The first 1-simplex, in lexicographic order, lying in no puncture.
    pub fn uncovered(&self, p: &Poset) -> Option<Simplex1> {
        p.simplices1()
            .into_iter()
            .find(|b| self.containing(b).next().is_none())
    }

    /// Restrictions of a global cocycle to every puncture.
    pub fn restrict(&self, z: &Cocycle) -> Vec<Cocycle> {
        self.punctures
            .iter()
            .map(|x| z.restrict(&x.members))
            .collect()
    }
}

/// Path-independence of one local cocycle.
#[derive(Debug, Clone, Serialize)]
pub struct LocalCheck {
    pub id: String,
    pub independent: bool,
    pub max_deviation: f64,
}

/// A glued cocycle with the path-independence reports behind it.
#[derive(Debug, Clone, Serialize)]
pub struct Glued {
    #[serde(skip)]
    pub cocycle: Cocycle,
    pub locals: Vec<LocalCheck>,
    pub all_locals_independent: bool,
    /// `None` when the poset is not pathwise connected.
    pub global: Option<PathIndependence>,
}

/// Glues local cocycles, one per puncture in family order, into the unique
/// global cocycle agreeing with each. Simplices are visited in
/// lexicographic order and the first uncovered simplex or overlap
/// conflict is reported.
pub fn glue(
    fam: &PunctureFamily,
    locals: &[Cocycle],
    p: &Poset,
    tol: &Tolerances,
) -> Result<Glued, GlueError> {
    if locals.len() < fam.len() {
        return Err(GlueError::MissingLocal(
            fam.punctures[locals.len()].id.clone(),
        ));
    }
    let d = locals.first().map_or(1, Cocycle::d);
    if locals.iter().any(|z| z.d() != d) {
        return Err(GlueError::Dimension);
    }
    let mut entries = BTreeMap::new();
    for b in p.simplices1() {
        let mut first: Option<usize> = None;
        for i in fam.containing(&b) {
            let id = &fam.punctures[i].id;
            let m = locals[i]
                .entries()
                .get(&b)
                .ok_or_else(|| GlueError::LocalMissingEntry {
                    id: id.clone(),
                    simplex: b,
                })?;
            match first {
                None => {
                    first = Some(i);
                    entries.insert(b, m.clone());
                }
                Some(j) => {
                    let norm = dist(m, &entries[&b]);
                    if norm > tol.unitary {
                        return Err(GlueError::OverlapConflict {
                            simplex: b,
                            first: fam.punctures[j].id.clone(),
                            second: id.clone(),
                            norm,
                        });
                    }
                }
            }
        }
        if first.is_none() {
            return Err(GlueError::IncompleteCover { simplex: b });
        }
    }
    let cocycle = Cocycle::from_entries(d, Region::full(p.len()), entries);
    let mut local_checks = Vec::with_capacity(fam.len());
    for (x, z) in fam.punctures.iter().zip(locals) {
        let r = check_path_independence(z, p, &x.members, tol)?;
        local_checks.push(LocalCheck {
            id: x.id.clone(),
            independent: r.independent,
            max_deviation: r.max_deviation,
        });
    }
    let global = if is_pathwise_connected(p, &Region::full(p.len())) {
        Some(check_path_independence(
            &cocycle,
            p,
            &Region::full(p.len()),
            tol,
        )?)
    } else {
        None
    };
    Ok(Glued {
        cocycle,
        all_locals_independent: local_checks.iter().all(|c| c.independent),
        locals: local_checks,
        global,
    })
}

/// Glues local intertwiners elementwise.
pub fn glue_intertwiner(
    fam: &PunctureFamily,
    locals: &[Intertwiner],
    p: &Poset,
    tol: &Tolerances,
) -> Result<Intertwiner, GlueError> {
    if locals.len() < fam.len() {
        return Err(GlueError::MissingLocal(
            fam.punctures[locals.len()].id.clone(),
        ));
    }
    let d = locals.first().map_or(1, Intertwiner::d);
    let mut entries = BTreeMap::new();
    for element in 0..p.len() {
        let mut first: Option<usize> = None;
        for (i, x) in fam.punctures.iter().enumerate() {
            if !x.members.contains(element) {
                continue;
            }
            let Some(m) = locals[i].get(element) else {
                continue;
            };
            match first {
                None => {
                    first = Some(i);
                    entries.insert(element, m.clone());
                }
                Some(j) => {
                    let norm = dist(m, &entries[&element]);
                    if norm > tol.unitary {
                        return Err(GlueError::ElementConflict {
                            element,
                            first: fam.punctures[j].id.clone(),
                            second: x.id.clone(),
                            norm,
                        });
                    }
                }
            }
        }
        if first.is_none() {
            return Err(GlueError::IncompleteElementCover { element });
        }
    }
    Ok(Intertwiner::from_entries(d, entries))
}

/// Extends an intertwiner known on one puncture to the whole poset by
/// transport: `t_a = z1(p) t_{a0} z(p)*` for a path `p` from the first
/// member `a0` of the puncture to `a`. Both cocycles must be
/// path-independent for the result to be well defined.
pub fn extend_from_puncture(
    z: &Cocycle,
    z1: &Cocycle,
    puncture: &Puncture,
    local: &Intertwiner,
    p: &Poset,
) -> Result<Intertwiner, GlueError> {
    let a0 = *puncture
        .members
        .members()
        .first()
        .ok_or(CocycleError::EmptyRegion)?;
    let t0 = local.get(a0).ok_or(CocycleError::OutsideDomain(a0))?;
    let full = Region::full(p.len());
    let mut entries = BTreeMap::new();
    for a in 0..p.len() {
        let path = find_path(p, Adjacency::within(&full), a0, a)
            .ok_or(CocycleError::NotPathwiseConnected(a0, a))?;
        entries.insert(a, z1.evaluate(&path)? * t0 * z.evaluate(&path)?.adjoint());
    }
    Ok(Intertwiner::from_entries(local.d(), entries))
}
