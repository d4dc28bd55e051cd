//! Deciding homotopy of paths.

use super::abelian::{abelianize, Abelianization};
use super::deform::{loop_witness, normalize, replay, Deformation};
use super::presentation::{pi1_presentation_with, GroupPresentation, RelationMode};
use super::tietze::{simplify, NormalForm, Simplified};
use crate::poset::{
    components, Adjacency, Element, Path, Poset, Region, Simplex1, Simplex2, Violation,
};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Default bound on the number of deformations explored by the search.
pub const DEFAULT_DEPTH: usize = 12;

/// Cap on the number of paths visited by the bidirectional search.
const STATE_CAP: usize = 200_000;

/// Evidence that two paths are not homotopic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The classes in the abelianized group differ.
    Abelian { left: Vec<i64>, right: Vec<i64> },
    /// The group is free or free abelian after simplification and the
    /// normal forms differ.
    NormalForm { left: NormalForm, right: NormalForm },
}

impl Certificate {
    /// `left - right` for an abelian certificate.
    pub fn difference(&self) -> Option<Vec<i64>> {
        match self {
            Certificate::Abelian { left, right } => {
                Some(left.iter().zip(right).map(|(a, b)| a - b).collect())
            }
            Certificate::NormalForm { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HomotopyVerdict {
    /// The witness replays from the first path to the second.
    Homotopic {
        witness: Vec<Deformation>,
    },
    NotHomotopic {
        certificate: Certificate,
    },
    /// No witness within the bound. `normal_forms_agree` records that the
    /// group-theoretic normal forms coincide, which happens when the paths
    /// are homotopic but the search was too shallow.
    Unknown {
        depth: usize,
        normal_forms_agree: bool,
    },
}

impl HomotopyVerdict {
    pub fn is_homotopic(&self) -> bool {
        matches!(self, HomotopyVerdict::Homotopic { .. })
    }

    pub fn is_not_homotopic(&self) -> bool {
        matches!(self, HomotopyVerdict::NotHomotopic { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            HomotopyVerdict::Homotopic { .. } => "homotopic",
            HomotopyVerdict::NotHomotopic { .. } => "not_homotopic",
            HomotopyVerdict::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("poset fails the order axioms: {0}")]
    InvalidPoset(Violation),
    #[error("{0} is not a 1-simplex of the poset")]
    NotASimplex(Simplex1),
    #[error("paths have different endpoints: {0}→{1} and {2}→{3}")]
    EndpointMismatch(Element, Element, Element, Element),
}

/// The group data of one path component, built once.
struct ComponentGroup {
    presentation: GroupPresentation,
    abelian: Abelianization,
    simplified: Simplified,
}

/// Decides homotopy of many path pairs over one poset, caching the group
/// of each path component.
pub struct HomotopyDecider<'a> {
    poset: &'a Poset,
    depth: usize,
    component_of: Vec<usize>,
    components: Vec<Vec<Element>>,
    groups: Vec<OnceLock<ComponentGroup>>,
}

impl<'a> HomotopyDecider<'a> {
    pub fn new(poset: &'a Poset, depth: usize) -> Result<Self, HomotopyError> {
        if let Some(v) = poset.validate_order().violation {
            return Err(HomotopyError::InvalidPoset(v));
        }
        let full = Region::full(poset.len());
        let components = components(poset, Adjacency::within(&full));
        let mut component_of = vec![0; poset.len()];
        for (i, c) in components.iter().enumerate() {
            for &e in c {
                component_of[e] = i;
            }
        }
        let groups = (0..components.len()).map(|_| OnceLock::new()).collect();
        Ok(HomotopyDecider {
            poset,
            depth,
            component_of,
            components,
            groups,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn group(&self, e: Element) -> &ComponentGroup {
        let c = self.component_of[e];
        self.groups[c].get_or_init(|| {
            let members = &self.components[c];
            let region = Region::from_members(self.poset.len(), members.iter().copied());
            let presentation =
                pi1_presentation_with(self.poset, &region, members[0], RelationMode::Generating)
                    .expect("components are pathwise connected");
            let abelian = abelianize(presentation.num_generators(), &presentation.relations);
            let simplified = simplify(
                presentation.num_generators(),
                &presentation.relations,
                10 * presentation.num_generators(),
            );
            ComponentGroup {
                presentation,
                abelian,
                simplified,
            }
        })
    }

    /// The presentation used for the component of `e`.
    pub fn presentation(&self, e: Element) -> &GroupPresentation {
        &self.group(e).presentation
    }

    fn check_path(&self, p: &Path) -> Result<(), HomotopyError> {
        match p.simplices().iter().find(|b| !self.poset.is_simplex1(b)) {
            Some(b) => Err(HomotopyError::NotASimplex(*b)),
            None => Ok(()),
        }
    }

    pub fn decide(&self, p1: &Path, p2: &Path) -> Result<HomotopyVerdict, HomotopyError> {
        self.check_path(p1)?;
        self.check_path(p2)?;
        if p1.start() != p2.start() || p1.end() != p2.end() {
            return Err(HomotopyError::EndpointMismatch(
                p1.start(),
                p1.end(),
                p2.start(),
                p2.end(),
            ));
        }
        if p1 == p2 {
            return Ok(HomotopyVerdict::Homotopic {
                witness: Vec::new(),
            });
        }

        let g = self.group(p1.start());
        let w1 = g
            .presentation
            .path_word(p1)
            .expect("checked simplices of the component");
        let w2 = g
            .presentation
            .path_word(p2)
            .expect("checked simplices of the component");
        let (c1, c2) = (g.abelian.class_of_word(&w1), g.abelian.class_of_word(&w2));
        if c1 != c2 {
            return Ok(HomotopyVerdict::NotHomotopic {
                certificate: Certificate::Abelian {
                    left: c1,
                    right: c2,
                },
            });
        }
        let mut normal_forms_agree = false;
        if let (Some(n1), Some(n2)) = (g.simplified.normal_form(&w1), g.simplified.normal_form(&w2))
        {
            if n1 != n2 {
                return Ok(HomotopyVerdict::NotHomotopic {
                    certificate: Certificate::NormalForm {
                        left: n1,
                        right: n2,
                    },
                });
            }
            normal_forms_agree = true;
        }

        if let Some(w) = self.witness(p1, p2) {
            debug_assert_eq!(replay(self.poset, p1, &w).as_ref(), Ok(p2));
            return Ok(HomotopyVerdict::Homotopic { witness: w });
        }
        Ok(HomotopyVerdict::Unknown {
            depth: self.depth,
            normal_forms_agree,
        })
    }

    fn witness(&self, p1: &Path, p2: &Path) -> Option<Vec<Deformation>> {
        let (n1, m1) = normalize(self.poset, p1);
        let (n2, m2) = normalize(self.poset, p2);
        if n1 == n2 {
            return Some(chain_moves(m1, &m2));
        }
        if let Some(w) = loop_witness(self.poset, p1, p2) {
            return Some(w);
        }
        // Search between the normal forms, which are usually shorter.
        let mid = search(self.poset, &n1, &n2, self.depth)?;
        let mut w = m1;
        w.extend(mid);
        Some(chain_moves(w, &m2))
    }
}

/// `forward` followed by the inverse of `backward`.
fn chain_moves(mut forward: Vec<Deformation>, backward: &[Deformation]) -> Vec<Deformation> {
    forward.extend(backward.iter().rev().map(Deformation::inverse));
    forward
}

/// Decides whether two paths are homotopic, building the group data for a
/// single query. Use [`HomotopyDecider`] to amortize over many queries.
pub fn decide_homotopy(
    p: &Poset,
    p1: &Path,
    p2: &Path,
    depth: usize,
) -> Result<HomotopyVerdict, HomotopyError> {
    HomotopyDecider::new(p, depth)?.decide(p1, p2)
}

struct Side {
    nodes: Vec<(Vec<Simplex1>, usize, Option<Deformation>)>,
    index: HashMap<Vec<Simplex1>, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(start: &Path) -> Self {
        let s = start.simplices().to_vec();
        let mut index = HashMap::new();
        index.insert(s.clone(), 0);
        Side {
            nodes: vec![(s, 0, None)],
            index,
            frontier: vec![0],
        }
    }

    /// Moves leading from the root to node `i`.
    fn moves_to(&self, mut i: usize) -> Vec<Deformation> {
        let mut out = Vec::new();
        while let Some(d) = self.nodes[i].2 {
            out.push(d);
            i = self.nodes[i].1;
        }
        out.reverse();
        out
    }
}

/// Bidirectional breadth-first search over elementary deformations,
/// exploring at most `depth` moves in total. Neighbours are generated in a
/// fixed order, so the witness found is deterministic.
fn search(p: &Poset, from: &Path, to: &Path, depth: usize) -> Option<Vec<Deformation>> {
    if from == to {
        return Some(Vec::new());
    }
    let max_len = from.len().max(to.len()) + depth / 2 + 1;
    let mut a = Side::new(from);
    let mut b = Side::new(to);
    for _ in 0..depth {
        let expand_a = a.frontier.len() <= b.frontier.len();
        let (this, other) = if expand_a { (&mut a, &b) } else { (&mut b, &a) };
        let mut next = Vec::new();
        for &i in &std::mem::take(&mut this.frontier) {
            let state = this.nodes[i].0.clone();
            for (d, succ) in neighbours(p, &state, max_len) {
                if this.index.contains_key(&succ) {
                    continue;
                }
                if let Some(&j) = other.index.get(&succ) {
                    let mut here = this.moves_to(i);
                    here.push(d);
                    let there = other.moves_to(j);
                    return Some(if expand_a {
                        chain_moves(here, &there)
                    } else {
                        chain_moves(there, &here)
                    });
                }
                let k = this.nodes.len();
                this.index.insert(succ.clone(), k);
                this.nodes.push((succ, i, Some(d)));
                next.push(k);
            }
            if a_len(this, other) > STATE_CAP {
                return None;
            }
        }
        this.frontier = next;
        if this.frontier.is_empty() {
            return None;
        }
    }
    None
}

fn a_len(x: &Side, y: &Side) -> usize {
    x.nodes.len() + y.nodes.len()
}

/// Successors of a path: every contraction whose new face has support
/// over both supports, and every ampliation splitting a simplex through a
/// vertex below a support above it. Ampliations creating a degenerate
/// simplex are pruned.
fn neighbours(p: &Poset, state: &[Simplex1], max_len: usize) -> Vec<(Deformation, Vec<Simplex1>)> {
    let mut out = Vec::new();
    for j in 0..state.len().saturating_sub(1) {
        let (x, y) = (state[j], state[j + 1]);
        for s in p.upper_bounds(x.support, y.support) {
            let c = Simplex2::new(y, Simplex1::new(x.d1, y.d0, s), x, s);
            let mut v = state.to_vec();
            v[j] = c.f1;
            v.remove(j + 1);
            out.push((Deformation::contraction(j, c), v));
        }
    }
    if state.len() < max_len {
        for (j, &b) in state.iter().enumerate() {
            for s in p.up_set(b.support) {
                for v1 in p.down_set(s) {
                    let f2 = Simplex1::new(b.d1, v1, s);
                    let f0 = Simplex1::new(v1, b.d0, s);
                    if f2.is_degenerate() || f0.is_degenerate() {
                        continue;
                    }
                    let c = Simplex2::new(f0, b, f2, s);
                    let mut v = state.to_vec();
                    v[j] = f2;
                    v.insert(j + 1, f0);
                    out.push((Deformation::ampliation(j, c), v));
                }
            }
        }
    }
    out
}
