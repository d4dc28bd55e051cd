//! Integer light-cone lattices, their diamond posets and punctures.
//!
//! A lattice is a stack of time slices of a discrete space: a circle
//! (cylinder), an interval (strip) or a circle times an interval (annulus,
//! two space dimensions). `u` precedes `v` when `v` is no earlier and the
//! spatial distance is at most the elapsed time. The diamond over a base
//! `G` in slice `t` is the set of vertices whose causal cone meets slice
//! `t` inside `G`; equivalently the complement of the causal shadow of the
//! rest of the slice.

use crate::glue::Puncture;
use crate::poset::{components, Adjacency, Element, Poset, Region};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    /// Circle of circumference `m`, `t` slices.
    Cylinder { m: usize, t: usize },
    /// Interval of `width` sites, `t` slices.
    Strip { width: usize, t: usize },
    /// Circle of circumference `m` times an interval of `width`, `t`
    /// slices; distances are Manhattan.
    Annulus { m: usize, width: usize, t: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("degenerate lattice: {0}")]
    Degenerate(String),
    #[error("largest base {max_base} must be between 1 and {limit}")]
    MaxBase { max_base: usize, limit: usize },
    #[error("vertex {0} is not a lattice vertex")]
    UnknownVertex(usize),
    #[error("puncture at vertex {0} is empty")]
    EmptyPuncture(usize),
}

/// A lattice point: circle (or interval) coordinate `x`, radial coordinate
/// `r` (zero except on the annulus), and time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub x: usize,
    pub r: usize,
    pub t: usize,
}

#[derive(Debug, Clone)]
pub struct CausalLattice {
    topology: Topology,
    vertices: Vec<Vertex>,
    /// `cone[v]`: vertices causally related to `v`, itself included.
    cone: Vec<Vec<bool>>,
}

impl CausalLattice {
    pub fn new(topology: Topology) -> Result<Self, LatticeError> {
        let (xs, rs, ts) = match topology {
            Topology::Cylinder { m, t } => {
                if m < 3 || t < 1 {
                    return Err(LatticeError::Degenerate(format!(
                        "cylinder needs m >= 3 and t >= 1, got m = {m}, t = {t}"
                    )));
                }
                (m, 1, t)
            }
            Topology::Strip { width, t } => {
                if width < 1 || t < 1 {
                    return Err(LatticeError::Degenerate(format!(
                        "strip needs width, t >= 1, got {width}, {t}"
                    )));
                }
                (width, 1, t)
            }
            Topology::Annulus { m, width, t } => {
                if m < 3 || width < 1 || t < 1 {
                    return Err(LatticeError::Degenerate(format!(
                        "annulus needs m >= 3, width >= 1, t >= 1, got {m}, {width}, {t}"
                    )));
                }
                (m, width, t)
            }
        };
        let mut vertices = Vec::with_capacity(xs * rs * ts);
        for t in 0..ts {
            for r in 0..rs {
                for x in 0..xs {
                    vertices.push(Vertex { x, r, t });
                }
            }
        }
        let mut l = CausalLattice {
            topology,
            vertices,
            cone: Vec::new(),
        };
        let n = l.vertices.len();
        l.cone = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| l.precedes(u, v) || l.precedes(v, u))
                    .collect()
            })
            .collect();
        Ok(l)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn slices(&self) -> usize {
        match self.topology {
            Topology::Cylinder { t, .. }
            | Topology::Strip { t, .. }
            | Topology::Annulus { t, .. } => t,
        }
    }

    pub fn vertex_index(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Spatial distance between two vertices in half-site units. Odd
    /// slices are shifted by half a site along the circle or interval, so
    /// the sites of consecutive slices interleave and each vertex has two
    /// immediate successors.
    pub fn spatial_distance(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.vertices[u], self.vertices[v]);
        let pos = |w: Vertex| 2 * w.x + w.t % 2;
        let dx = pos(a).abs_diff(pos(b));
        match self.topology {
            Topology::Cylinder { m, .. } => dx.min(2 * m - dx),
            Topology::Strip { .. } => dx,
            Topology::Annulus { m, .. } => dx.min(2 * m - dx) + 2 * a.r.abs_diff(b.r),
        }
    }

    /// `u` lies in the causal past of `v` (or equals it).
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.vertices[u], self.vertices[v]);
        a.t <= b.t && self.spatial_distance(u, v) <= b.t - a.t
    }

    /// `u` and `v` are causally related.
    pub fn related(&self, u: usize, v: usize) -> bool {
        self.cone[u][v]
    }

    fn slice(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.vertices[v].t == t)
    }

    /// The diamond over a base inside one slice, as a vertex mask.
    fn diamond(&self, base: &[bool], t: usize) -> Vec<bool> {
        let outside: Vec<usize> = self.slice(t).filter(|&w| !base[w]).collect();
        (0..self.vertices.len())
            .map(|v| outside.iter().all(|&w| !self.related(v, w)))
            .collect()
    }

    /// Bases up to `max_base` sites across, in each slice: arcs on the
    /// cylinder, intervals on the strip, arc × interval on the annulus.
    fn bases(&self, max_base: usize) -> Vec<(usize, Vec<bool>, String)> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for t in 0..self.slices() {
            let at = |x: usize, r: usize| self.vertex_index(Vertex { x, r, t }).expect("in range");
            match self.topology {
                Topology::Cylinder { m, .. } => {
                    for k in 1..=max_base {
                        for a in 0..m {
                            let mut mask = vec![false; n];
                            (0..k).for_each(|i| mask[at((a + i) % m, 0)] = true);
                            out.push((t, mask, format!("t{t}:x{a}+{k}")));
                        }
                    }
                }
                Topology::Strip { width, .. } => {
                    for k in 1..=max_base {
                        for a in 0..=width - k {
                            let mut mask = vec![false; n];
                            (a..a + k).for_each(|x| mask[at(x, 0)] = true);
                            out.push((t, mask, format!("t{t}:x{a}+{k}")));
                        }
                    }
                }
                Topology::Annulus { m, width, .. } => {
                    for k in 1..=max_base {
                        for h in 1..=width {
                            for a in 0..m {
                                for r0 in 0..=width - h {
                                    let mut mask = vec![false; n];
                                    for i in 0..k {
                                        (r0..r0 + h).for_each(|r| mask[at((a + i) % m, r)] = true);
                                    }
                                    out.push((t, mask, format!("t{t}:x{a}+{k}:r{r0}+{h}")));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn base_limit(&self) -> usize {
        match self.topology {
            Topology::Cylinder { m, .. } | Topology::Annulus { m, .. } => m - 1,
            Topology::Strip { width, .. } => width,
        }
    }

    /// Default largest base: three sites, the smallest base whose diamonds
    /// straddle neighbouring slices well enough to fill the space between
    /// them, capped so that no diamond is a whole slice.
    pub fn default_max_base(&self) -> usize {
        let cap = match self.topology {
            Topology::Strip { width, .. } => width.saturating_sub(1).max(1),
            _ => self.base_limit(),
        };
        cap.min(3)
    }
}

/// One element of a diamond poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diamond {
    /// Slice of the first base producing this vertex set.
    pub slice: usize,
    pub base: Vec<usize>,
    pub vertices: Vec<usize>,
    pub label: String,
}

/// Diamonds indexed by poset element, with the lattice they live on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiamondTable {
    pub topology: Topology,
    pub max_base: usize,
    pub lattice_vertices: Vec<Vertex>,
    pub diamonds: Vec<Diamond>,
}

impl DiamondTable {
    pub fn len(&self) -> usize {
        self.diamonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diamonds.is_empty()
    }
}

/// A diamond poset together with its lattice and table.
#[derive(Debug, Clone)]
pub struct DiamondPoset {
    pub lattice: CausalLattice,
    pub poset: Poset,
    pub table: DiamondTable,
    masks: Vec<Vec<bool>>,
}

/// Diamonds over all bases up to `max_base` in every slice, deduplicated
/// by vertex set and ordered by size, then slice, then first appearance.
/// Order is inclusion; disjointness is causal disjointness.
pub fn generate_diamond_poset(
    lattice: CausalLattice,
    max_base: usize,
) -> Result<DiamondPoset, LatticeError> {
    let limit = lattice.base_limit();
    if max_base < 1 || max_base > limit {
        return Err(LatticeError::MaxBase { max_base, limit });
    }
    let mut seen: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut found: Vec<(usize, Vec<bool>, Vec<bool>, String)> = Vec::new();
    for (t, base, label) in lattice.bases(max_base) {
        let mask = lattice.diamond(&base, t);
        if seen.contains_key(&mask) {
            continue;
        }
        seen.insert(mask.clone(), found.len());
        found.push((t, base, mask, label));
    }
    let size = |m: &Vec<bool>| m.iter().filter(|&&b| b).count();
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by_key(|&i| (size(&found[i].2), found[i].0, i));
    let found: Vec<_> = order.into_iter().map(|i| found[i].clone()).collect();
    let masks: Vec<Vec<bool>> = found.iter().map(|f| f.2.clone()).collect();
    let nv = lattice.vertices.len();
    // Causal shadow J(O) of every diamond.
    let shadows: Vec<Vec<bool>> = masks
        .iter()
        .map(|m| {
            (0..nv)
                .map(|v| (0..nv).any(|w| m[w] && lattice.related(v, w)))
                .collect()
        })
        .collect();
    let n = masks.len();
    let poset = Poset::from_fn(
        n,
        |a, b| (0..nv).all(|v| !masks[a][v] || masks[b][v]),
        |a, b| (0..nv).all(|v| !masks[a][v] || !shadows[b][v]),
    );
    let labels = found.iter().map(|f| f.3.clone()).collect();
    let poset = poset.with_labels(labels).expect("one label per diamond");
    let diamonds = found
        .iter()
        .map(|(t, base, mask, label)| Diamond {
            slice: *t,
            base: (0..nv).filter(|&v| base[v]).collect(),
            vertices: (0..nv).filter(|&v| mask[v]).collect(),
            label: label.clone(),
        })
        .collect();
    let table = DiamondTable {
        topology: lattice.topology,
        max_base,
        lattice_vertices: lattice.vertices.clone(),
        diamonds,
    };
    Ok(DiamondPoset {
        lattice,
        poset,
        table,
        masks,
    })
}

/// `generate_diamond_poset` with the default largest base.
pub fn diamond_poset(topology: Topology) -> Result<DiamondPoset, LatticeError> {
    let lattice = CausalLattice::new(topology)?;
    let max_base = lattice.default_max_base();
    generate_diamond_poset(lattice, max_base)
}

impl DiamondPoset {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains_vertex(&self, e: Element, v: usize) -> bool {
        self.masks[e][v]
    }

    /// The vertex set plus every vertex one lattice step away in space,
    /// time, or both.
    pub fn closure(&self, e: Element) -> Vec<bool> {
        let l = &self.lattice;
        let nv = l.vertices.len();
        (0..nv)
            .map(|v| {
                (0..nv).any(|w| {
                    self.masks[e][w]
                        && l.vertices[v].t.abs_diff(l.vertices[w].t) <= 1
                        && l.spatial_distance(v, w) <= 2
                })
            })
            .collect()
    }

    /// `K_x`: diamonds whose closure avoids the causal cone of `x`.
    pub fn puncture_region(&self, x: usize) -> Result<Region, LatticeError> {
        let l = &self.lattice;
        if x >= l.vertices.len() {
            return Err(LatticeError::UnknownVertex(x));
        }
        let members = (0..self.len()).filter(|&e| {
            let cl = self.closure(e);
            (0..l.vertices.len()).all(|v| !cl[v] || !l.related(v, x))
        });
        let r = Region::from_members(self.len(), members);
        if r.is_empty() {
            return Err(LatticeError::EmptyPuncture(x));
        }
        Ok(r)
    }

    /// The puncture at vertex `x` with its sequence: single-vertex
    /// diamonds of `K_x`, farthest from `x` first, so that the tail
    /// approaches the removed point.
    pub fn puncture(&self, x: usize) -> Result<Puncture, LatticeError> {
        let members = self.puncture_region(x)?;
        let l = &self.lattice;
        let dist = |v: usize| {
            l.spatial_distance(v, x)
                .max(l.vertices[v].t.abs_diff(l.vertices[x].t))
        };
        let mut points: Vec<(usize, Element)> = members
            .members()
            .iter()
            .filter(|&&e| self.table.diamonds[e].vertices.len() == 1)
            .map(|&e| (dist(self.table.diamonds[e].vertices[0]), e))
            .collect();
        points.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let v = l.vertices[x];
        Ok(Puncture {
            id: format!("x{}r{}t{}", v.x, v.r, v.t),
            members,
            sequence: points.into_iter().map(|(_, e)| e).collect(),
        })
    }

    /// Punctures at every lattice vertex whose puncture is nonempty.
    pub fn all_punctures(&self) -> Vec<Puncture> {
        (0..self.lattice.vertices.len())
            .filter_map(|x| self.puncture(x).ok())
            .collect()
    }
}

/// Connectivity checks on one puncture.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PunctureReport {
    pub id: String,
    pub size: usize,
    pub connected: bool,
    /// Members whose causal complement inside the puncture is empty or
    /// not pathwise connected.
    pub disconnected_complements: Vec<Element>,
    /// Diamonds containing the removed point whose part below them in the
    /// puncture is not pathwise connected.
    pub disconnected_down_sets: Vec<Element>,
    /// Number of components of the graph of disjoint pairs.
    pub disjoint_pair_components: usize,
}

impl PunctureReport {
    pub fn passed(&self) -> bool {
        self.connected
            && self.disconnected_complements.is_empty()
            && self.disconnected_down_sets.is_empty()
            && self.disjoint_pair_components == 1
    }
}

/// Validates the connectivity hypotheses on the puncture at vertex `x`.
pub fn check_puncture(dp: &DiamondPoset, x: usize) -> Result<PunctureReport, LatticeError> {
    let k = dp.puncture(x)?;
    let p = &dp.poset;
    let connected = components(p, Adjacency::within(&k.members)).len() == 1;
    let disconnected_complements = k
        .members
        .members()
        .iter()
        .copied()
        .filter(|&o| {
            let comp = Region::from_members(
                p.len(),
                k.members
                    .members()
                    .iter()
                    .copied()
                    .filter(|&e| p.disjoint(e, o)),
            );
            comp.is_empty() || components(p, Adjacency::within(&comp)).len() != 1
        })
        .collect();
    let disconnected_down_sets = (0..p.len())
        .filter(|&o| dp.contains_vertex(o, x))
        .filter(|&o| {
            let below = k.members.below(p, o);
            !below.is_empty() && components(p, Adjacency::within(&below)).len() != 1
        })
        .collect();
    Ok(PunctureReport {
        id: k.id.clone(),
        size: k.members.len(),
        connected,
        disconnected_complements,
        disconnected_down_sets,
        disjoint_pair_components: disjoint_pair_components(p, &k.members),
    })
}

/// Components of the disjoint pairs of a sieve inside the product poset.
/// Two pairs below a common disjoint pair are joined through it, and every
/// pair below a disjoint pair is itself disjoint, so union-find over
/// "pair below pair" computes the path components.
pub fn disjoint_pair_components(p: &Poset, region: &Region) -> usize {
    let m = region.members();
    let pairs: Vec<(Element, Element)> = m
        .iter()
        .flat_map(|&a| m.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| p.disjoint(a, b))
        .collect();
    let index: BTreeMap<(Element, Element), usize> =
        pairs.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &s in m.iter().filter(|&&s| p.leq(a, s)) {
            for &t in m.iter().filter(|&&t| p.leq(b, t)) {
                if let Some(&j) = index.get(&(s, t)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..pairs.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// Outcome of the interpolation check for one diamond.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Interpolation {
    /// `outer` contains the closure of the diamond and `far` is disjoint
    /// from `outer`.
    Witness {
        diamond: Element,
        outer: Element,
        far: Element,
    },
    /// No diamond contains the closure.
    NoOuter { diamond: Element },
    /// Diamonds contain the closure but none has a disjoint partner.
    NoFar { diamond: Element },
}

/// For each diamond `O`, searches `O1 ⊇ cl(O)` and `O2 ⊥ O1`, preferring
/// the smallest `O1` and then the smallest `O2`.
pub fn interpolation_lemma_check(dp: &DiamondPoset) -> Vec<Interpolation> {
    let p = &dp.poset;
    let nv = dp.lattice.vertices.len();
    (0..dp.len())
        .map(|o| {
            let cl = dp.closure(o);
            let outers: Vec<Element> = (0..dp.len())
                .filter(|&e| (0..nv).all(|v| !cl[v] || dp.masks[e][v]))
                .collect();
            if outers.is_empty() {
                return Interpolation::NoOuter { diamond: o };
            }
            for &outer in &outers {
                if let Some(far) = (0..dp.len()).find(|&e| p.disjoint(e, outer)) {
                    return Interpolation::Witness {
                        diamond: o,
                        outer,
                        far,
                    };
                }
            }
            Interpolation::NoFar { diamond: o }
        })
        .collect()
}

/// `n` arcs covering a circle, elements `0..n`, and their pairwise
/// overlaps, element `n + i` lying in arcs `i` and `i + 1`. Arcs are
/// disjoint when they do not meet, an overlap is disjoint from the arcs
/// not containing it and from the other overlaps.
pub fn circle_poset(n: usize) -> Poset {
    assert!(n >= 3, "a circle needs at least three arcs");
    let arc_contains = |arc: usize, o: usize| o == arc || (o + 1) % n == arc;
    Poset::from_fn(
        2 * n,
        |a, b| a == b || (a >= n && b < n && arc_contains(b, a - n)),
        |a, b| match (a < n, b < n) {
            (true, true) => {
                let d = a.abs_diff(b);
                d.min(n - d) >= 2
            }
            (false, true) => !arc_contains(b, a - n),
            (true, false) => !arc_contains(a, b - n),
            (false, false) => a != b,
        },
    )
}
