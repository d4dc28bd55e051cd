//! Unitary 1-cocycles, intertwiners, path-independence and the induced
//! representation of the fundamental group.

use crate::homotopy::presentation::spanning_tree;
use crate::homotopy::{
    abelianize, generating_simplices2, pi1_presentation_with, GroupPresentation, PresentationError,
    RelationMode,
};
use crate::linalg::{
    dist, identity, op_norm, phase, polar_unitary, sandwich_operator, sylvester_operator,
    unitarity_defect, unitary_power, unvectorize, vectorize, CMat, Normal, Tolerances,
};
use crate::net::LocalNet;
use crate::poset::{components, Adjacency, Element, Path, Poset, Region, Simplex1, Simplex2};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CocycleError {
    #[error("no entry for simplex {0}")]
    MissingEntry(Simplex1),
    #[error("elements {0} and {1} are not joined by a path in the region")]
    NotPathwiseConnected(Element, Element),
    #[error("region is empty")]
    EmptyRegion,
    #[error("element {0} lies outside the cocycle's domain")]
    OutsideDomain(Element),
    #[error("the first homology of the region has no free part, so there is no winding number")]
    NoWinding,
    #[error("cocycles have different dimensions ({0} and {1}) or domains")]
    Incompatible(usize, usize),
    #[error("relation {index} maps to an operator at distance {residual:e} from the identity")]
    RelationFails { index: usize, residual: f64 },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A field of `d × d` unitaries on the 1-simplices of a region.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle {
    d: usize,
    domain: Region,
    entries: BTreeMap<Simplex1, CMat>,
}

impl Cocycle {
    /// Wraps entries without checking them; see [`check_cocycle`].
    pub fn from_entries(d: usize, domain: Region, entries: BTreeMap<Simplex1, CMat>) -> Self {
        Cocycle { d, domain, entries }
    }

    /// The trivial cocycle `ι`.
    pub fn trivial(p: &Poset, domain: &Region, d: usize) -> Self {
        Cocycle::from_fn(p, domain, d, |_| identity(d))
    }

    /// Entries computed simplex by simplex.
    pub fn from_fn(
        p: &Poset,
        domain: &Region,
        d: usize,
        mut f: impl FnMut(&Simplex1) -> CMat,
    ) -> Self {
        let entries = p
            .simplices1_in(domain)
            .into_iter()
            .map(|b| (b, f(&b)))
            .collect();
        Cocycle {
            d,
            domain: domain.clone(),
            entries,
        }
    }

    /// The cocycle determined by its values `e(x, s)` on the simplices
    /// `x → s` with support `s`: `z(u → v | t) = e(v, t)* e(u, t)`. It is a
    /// cocycle iff `e(s, s) = 1` and `e(y, z) e(x, y) = e(x, z)` for chains.
    pub fn from_edges(
        p: &Poset,
        domain: &Region,
        d: usize,
        e: impl Fn(Element, Element) -> CMat,
    ) -> Self {
        Cocycle::from_fn(p, domain, d, |b| {
            e(b.d0, b.support).adjoint() * e(b.d1, b.support)
        })
    }

    /// The coboundary `z(b) = W(∂0 b) W(∂1 b)*` of a unitary field.
    pub fn coboundary(p: &Poset, domain: &Region, d: usize, w: impl Fn(Element) -> CMat) -> Self {
        let field: BTreeMap<Element, CMat> = domain.members().iter().map(|&a| (a, w(a))).collect();
        Cocycle::from_fn(p, domain, d, |b| &field[&b.d0] * field[&b.d1].adjoint())
    }

    /// The scalar winding cocycle `z(b) = e^{i k(b) θ}`, with `k(b)` the
    /// first free coordinate of the class of `b` in the first homology.
    pub fn winding(p: &Poset, domain: &Region, d: usize, theta: f64) -> Result<Self, CocycleError> {
        let k = winding_numbers(p, domain)?;
        Ok(Cocycle::from_fn(p, domain, d, |b| {
            phase(d, theta * k[b] as f64)
        }))
    }

    /// `z(b) = u^{k(b)}` with the winding numbers of [`winding_numbers`].
    pub fn holonomy(p: &Poset, domain: &Region, u: &CMat) -> Result<Self, CocycleError> {
        let k = winding_numbers(p, domain)?;
        Ok(Cocycle::from_fn(p, domain, u.nrows(), |b| {
            unitary_power(u, k[b])
        }))
    }

    /// `z^u(b) = u(∂0 b) z(b) u(∂1 b)*`.
    pub fn twist(&self, u: impl Fn(Element) -> CMat) -> Self {
        let field: BTreeMap<Element, CMat> =
            self.domain.members().iter().map(|&a| (a, u(a))).collect();
        let entries = self
            .entries
            .iter()
            .map(|(b, m)| (*b, &field[&b.d0] * m * field[&b.d1].adjoint()))
            .collect();
        Cocycle {
            d: self.d,
            domain: self.domain.clone(),
            entries,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn domain(&self) -> &Region {
        &self.domain
    }

    pub fn entries(&self) -> &BTreeMap<Simplex1, CMat> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut BTreeMap<Simplex1, CMat> {
        &mut self.entries
    }

    pub fn get(&self, b: &Simplex1) -> Result<&CMat, CocycleError> {
        self.entries.get(b).ok_or(CocycleError::MissingEntry(*b))
    }

    /// `z(p) = z(b_n) ⋯ z(b_1)`.
    pub fn evaluate(&self, path: &Path) -> Result<CMat, CocycleError> {
        let mut out = identity(self.d);
        for b in path.simplices() {
            out = self.get(b)? * out;
        }
        Ok(out)
    }

    /// Largest entrywise operator-norm distance to another cocycle, over
    /// the simplices of `self`.
    pub fn distance(&self, other: &Cocycle) -> Result<f64, CocycleError> {
        let mut worst = 0.0f64;
        for (b, m) in &self.entries {
            worst = worst.max(dist(m, other.get(b)?));
        }
        Ok(worst)
    }

    /// Entries whose faces and support lie in `region`, over the domain
    /// `region ∩ domain`.
    pub fn restrict(&self, region: &Region) -> Cocycle {
        let domain = self.domain.intersect(region);
        let entries = self
            .entries
            .iter()
            .filter(|(b, _)| {
                domain.contains(b.d1) && domain.contains(b.d0) && domain.contains(b.support)
            })
            .map(|(b, m)| (*b, m.clone()))
            .collect();
        Cocycle {
            d: self.d,
            domain,
            entries,
        }
    }

    fn check_compatible(&self, other: &Cocycle) -> Result<(), CocycleError> {
        if self.d != other.d || self.domain != other.domain {
            return Err(CocycleError::Incompatible(self.d, other.d));
        }
        Ok(())
    }

    /// Operators `z(tree path to a)` from the basepoint of a spanning tree of
    /// `region`, with the tree paths.
    fn transport(&self, p: &Poset, region: &Region) -> Result<Transport, CocycleError> {
        Transport::new(self, p, region)
    }
}

/// Winding number of every 1-simplex of `domain`: the first free
/// coordinate of its class in the first homology of the region.
pub fn winding_numbers(
    p: &Poset,
    domain: &Region,
) -> Result<BTreeMap<Simplex1, i64>, CocycleError> {
    let base = *domain.members().first().ok_or(CocycleError::EmptyRegion)?;
    let g = pi1_presentation_with(p, domain, base, RelationMode::Generating)?;
    let ab = abelianize(g.num_generators(), &g.relations);
    if ab.rank == 0 {
        return Err(CocycleError::NoWinding);
    }
    let coord = ab.torsion.len();
    let mut per_generator = vec![0i64; g.num_generators()];
    let mut unit = vec![0i64; g.num_generators()];
    for (i, k) in per_generator.iter_mut().enumerate() {
        unit[i] = 1;
        *k = ab.class(&unit)[coord];
        unit[i] = 0;
    }
    let mut out = BTreeMap::new();
    for b in p.simplices1_in(domain) {
        let (i, inv) = g.generator(&b).expect("simplex of the region");
        out.insert(
            b,
            if inv {
                -per_generator[i]
            } else {
                per_generator[i]
            },
        );
    }
    Ok(out)
}

/// A spanning tree with the cocycle evaluated along its paths.
struct Transport {
    basepoint: Element,
    tree: Vec<Vec<Simplex1>>,
    tree_edges: Vec<Simplex1>,
    /// `z(tree path from the basepoint to a)`.
    along: BTreeMap<Element, CMat>,
}

impl Transport {
    fn new(z: &Cocycle, p: &Poset, region: &Region) -> Result<Self, CocycleError> {
        let base = *region.members().first().ok_or(CocycleError::EmptyRegion)?;
        if let Some(&e) = region.members().iter().find(|&&e| !z.domain.contains(e)) {
            return Err(CocycleError::OutsideDomain(e));
        }
        let comps = components(p, Adjacency::within(region));
        if comps.len() > 1 {
            return Err(CocycleError::NotPathwiseConnected(comps[0][0], comps[1][0]));
        }
        let (tree, tree_edges) = spanning_tree(p, region, base);
        let mut along = BTreeMap::new();
        along.insert(base, identity(z.d));
        // Tree edges come out in BFS order, so parents are evaluated first.
        for b in &tree_edges {
            let m = z.get(b)? * &along[&b.d1];
            along.insert(b.d0, m);
        }
        Ok(Transport {
            basepoint: base,
            tree,
            tree_edges,
            along,
        })
    }

    /// `z` on the based loop through `b`: tree path to `∂1 b`, then `b`,
    /// then back along the tree from `∂0 b`.
    fn loop_value(&self, z: &Cocycle, b: &Simplex1) -> Result<CMat, CocycleError> {
        Ok(self.along[&b.d0].adjoint() * z.get(b)? * &self.along[&b.d1])
    }

    fn loop_path(&self, b: &Simplex1) -> Path {
        let mut v = self.tree[b.d1].clone();
        v.push(*b);
        v.extend(self.tree[b.d0].iter().rev().map(|s| s.reverse()));
        Path::new(v).expect("tree loops are chained")
    }
}

/// A based loop `tree · b · tree⁻¹` and the cocycle's value on it.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalCycle {
    pub simplex: Simplex1,
    pub path: Path,
    /// `‖z(loop) − 1‖`.
    pub deviation: f64,
    #[serde(with = "crate::io::matrix")]
    pub value: CMat,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathIndependence {
    pub independent: bool,
    pub basepoint: Element,
    pub cycles_checked: usize,
    pub max_deviation: f64,
    /// The first fundamental cycle, in simplex order, whose value is not
    /// within tolerance of the identity.
    pub witness: Option<FundamentalCycle>,
}

/// Evaluates `z` on every fundamental cycle of a spanning tree of `region`.
/// These loops generate the fundamental group, and `z` on loops only
/// depends on homotopy classes, so `z` is path-independent on the region
/// iff every value is the identity.
pub fn check_path_independence(
    z: &Cocycle,
    p: &Poset,
    region: &Region,
    tol: &Tolerances,
) -> Result<PathIndependence, CocycleError> {
    let t = z.transport(p, region)?;
    let tree: std::collections::HashSet<Simplex1> = t.tree_edges.iter().copied().collect();
    let mut checked = 0;
    let mut max_deviation = 0.0f64;
    let mut witness = None;
    for b in p.simplices1_in(region) {
        if b.d1 > b.d0 || tree.contains(&b) {
            continue;
        }
        checked += 1;
        let value = t.loop_value(z, &b)?;
        let deviation = dist(&value, &identity(z.d));
        max_deviation = max_deviation.max(deviation);
        if deviation > tol.unitary && witness.is_none() {
            witness = Some(FundamentalCycle {
                simplex: b,
                path: t.loop_path(&b),
                deviation,
                value,
            });
        }
    }
    Ok(PathIndependence {
        independent: witness.is_none(),
        basepoint: t.basepoint,
        cycles_checked: checked,
        max_deviation,
        witness,
    })
}

/// Outcome of [`trivialize`].
#[derive(Debug, Clone)]
pub enum Trivialization {
    /// `V(∂0 b) z(b) V(∂1 b)* = 1` for every simplex.
    Trivial {
        basepoint: Element,
        field: BTreeMap<Element, CMat>,
        max_residual: f64,
    },
    /// The simplex with the first failing residual and its based loop.
    NotTrivial { cycle: FundamentalCycle },
}

impl Trivialization {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Trivialization::Trivial { .. })
    }
}

/// Tries to write `z` as a coboundary: `V(a) = z(tree path to a)*`, then
/// checks `V(∂0 b) z(b) V(∂1 b)* = 1` on every simplex of the region.
pub fn trivialize(
    z: &Cocycle,
    p: &Poset,
    region: &Region,
    tol: &Tolerances,
) -> Result<Trivialization, CocycleError> {
    let t = z.transport(p, region)?;
    let field: BTreeMap<Element, CMat> = t.along.iter().map(|(&a, m)| (a, m.adjoint())).collect();
    let mut max_residual = 0.0f64;
    for b in p.simplices1_in(region) {
        let r = &field[&b.d0] * z.get(&b)? * field[&b.d1].adjoint();
        let residual = dist(&r, &identity(z.d));
        if residual > tol.unitary {
            let path = t.loop_path(&b);
            return Ok(Trivialization::NotTrivial {
                cycle: FundamentalCycle {
                    simplex: b,
                    path,
                    deviation: residual,
                    value: r,
                },
            });
        }
        max_residual = max_residual.max(residual);
    }
    Ok(Trivialization::Trivial {
        basepoint: t.basepoint,
        field,
        max_residual,
    })
}

/// A failed cocycle condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum CocycleFailure {
    Missing {
        simplex: Simplex1,
    },
    Shape {
        simplex: Simplex1,
        rows: usize,
        cols: usize,
    },
    Unitarity {
        simplex: Simplex1,
        defect: f64,
    },
    Identity {
        simplex: Simplex2,
        residual: f64,
    },
    Locality {
        simplex: Simplex1,
        residual: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    /// First failure of each condition, in simplex order.
    pub failures: Vec<CocycleFailure>,
    pub max_unitarity_defect: f64,
    pub max_identity_residual: f64,
    pub max_locality_residual: f64,
    pub simplices2_checked: usize,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks unitarity, the cocycle identity and, when a net is given,
/// locality `z(b) ∈ A(|b|)`. In generating mode the identity is checked on
/// [`generating_simplices2`], which implies it everywhere.
pub fn check_cocycle(
    z: &Cocycle,
    p: &Poset,
    net: Option<&LocalNet>,
    mode: RelationMode,
    tol: &Tolerances,
) -> CocycleReport {
    let mut failures = Vec::new();
    let (mut max_u, mut max_i, mut max_l) = (0.0f64, 0.0f64, 0.0f64);
    let mut seen = [false; 3];
    for b in p.simplices1_in(&z.domain) {
        let Some(m) = z.entries.get(&b) else {
            if !failures
                .iter()
                .any(|f| matches!(f, CocycleFailure::Missing { .. }))
            {
                failures.push(CocycleFailure::Missing { simplex: b });
            }
            continue;
        };
        if m.nrows() != z.d || m.ncols() != z.d {
            failures.push(CocycleFailure::Shape {
                simplex: b,
                rows: m.nrows(),
                cols: m.ncols(),
            });
            return CocycleReport {
                failures,
                max_unitarity_defect: f64::NAN,
                max_identity_residual: f64::NAN,
                max_locality_residual: f64::NAN,
                simplices2_checked: 0,
            };
        }
        let u = unitarity_defect(m);
        max_u = max_u.max(u);
        if u > tol.unitary && !seen[0] {
            seen[0] = true;
            failures.push(CocycleFailure::Unitarity {
                simplex: b,
                defect: u,
            });
        }
        if let Some(net) = net {
            let l = net.algebra(b.support).residual(m);
            max_l = max_l.max(l);
            if l > tol.algebra && !seen[2] {
                seen[2] = true;
                failures.push(CocycleFailure::Locality {
                    simplex: b,
                    residual: l,
                });
            }
        }
    }
    let simplices2: Vec<Simplex2> = match mode {
        RelationMode::Generating => generating_simplices2(p, &z.domain),
        RelationMode::All => {
            let mut all = Vec::new();
            for &s in z.domain.members() {
                p.for_each_simplex2_with_support(s, |c| {
                    if [c.f0, c.f1, c.f2]
                        .iter()
                        .all(|f| z.domain.contains(f.support))
                    {
                        all.push(c)
                    }
                });
            }
            all
        }
    };
    for c in &simplices2 {
        let (Some(a), Some(b), Some(e)) = (
            z.entries.get(&c.f0),
            z.entries.get(&c.f2),
            z.entries.get(&c.f1),
        ) else {
            continue;
        };
        let r = dist(&(a * b), e);
        max_i = max_i.max(r);
        if r > tol.unitary && !seen[1] {
            seen[1] = true;
            failures.push(CocycleFailure::Identity {
                simplex: *c,
                residual: r,
            });
        }
    }
    CocycleReport {
        failures,
        max_unitarity_defect: max_u,
        max_identity_residual: max_i,
        max_locality_residual: max_l,
        simplices2_checked: simplices2.len(),
    }
}

/// The image `π_z(g)` of every generator of a presentation.
#[derive(Debug, Clone)]
pub struct Representation {
    pub basepoint: Element,
    /// One operator per generator; trivial generators map to the identity.
    pub images: Vec<CMat>,
    pub max_relation_residual: f64,
}

impl Representation {
    /// Images of the generators not killed by single-letter relators.
    pub fn nontrivial<'a>(
        &'a self,
        g: &'a GroupPresentation,
    ) -> impl Iterator<Item = (usize, &'a CMat)> + 'a {
        self.images
            .iter()
            .enumerate()
            .filter(move |(i, _)| !g.is_trivial_generator(*i))
    }
}

/// `π_z([p]) = z(p)` on the generator loops of `g`, with every relation
/// checked.
pub fn induced_representation(
    z: &Cocycle,
    g: &GroupPresentation,
    tol: &Tolerances,
) -> Result<Representation, CocycleError> {
    let along = tree_transport(z, g)?;
    let mut images = Vec::with_capacity(g.num_generators());
    for b in &g.generators {
        images.push(along[&b.d0].adjoint() * z.get(b)? * &along[&b.d1]);
    }
    let mut max_relation_residual = 0.0f64;
    for (index, r) in g.relations.iter().enumerate() {
        let mut m = identity(z.d);
        for &l in r.letters() {
            let img = &images[crate::homotopy::generator_of(l)];
            m = if l > 0 { m * img } else { m * img.adjoint() };
        }
        let residual = dist(&m, &identity(z.d));
        if residual > tol.unitary * (1 + r.len()) as f64 {
            return Err(CocycleError::RelationFails { index, residual });
        }
        max_relation_residual = max_relation_residual.max(residual);
    }
    Ok(Representation {
        basepoint: g.basepoint,
        images,
        max_relation_residual,
    })
}

fn tree_transport(
    z: &Cocycle,
    g: &GroupPresentation,
) -> Result<BTreeMap<Element, CMat>, CocycleError> {
    let mut along = BTreeMap::new();
    for &a in g.region().members() {
        let mut m = identity(z.d);
        for b in &g.tree[a] {
            m = z.get(b)? * m;
        }
        along.insert(a, m);
    }
    Ok(along)
}

/// A unitary `U` with `U π1(g) U* = π2(g)` for every generator, if any.
pub fn representation_equivalence(
    r1: &Representation,
    r2: &Representation,
    tol: &Tolerances,
) -> Option<CMat> {
    let d = r1.images.first().map_or(0, |m| m.nrows());
    if d == 0 || r1.images.len() != r2.images.len() {
        return None;
    }
    let mut normal = Normal::new(d * d);
    for (a, b) in r1.images.iter().zip(&r2.images) {
        // U a − b U = 0
        normal.add(&sylvester_operator(b, a));
    }
    let space: Vec<CMat> = normal
        .kernel(tol.unitary.sqrt())
        .iter()
        .map(|v| unvectorize(v, d))
        .collect();
    unitary_in_span(&space, tol, |u| {
        r1.images
            .iter()
            .zip(&r2.images)
            .map(|(a, b)| dist(&(u * a), &(b * u)))
            .fold(0.0, f64::max)
    })
}

/// Searches the span for a unitary: the polar part of a generic element is
/// unitary and stays in the span whenever the span is an intertwiner space
/// containing an invertible element.
fn unitary_in_span(
    space: &[CMat],
    tol: &Tolerances,
    residual: impl Fn(&CMat) -> f64,
) -> Option<CMat> {
    if space.is_empty() {
        return None;
    }
    for attempt in 0..4 {
        let mut t = CMat::zeros(space[0].nrows(), space[0].ncols());
        for (j, s) in space.iter().enumerate() {
            let angle = 0.7548776662 * ((j + 1) * (attempt + 1)) as f64;
            let weight = 1.0 + 0.5698402910 * ((j * 7 + attempt * 3) % 11) as f64;
            t += s * Complex64::from_polar(weight, angle);
        }
        if let Some(u) = polar_unitary(&t, 1e-6 * op_norm(&t)) {
            if residual(&u) <= tol.unitary.sqrt() * 1e-2 {
                return Some(u);
            }
        }
    }
    None
}

/// The field `V(a) = z1(p_a) U z(p_a)*` built from an equivalence `U` of
/// induced representations, where `p_a` is the tree path to `a`. It
/// satisfies `V(∂0 b) z(b) = z1(b) V(∂1 b)` for every simplex.
pub fn equivalence_field(
    z: &Cocycle,
    z1: &Cocycle,
    g: &GroupPresentation,
    u: &CMat,
) -> Result<BTreeMap<Element, CMat>, CocycleError> {
    let a = tree_transport(z, g)?;
    let b = tree_transport(z1, g)?;
    Ok(a.iter()
        .map(|(&e, m)| (e, &b[&e] * u * m.adjoint()))
        .collect())
}

/// A field of operators on the elements of a region.
#[derive(Debug, Clone, PartialEq)]
pub struct Intertwiner {
    d: usize,
    entries: BTreeMap<Element, CMat>,
}

impl Intertwiner {
    pub fn from_entries(d: usize, entries: BTreeMap<Element, CMat>) -> Self {
        Intertwiner { d, entries }
    }

    pub fn identity(domain: &Region, d: usize) -> Self {
        Intertwiner {
            d,
            entries: domain.members().iter().map(|&a| (a, identity(d))).collect(),
        }
    }

    pub fn scalar(domain: &Region, d: usize, c: Complex64) -> Self {
        Intertwiner {
            d,
            entries: domain
                .members()
                .iter()
                .map(|&a| (a, identity(d) * c))
                .collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &BTreeMap<Element, CMat> {
        &self.entries
    }

    pub fn get(&self, a: Element) -> Option<&CMat> {
        self.entries.get(&a)
    }

    pub fn restrict(&self, region: &Region) -> Intertwiner {
        let entries = self
            .entries
            .iter()
            .filter(|(a, _)| region.contains(**a))
            .map(|(&a, m)| (a, m.clone()))
            .collect();
        Intertwiner { d: self.d, entries }
    }

    /// Pointwise product `self · other`.
    pub fn compose(&self, other: &Intertwiner) -> Intertwiner {
        self.zip(other, |a, b| a * b)
    }

    pub fn adjoint(&self) -> Intertwiner {
        self.map(|m| m.adjoint())
    }

    pub fn add(&self, other: &Intertwiner) -> Intertwiner {
        self.zip(other, |a, b| a + b)
    }

    pub fn scale(&self, c: Complex64) -> Intertwiner {
        self.map(|m| m * c)
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Intertwiner {
        Intertwiner {
            d: self.d,
            entries: self.entries.iter().map(|(&a, m)| (a, f(m))).collect(),
        }
    }

    pub fn zip(&self, other: &Intertwiner, f: impl Fn(&CMat, &CMat) -> CMat) -> Intertwiner {
        let entries = self
            .entries
            .iter()
            .filter_map(|(a, m)| other.entries.get(a).map(|n| (*a, f(m, n))))
            .collect();
        Intertwiner { d: self.d, entries }
    }

    /// Largest operator-norm distance between components.
    pub fn distance(&self, other: &Intertwiner) -> f64 {
        self.entries
            .iter()
            .map(|(a, m)| other.entries.get(a).map_or(f64::INFINITY, |n| dist(m, n)))
            .fold(0.0, f64::max)
    }

    /// `max ‖t(∂0 b) z(b) − z1(b) t(∂1 b)‖` over the simplices of `z`.
    pub fn intertwining_residual(&self, z: &Cocycle, z1: &Cocycle) -> Result<f64, CocycleError> {
        let mut worst = 0.0f64;
        for (b, m) in &z.entries {
            let t0 = self
                .entries
                .get(&b.d0)
                .ok_or(CocycleError::OutsideDomain(b.d0))?;
            let t1 = self
                .entries
                .get(&b.d1)
                .ok_or(CocycleError::OutsideDomain(b.d1))?;
            worst = worst.max(dist(&(t0 * m), &(z1.get(b)? * t1)));
        }
        Ok(worst)
    }

    /// `max dist(t_a, A(a))`.
    pub fn locality_residual(&self, net: &LocalNet) -> f64 {
        self.entries
            .iter()
            .map(|(&a, m)| net.algebra(a).residual(m))
            .fold(0.0, f64::max)
    }

    /// Operator norms of the components.
    pub fn norms(&self) -> BTreeMap<Element, f64> {
        self.entries.iter().map(|(&a, m)| (a, op_norm(m))).collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.entries
            .values()
            .map(unitarity_defect)
            .fold(0.0, f64::max)
    }
}

/// A basis of the space of local intertwiners `t ∈ (z, z1)`, i.e. fields
/// with `t(∂0 b) z(b) = z1(b) t(∂1 b)` and `t(a) ∈ A(a)`.
///
/// On a pathwise connected domain an intertwiner is fixed by its value `X`
/// at the basepoint through tree transport, `t(a) = z1(p_a) X z(p_a)*`, so
/// the unknown is a single `d × d` matrix.
pub fn intertwiner_space(
    z: &Cocycle,
    z1: &Cocycle,
    p: &Poset,
    net: &LocalNet,
    tol: &Tolerances,
) -> Result<Vec<Intertwiner>, CocycleError> {
    z.check_compatible(z1)?;
    let d = z.d;
    let tz = z.transport(p, &z.domain)?;
    let tz1 = z1.transport(p, &z.domain)?;
    let mut normal = Normal::new(d * d);
    for b in p.simplices1_in(&z.domain) {
        if b.d1 > b.d0 {
            continue;
        }
        let a = tz.loop_value(z, &b)?;
        let c = tz1.loop_value(z1, &b)?;
        // X a − c X = 0
        normal.add(&sylvester_operator(&c, &a));
    }
    let dd = d * d;
    for &e in z.domain.members() {
        let alg = net.algebra(e);
        if alg.is_full() {
            continue;
        }
        // Component of z1(p_e) X z(p_e)* outside A(e).
        let mut q = CMat::identity(dd, dd);
        for bv in alg.basis() {
            let v = vectorize(bv);
            q -= &v * v.adjoint();
        }
        normal.add(&(q * sandwich_operator(&tz1.along[&e], &tz.along[&e].adjoint())));
    }
    let kernel = normal.kernel(tol.unitary.sqrt());
    Ok(kernel
        .iter()
        .map(|v| {
            let x = unvectorize(v, d);
            let entries = tz
                .along
                .iter()
                .map(|(&e, m)| (e, &tz1.along[&e] * &x * m.adjoint()))
                .collect();
            Intertwiner { d, entries }
        })
        .collect())
}

/// An intertwiner in `(z, z1)`, unitary if requested; `None` when the
/// space is zero or, with `unitary_only`, contains no unitary.
pub fn find_intertwiner(
    z: &Cocycle,
    z1: &Cocycle,
    p: &Poset,
    net: &LocalNet,
    unitary_only: bool,
    tol: &Tolerances,
) -> Result<Option<Intertwiner>, CocycleError> {
    let space = intertwiner_space(z, z1, p, net, tol)?;
    if space.is_empty() {
        return Ok(None);
    }
    if !unitary_only {
        return Ok(Some(space[0].clone()));
    }
    let base = z.domain.members()[0];
    let at_base: Vec<CMat> = space.iter().map(|t| t.entries[&base].clone()).collect();
    let Some(x) = unitary_in_span(&at_base, tol, |_| 0.0) else {
        return Ok(None);
    };
    // Transport from the basepoint, where tree paths are trivial.
    let tz = z.transport(p, &z.domain)?;
    let tz1 = z1.transport(p, &z.domain)?;
    let entries = tz
        .along
        .iter()
        .map(|(&e, m)| (e, &tz1.along[&e] * &x * m.adjoint()))
        .collect();
    let t = Intertwiner { d: z.d, entries };
    let ok = t.intertwining_residual(z, z1)? <= 10.0 * tol.unitary.sqrt()
        && t.locality_residual(net) <= 10.0 * tol.algebra.sqrt()
        && t.unitarity_defect() <= 10.0 * tol.unitary;
    Ok(ok.then_some(t))
}
