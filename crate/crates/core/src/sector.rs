//! Superselection structure on cocycles that are path-independent on every
//! puncture: localized endomorphisms `y^z`, tensor products, the symmetry,
//! left inverses, statistics and conjugates.
//!
//! Everything is computed puncture by puncture and glued. A context refuses
//! nets failing punctured Haag duality. With the duality in place, `y^z(a)`
//! acts on `A(e)` as `Ad z(p)` for a path `p` inside the puncture from an
//! element disjoint from `e` to `a`, and the choice of `p` is irrelevant.
//! That independence is asserted on every use by recomputing with a second
//! far element, taken from another component of the disjoint set when it
//! has several.

use crate::cocycle::{intertwiner_space, Cocycle, CocycleError, Intertwiner};
use crate::glue::{glue, glue_intertwiner, GlueError, Glued, PunctureFamily};
use crate::linalg::{as_scalar, dist, identity, op_norm, CMat, Tolerances};
use crate::net::{relative_duality, DualityFailure, LocalNet, NetError};
use crate::poset::{components, Adjacency, Element, Path, Poset, Region, Simplex1};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::{BTreeMap, VecDeque};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SectorError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("puncture {puncture:?} fails punctured duality at element {}", failure.element)]
    DualityRefused {
        puncture: String,
        failure: DualityFailure,
    },
    #[error("puncture {0:?} is not pathwise connected")]
    PunctureDisconnected(String),
    #[error("no puncture named {0:?}")]
    UnknownPuncture(String),
    #[error("cocycle is not path-independent on puncture {puncture:?} (deviation {deviation:e})")]
    NotPathIndependent { puncture: String, deviation: f64 },
    #[error("element {element} is not in puncture {puncture:?}")]
    NotInPuncture { element: Element, puncture: String },
    #[error("no element of puncture {puncture:?} is disjoint from {locus}")]
    NoFarElement { locus: Element, puncture: String },
    #[error("y at {anchor} on the algebra of {locus} in {puncture:?} depends on the transport ({deviation:e}); the disjoint set is split")]
    ComplementDisconnected {
        anchor: Element,
        locus: Element,
        puncture: String,
        deviation: f64,
    },
    #[error("y at {anchor} on the algebra of {locus} in {puncture:?} depends on the transport ({deviation:e})")]
    IllDefined {
        anchor: Element,
        locus: Element,
        puncture: String,
        deviation: f64,
    },
    #[error("no pair of paths from {0} with disjoint endpoints")]
    NoDisjointPair(Element),
    #[error("symmetry at {anchor} depends on the path pair ({deviation:e})")]
    SymmetryChoice { anchor: Element, deviation: f64 },
    #[error("no puncture holds a sequence element disjoint from {0}")]
    NoDisjointTail(Element),
    #[error("left inverse at {anchor} does not stabilize (oscillation {oscillation:e})")]
    NotStabilized { anchor: Element, oscillation: f64 },
    #[error("the cocycle is not simple")]
    NotSimple,
    #[error("operands have dimensions {0} and {1}")]
    Dimension(usize, usize),
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// Far elements usable for the transport of `y` on one locus.
#[derive(Debug, Clone)]
struct FarChoice {
    primary: Element,
    alternative: Option<Element>,
    connected: bool,
}

/// Per-puncture data that does not depend on the cocycle.
#[derive(Debug, Clone)]
struct PunctureData {
    /// Neighbours `(y, support)` of each member, by ascending support.
    nbrs: Vec<Vec<(Element, Element)>>,
    far: Vec<Option<FarChoice>>,
    simplices: Vec<Simplex1>,
    basepoint: Element,
}

impl PunctureData {
    fn new(p: &Poset, members: &Region, sequence: &[Element]) -> Self {
        let n = p.len();
        let mut nbrs = vec![Vec::new(); n];
        for &x in members.members() {
            let mut seen = vec![false; n];
            seen[x] = true;
            for &s in members.members() {
                if !p.leq(x, s) {
                    continue;
                }
                for &y in members.members() {
                    if p.leq(y, s) && !seen[y] {
                        seen[y] = true;
                        nbrs[x].push((y, s));
                    }
                }
            }
        }
        // Closest to the removed point first.
        let mut order: Vec<Element> = sequence.iter().rev().copied().collect();
        order.extend(
            members
                .members()
                .iter()
                .copied()
                .filter(|e| !sequence.contains(e)),
        );
        let mut far = vec![None; n];
        for &e in members.members() {
            let list: Vec<Element> = order
                .iter()
                .copied()
                .filter(|&f| p.disjoint(f, e))
                .collect();
            let Some(&primary) = list.first() else {
                continue;
            };
            let region = Region::from_members(n, list.iter().copied());
            let comps = components(p, Adjacency::within(&region));
            let comp_of = |f: Element| comps.iter().position(|c| c.contains(&f));
            let home = comp_of(primary);
            let alternative = list
                .iter()
                .copied()
                .find(|&f| comp_of(f) != home)
                .or_else(|| list.get(1).copied());
            far[e] = Some(FarChoice {
                primary,
                alternative,
                connected: comps.len() == 1,
            });
        }
        PunctureData {
            nbrs,
            far,
            simplices: p.simplices1_in(members),
            basepoint: members.members()[0],
        }
    }

    /// Breadth-first parents from `from`, with the same exploration order
    /// as the poset-wide path search.
    fn bfs(&self, from: Element) -> (Vec<Option<usize>>, Vec<Option<Simplex1>>) {
        let n = self.nbrs.len();
        let mut depth = vec![None; n];
        let mut parent = vec![None; n];
        depth[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            let dx = depth[x].unwrap_or(0);
            for &(y, s) in &self.nbrs[x] {
                if depth[y].is_none() {
                    depth[y] = Some(dx + 1);
                    parent[y] = Some(Simplex1::new(x, y, s));
                    queue.push_back(y);
                }
            }
        }
        (depth, parent)
    }

    fn path(parent: &[Option<Simplex1>], from: Element, to: Element) -> Option<Path> {
        if from == to {
            return Some(Path::degenerate(from));
        }
        let mut out = Vec::new();
        let mut cur = to;
        while cur != from {
            let b = parent[cur]?;
            out.push(b);
            cur = b.d1;
        }
        out.reverse();
        Path::new(out).ok()
    }
}

/// A cocycle with its tree transport on every puncture.
#[derive(Debug, Clone)]
struct Prepared {
    z: Cocycle,
    /// `along[x][a] = z(p)` for the tree path `p` from the basepoint of
    /// puncture `x` to `a`.
    along: Vec<BTreeMap<Element, CMat>>,
}

impl Prepared {
    /// `z(p)` for any path in puncture `x` from `from` to `to`.
    fn between(&self, x: usize, from: Element, to: Element) -> CMat {
        &self.along[x][&to] * self.along[x][&from].adjoint()
    }
}

/// The action of `y^z(a)` on one local algebra of one puncture.
#[derive(Debug, Clone, Serialize)]
pub struct LocalizedMorphism {
    pub puncture: String,
    pub anchor: Element,
    /// The element whose algebra is acted on.
    pub locus: Element,
    pub far: Element,
    /// Breadth-first path inside the puncture from `far` to `anchor`.
    pub transport: Path,
    pub alternative: Option<Path>,
    /// Whether the members disjoint from the locus form one component.
    pub far_set_connected: bool,
    /// Largest difference of the two actions on a basis of the algebra.
    pub deviation: f64,
    #[serde(with = "crate::io::matrix")]
    pub unitary: CMat,
}

impl LocalizedMorphism {
    pub fn apply(&self, a: &CMat) -> CMat {
        &self.unitary * a * self.unitary.adjoint()
    }

    /// The inverse action `Ad z(p)*`, defined for simple cocycles.
    pub fn apply_inverse(&self, a: &CMat) -> CMat {
        self.unitary.adjoint() * a * &self.unitary
    }
}

/// `ε(z, z1)` with the largest disagreement seen between path pairs and
/// punctures.
#[derive(Debug, Clone)]
pub struct SymmetryTable {
    pub table: Intertwiner,
    pub choice_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatisticsReport {
    pub simple: bool,
    /// `±1`, or `None` when undetermined.
    pub chi: Option<i8>,
    /// Whether the self-intertwiners are the scalars.
    pub irreducible: bool,
    #[serde(serialize_with = "complex_opt")]
    pub lambda: Option<Complex64>,
    pub dimension: Option<u32>,
    pub stabilized: bool,
    /// Shortest disjoint tail used by the left inverse.
    pub sequence_length: usize,
}

fn complex_opt<S: serde::Serializer>(c: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    c.map(|c| [c.re, c.im]).serialize(s)
}

/// `χ z(b)` against both forms of `y^z(∂ b)(z(b))` over the simplices with
/// disjoint faces.
#[derive(Debug, Clone, Serialize)]
pub struct ChiLemma {
    pub chi: i8,
    pub simplices_checked: usize,
    pub residual_d0: f64,
    pub residual_d1: f64,
}

/// Cocycles and arrows for [`SectorContext::verify_category_axioms`].
#[derive(Debug, Clone, Default)]
pub struct Battery {
    pub objects: Vec<Cocycle>,
    pub arrows: Vec<Arrow>,
}

impl Battery {
    /// `ι`, the winding cocycles `w_θ`, and the first winding twisted by a
    /// phase field, with the twist unitaries and two scalar arrows as
    /// arrows.
    pub fn windings(p: &Poset, d: usize, thetas: &[f64]) -> Result<Self, CocycleError> {
        let full = Region::full(p.len());
        let mut objects = vec![Cocycle::trivial(p, &full, d)];
        for &theta in thetas {
            objects.push(Cocycle::winding(p, &full, d, theta)?);
        }
        let scalar = |c: Complex64| Intertwiner::scalar(&full, d, c);
        let mut arrows = vec![Arrow {
            source: 0,
            target: 0,
            t: scalar(Complex64::new(0.0, 0.5)),
        }];
        if thetas.is_empty() {
            return Ok(Battery { objects, arrows });
        }
        let u = |a: Element| crate::linalg::phase(d, 0.37 * (a + 1) as f64);
        let twisted = objects[1].twist(u);
        objects.push(twisted);
        let last = objects.len() - 1;
        let field = Intertwiner::from_entries(d, (0..p.len()).map(|a| (a, u(a))).collect());
        arrows.push(Arrow {
            source: 1,
            target: last,
            t: field.clone(),
        });
        arrows.push(Arrow {
            source: last,
            target: 1,
            t: field.adjoint(),
        });
        arrows.push(Arrow {
            source: 1,
            target: 1,
            t: scalar(Complex64::new(1.0, 2.0)),
        });
        Ok(Battery { objects, arrows })
    }
}

/// An arrow between two battery objects.
#[derive(Debug, Clone)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub t: Intertwiner,
}

/// Multiplies one entry of a computed tensor product by `factor`, to check
/// that the verifier notices.
#[derive(Debug, Clone)]
pub struct TensorFault {
    pub left: usize,
    pub right: usize,
    pub simplex: Simplex1,
    pub factor: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomRow {
    pub axiom: String,
    pub passed: bool,
    pub residual: f64,
    pub cases: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub rows: Vec<AxiomRow>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn row(&self, axiom: &str) -> Option<&AxiomRow> {
        self.rows.iter().find(|r| r.axiom == axiom)
    }
}

/// The data every sector operation needs: the poset, a net passing
/// punctured duality, and a puncture family.
#[derive(Debug, Clone)]
pub struct SectorContext<'a> {
    p: &'a Poset,
    net: &'a LocalNet,
    fam: &'a PunctureFamily,
    tol: Tolerances,
    data: Vec<PunctureData>,
}

impl<'a> SectorContext<'a> {
    pub fn new(
        p: &'a Poset,
        net: &'a LocalNet,
        fam: &'a PunctureFamily,
        tol: Tolerances,
    ) -> Result<Self, SectorError> {
        net.check_size(p)?;
        for x in fam.punctures() {
            if let Some(failure) = relative_duality(net, p, &x.members, &tol) {
                return Err(SectorError::DualityRefused {
                    puncture: x.id.clone(),
                    failure,
                });
            }
        }
        Self::unchecked(p, net, fam, tol)
    }

    /// Skips the duality gate. The formulas still make sense on nets that
    /// fail it, which is how they are exercised on non-scalar nets.
    pub(crate) fn unchecked(
        p: &'a Poset,
        net: &'a LocalNet,
        fam: &'a PunctureFamily,
        tol: Tolerances,
    ) -> Result<Self, SectorError> {
        let mut data = Vec::with_capacity(fam.len());
        for x in fam.punctures() {
            if x.members.is_empty() || components(p, Adjacency::within(&x.members)).len() != 1 {
                return Err(SectorError::PunctureDisconnected(x.id.clone()));
            }
            data.push(PunctureData::new(p, &x.members, &x.sequence));
        }
        Ok(SectorContext {
            p,
            net,
            fam,
            tol,
            data,
        })
    }

    pub fn poset(&self) -> &Poset {
        self.p
    }

    pub fn net(&self) -> &LocalNet {
        self.net
    }

    pub fn family(&self) -> &PunctureFamily {
        self.fam
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The trivial cocycle `ι` on the whole poset.
    pub fn unit(&self) -> Cocycle {
        Cocycle::trivial(self.p, &Region::full(self.p.len()), self.net.d())
    }

    fn puncture_index(&self, id: &str) -> Result<usize, SectorError> {
        self.fam
            .punctures()
            .iter()
            .position(|x| x.id == id)
            .ok_or_else(|| SectorError::UnknownPuncture(id.into()))
    }

    fn id(&self, x: usize) -> String {
        self.fam.punctures()[x].id.clone()
    }

    fn prepare(&self, z: &Cocycle) -> Result<Prepared, SectorError> {
        if z.d() != self.net.d() {
            return Err(SectorError::Dimension(z.d(), self.net.d()));
        }
        let mut along = Vec::with_capacity(self.data.len());
        for (x, (pd, px)) in self.data.iter().zip(self.fam.punctures()).enumerate() {
            if let Some(&e) = px
                .members
                .members()
                .iter()
                .find(|&&e| !z.domain().contains(e))
            {
                return Err(CocycleError::OutsideDomain(e).into());
            }
            let (_, parent) = pd.bfs(pd.basepoint);
            let mut m = BTreeMap::new();
            m.insert(pd.basepoint, identity(z.d()));
            let mut queue = VecDeque::from([pd.basepoint]);
            while let Some(a) = queue.pop_front() {
                for &(y, _) in &pd.nbrs[a] {
                    if let Some(b) = parent[y].filter(|b| b.d1 == a) {
                        let v = z.get(&b)? * &m[&a];
                        m.insert(y, v);
                        queue.push_back(y);
                    }
                }
            }
            // Path-independent iff every simplex agrees with the tree.
            let mut deviation = 0.0f64;
            for b in &pd.simplices {
                let v = m[&b.d0].adjoint() * z.get(b)? * &m[&b.d1];
                deviation = deviation.max(dist(&v, &identity(z.d())));
            }
            if deviation > self.tol.unitary {
                return Err(SectorError::NotPathIndependent {
                    puncture: self.id(x),
                    deviation,
                });
            }
            along.push(m);
        }
        Ok(Prepared {
            z: z.clone(),
            along,
        })
    }

    fn far(&self, x: usize, locus: Element) -> Result<&FarChoice, SectorError> {
        if !self.fam.punctures()[x].members.contains(locus) {
            return Err(SectorError::NotInPuncture {
                element: locus,
                puncture: self.id(x),
            });
        }
        self.data[x].far[locus]
            .as_ref()
            .ok_or_else(|| SectorError::NoFarElement {
                locus,
                puncture: self.id(x),
            })
    }

    fn check_member(&self, x: usize, a: Element) -> Result<(), SectorError> {
        if self.fam.punctures()[x].members.contains(a) {
            Ok(())
        } else {
            Err(SectorError::NotInPuncture {
                element: a,
                puncture: self.id(x),
            })
        }
    }

    fn choice_error(
        &self,
        x: usize,
        anchor: Element,
        locus: Element,
        deviation: f64,
        connected: bool,
    ) -> SectorError {
        let puncture = self.id(x);
        if connected {
            SectorError::IllDefined {
                anchor,
                locus,
                puncture,
                deviation,
            }
        } else {
            SectorError::ComplementDisconnected {
                anchor,
                locus,
                puncture,
                deviation,
            }
        }
    }

    /// `y^z_x(a)(m)` for `m ∈ A(locus)`, or its inverse.
    fn act(
        &self,
        z: &Prepared,
        x: usize,
        a: Element,
        locus: Element,
        m: &CMat,
        inverse: bool,
    ) -> Result<CMat, SectorError> {
        self.check_member(x, a)?;
        let far = self.far(x, locus)?;
        let apply = |f: Element| {
            let v = z.between(x, f, a);
            if inverse {
                v.adjoint() * m * v
            } else {
                &v * m * v.adjoint()
            }
        };
        let out = apply(far.primary);
        if let Some(alt) = far.alternative {
            let deviation = dist(&out, &apply(alt));
            if deviation > self.tol.unitary * op_norm(m).max(1.0) {
                return Err(self.choice_error(x, a, locus, deviation, far.connected));
            }
        }
        Ok(out)
    }

    /// `y^z(a)` on the algebra of `locus`, inside puncture `x`.
    pub fn localized_endomorphism(
        &self,
        z: &Cocycle,
        a: Element,
        x: &str,
        locus: Element,
    ) -> Result<LocalizedMorphism, SectorError> {
        let xi = self.puncture_index(x)?;
        self.check_member(xi, a)?;
        let far = self.far(xi, locus)?.clone();
        let pd = &self.data[xi];
        let transport = PunctureData::path(&pd.bfs(far.primary).1, far.primary, a)
            .expect("punctures are connected");
        let unitary = z.evaluate(&transport)?;
        let mut deviation = 0.0f64;
        let alternative = match far.alternative {
            Some(f) => {
                let path = PunctureData::path(&pd.bfs(f).1, f, a).expect("punctures are connected");
                let w = z.evaluate(&path)?;
                for m in self.net.algebra(locus).basis() {
                    deviation = deviation.max(dist(
                        &(&unitary * m * unitary.adjoint()),
                        &(&w * m * w.adjoint()),
                    ));
                }
                Some(path)
            }
            None => None,
        };
        if deviation > self.tol.unitary {
            return Err(self.choice_error(xi, a, locus, deviation, far.connected));
        }
        Ok(LocalizedMorphism {
            puncture: x.into(),
            anchor: a,
            locus,
            far: far.primary,
            transport,
            alternative,
            far_set_connected: far.connected,
            deviation,
            unitary,
        })
    }

    fn local_tensor(&self, z: &Prepared, z1: &Cocycle, x: usize) -> Result<Cocycle, SectorError> {
        let mut entries = BTreeMap::new();
        for b in &self.data[x].simplices {
            let y = self.act(z, x, b.d1, b.support, z1.get(b)?, false)?;
            entries.insert(*b, z.z.get(b)? * y);
        }
        Ok(Cocycle::from_entries(
            z.z.d(),
            self.fam.punctures()[x].members.clone(),
            entries,
        ))
    }

    fn tensor_prepared(&self, z: &Prepared, z1: &Cocycle) -> Result<Glued, SectorError> {
        if z.z.d() != z1.d() {
            return Err(SectorError::Dimension(z.z.d(), z1.d()));
        }
        let locals = (0..self.fam.len())
            .map(|x| self.local_tensor(z, z1, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(glue(self.fam, &locals, self.p, &self.tol)?)
    }

    /// `(z ⊗ z1)(b) = z(b) y^z(∂1 b)(z1(b))` on puncture `x`.
    pub fn tensor_local(&self, z: &Cocycle, z1: &Cocycle, x: &str) -> Result<Cocycle, SectorError> {
        let xi = self.puncture_index(x)?;
        self.local_tensor(&self.prepare(z)?, z1, xi)
    }

    /// The tensor product glued from all punctures, with the local
    /// path-independence reports.
    pub fn tensor_glued(&self, z: &Cocycle, z1: &Cocycle) -> Result<Glued, SectorError> {
        self.prepare(z1)?;
        self.tensor_prepared(&self.prepare(z)?, z1)
    }

    pub fn tensor(&self, z: &Cocycle, z1: &Cocycle) -> Result<Cocycle, SectorError> {
        Ok(self.tensor_glued(z, z1)?.cocycle)
    }

    /// `(t ⊗ s)_a = t_a y^z(a)(s_a)` where `z` is the source of `t`.
    fn tensor_arrows_prepared(
        &self,
        z: &Prepared,
        t: &Intertwiner,
        s: &Intertwiner,
    ) -> Result<Intertwiner, SectorError> {
        let mut locals = Vec::with_capacity(self.fam.len());
        for (x, px) in self.fam.punctures().iter().enumerate() {
            let mut entries = BTreeMap::new();
            for &a in px.members.members() {
                let (Some(ta), Some(sa)) = (t.get(a), s.get(a)) else {
                    continue;
                };
                entries.insert(a, ta * self.act(z, x, a, a, sa, false)?);
            }
            locals.push(Intertwiner::from_entries(t.d(), entries));
        }
        Ok(glue_intertwiner(self.fam, &locals, self.p, &self.tol)?)
    }

    /// `t ⊗ s` for `t` with source `z`.
    pub fn tensor_arrows(
        &self,
        z: &Cocycle,
        t: &Intertwiner,
        s: &Intertwiner,
    ) -> Result<Intertwiner, SectorError> {
        self.tensor_arrows_prepared(&self.prepare(z)?, t, s)
    }

    /// `y^z_x(a)` applied factor by factor to `w(b_1)^* ⋯ w(b_n)^*` or to
    /// `w(b_n) ⋯ w(b_1)`.
    fn act_on_path(
        &self,
        z: &Prepared,
        x: usize,
        a: Element,
        w: &Cocycle,
        path: &Path,
        adjoint: bool,
    ) -> Result<CMat, SectorError> {
        let mut out = identity(w.d());
        for b in path.simplices() {
            let m = w.get(b)?;
            if adjoint {
                out *= self.act(z, x, a, b.support, &m.adjoint(), false)?;
            } else {
                out = self.act(z, x, a, b.support, m, false)? * out;
            }
        }
        Ok(out)
    }

    /// Path pairs from `a` inside puncture `x` with disjoint endpoints,
    /// shortest total length first.
    fn disjoint_pairs(
        &self,
        x: usize,
        a: Element,
    ) -> (Vec<(Element, Element)>, Vec<Option<Simplex1>>) {
        let pd = &self.data[x];
        let (depth, parent) = pd.bfs(a);
        let members = self.fam.punctures()[x].members.members();
        let mut pairs = Vec::new();
        for &u in members {
            for &v in members {
                if self.p.disjoint(u, v) {
                    if let (Some(du), Some(dv)) = (depth[u], depth[v]) {
                        pairs.push((du + dv, u, v));
                    }
                }
            }
        }
        pairs.sort_unstable();
        (pairs.into_iter().map(|(_, u, v)| (u, v)).collect(), parent)
    }

    fn local_symmetry(
        &self,
        z: &Prepared,
        z1: &Prepared,
        x: usize,
        a: Element,
    ) -> Result<Option<(CMat, f64)>, SectorError> {
        let (pairs, parent) = self.disjoint_pairs(x, a);
        let eval = |u: Element, v: Element| -> Result<CMat, SectorError> {
            let p = PunctureData::path(&parent, a, u).expect("pair endpoints are reachable");
            let q = PunctureData::path(&parent, a, v).expect("pair endpoints are reachable");
            let zp = z.z.evaluate(&p)?;
            let z1q = z1.z.evaluate(&q)?;
            // z1(q)* × z(p)* · z(p) × z1(q)
            let left = z1q.adjoint() * self.act_on_path(z1, x, v, &z.z, &p, true)?;
            let right = zp * self.act_on_path(z, x, a, &z1.z, &q, false)?;
            Ok(left * right)
        };
        let Some(&(u, v)) = pairs.first() else {
            return Ok(None);
        };
        let e = eval(u, v)?;
        let deviation = match pairs.get(1) {
            Some(&(u2, v2)) => dist(&e, &eval(u2, v2)?),
            None => 0.0,
        };
        if deviation > self.tol.unitary {
            return Err(SectorError::SymmetryChoice {
                anchor: a,
                deviation,
            });
        }
        Ok(Some((e, deviation)))
    }

    fn symmetry_prepared(
        &self,
        z: &Prepared,
        z1: &Prepared,
        a: Element,
    ) -> Result<(CMat, f64), SectorError> {
        let mut found: Option<CMat> = None;
        let mut worst = 0.0f64;
        for (x, px) in self.fam.punctures().iter().enumerate() {
            if !px.members.contains(a) {
                continue;
            }
            let Some((e, dev)) = self.local_symmetry(z, z1, x, a)? else {
                continue;
            };
            worst = worst.max(dev);
            match &found {
                None => found = Some(e),
                Some(f) => {
                    let d = dist(f, &e);
                    if d > self.tol.unitary {
                        return Err(SectorError::SymmetryChoice {
                            anchor: a,
                            deviation: d,
                        });
                    }
                    worst = worst.max(d);
                }
            }
        }
        found
            .map(|e| (e, worst))
            .ok_or(SectorError::NoDisjointPair(a))
    }

    /// `ε(z, z1)_a`, agreeing across path pairs and punctures.
    pub fn symmetry(&self, z: &Cocycle, z1: &Cocycle, a: Element) -> Result<CMat, SectorError> {
        Ok(self
            .symmetry_prepared(&self.prepare(z)?, &self.prepare(z1)?, a)?
            .0)
    }

    fn symmetry_table_prepared(
        &self,
        z: &Prepared,
        z1: &Prepared,
    ) -> Result<SymmetryTable, SectorError> {
        let mut entries = BTreeMap::new();
        let mut worst = 0.0f64;
        for a in 0..self.p.len() {
            let (e, dev) = self.symmetry_prepared(z, z1, a)?;
            worst = worst.max(dev);
            entries.insert(a, e);
        }
        Ok(SymmetryTable {
            table: Intertwiner::from_entries(z.z.d(), entries),
            choice_deviation: worst,
        })
    }

    pub fn symmetry_table(&self, z: &Cocycle, z1: &Cocycle) -> Result<SymmetryTable, SectorError> {
        self.symmetry_table_prepared(&self.prepare(z)?, &self.prepare(z1)?)
    }

    /// `φ^z(t)_a = lim Ad z(a → a_n)(t_a)` over the disjoint tail of each
    /// puncture containing `a`, stabilized over the last three terms.
    /// Returns the left inverse and the shortest tail used.
    fn left_inverse_prepared(
        &self,
        z: &Prepared,
        t: &Intertwiner,
    ) -> Result<(Intertwiner, usize), SectorError> {
        let mut entries = BTreeMap::new();
        let mut shortest = usize::MAX;
        for (&a, ta) in t.entries() {
            let mut found: Option<(usize, CMat)> = None;
            for (x, px) in self.fam.punctures().iter().enumerate() {
                if !px.members.contains(a) {
                    continue;
                }
                let tail = px.disjoint_tail(self.p, a);
                if tail.is_empty() {
                    continue;
                }
                shortest = shortest.min(tail.len());
                let values: Vec<CMat> = tail
                    .iter()
                    .map(|&an| {
                        let v = z.between(x, a, an);
                        &v * ta * v.adjoint()
                    })
                    .collect();
                let last = values.last().expect("tail is nonempty");
                let window = &values[values.len() - values.len().min(3)..];
                let oscillation = window.iter().map(|m| dist(m, last)).fold(0.0, f64::max);
                if oscillation > self.tol.unitary * op_norm(ta).max(1.0) {
                    return Err(SectorError::NotStabilized {
                        anchor: a,
                        oscillation,
                    });
                }
                match &found {
                    None => found = Some((x, last.clone())),
                    Some((first, f)) => {
                        let norm = dist(f, last);
                        if norm > self.tol.unitary * op_norm(ta).max(1.0) {
                            let (first, second) = (self.id(*first), self.id(x));
                            return Err(GlueError::ElementConflict {
                                element: a,
                                first,
                                second,
                                norm,
                            }
                            .into());
                        }
                    }
                }
            }
            entries.insert(a, found.ok_or(SectorError::NoDisjointTail(a))?.1);
        }
        Ok((
            Intertwiner::from_entries(t.d(), entries),
            if shortest == usize::MAX { 0 } else { shortest },
        ))
    }

    /// The left inverse `φ^z` on `t ∈ (z ⊗ z1, z ⊗ z2)`.
    pub fn left_inverse(&self, z: &Cocycle, t: &Intertwiner) -> Result<Intertwiner, SectorError> {
        Ok(self.left_inverse_prepared(&self.prepare(z)?, t)?.0)
    }

    fn simple_phase(&self, eps: &SymmetryTable) -> Option<i8> {
        let mut chi = None;
        for m in eps.table.entries().values() {
            let c = as_scalar(m, self.tol.unitary)?;
            let sign = if (c - 1.0).norm() <= self.tol.unitary {
                1
            } else if (c + 1.0).norm() <= self.tol.unitary {
                -1
            } else {
                return None;
            };
            if chi.is_some_and(|s| s != sign) {
                return None;
            }
            chi = Some(sign);
        }
        chi
    }

    pub fn statistics(&self, z: &Cocycle) -> Result<StatisticsReport, SectorError> {
        let zp = self.prepare(z)?;
        let eps = self.symmetry_table_prepared(&zp, &zp)?;
        let chi = self.simple_phase(&eps);
        let irreducible = intertwiner_space(z, z, self.p, self.net, &self.tol)?.len() == 1;
        let mut report = StatisticsReport {
            simple: chi.is_some(),
            chi,
            irreducible,
            lambda: None,
            dimension: None,
            stabilized: false,
            sequence_length: 0,
        };
        if !irreducible {
            return Ok(report);
        }
        let (phi, len) = match self.left_inverse_prepared(&zp, &eps.table) {
            Ok(v) => v,
            Err(SectorError::NotStabilized { .. }) => return Ok(report),
            Err(e) => return Err(e),
        };
        report.stabilized = true;
        report.sequence_length = len;
        let mut lambda: Option<Complex64> = None;
        for m in phi.entries().values() {
            let Some(c) = as_scalar(m, self.tol.unitary) else {
                return Ok(report);
            };
            if lambda.is_some_and(|l| (l - c).norm() > self.tol.unitary) {
                return Ok(report);
            }
            lambda.get_or_insert(c);
        }
        report.lambda = lambda;
        if let Some(l) = lambda.filter(|l| l.norm() > 0.0) {
            let inv = 1.0 / l.norm();
            if (inv - inv.round()).abs() <= 1e-6 && inv.round() >= 1.0 {
                report.dimension = Some(inv.round() as u32);
                if report.chi.is_none() && l.im.abs() <= self.tol.unitary {
                    report.chi = Some(if l.re > 0.0 { 1 } else { -1 });
                }
            }
        }
        Ok(report)
    }

    fn require_simple(&self, z: &Prepared) -> Result<i8, SectorError> {
        let eps = self.symmetry_table_prepared(z, z)?;
        self.simple_phase(&eps).ok_or(SectorError::NotSimple)
    }

    fn conjugate_prepared(&self, z: &Prepared) -> Result<Cocycle, SectorError> {
        let mut locals = Vec::with_capacity(self.fam.len());
        for (x, px) in self.fam.punctures().iter().enumerate() {
            let mut entries = BTreeMap::new();
            for b in &self.data[x].simplices {
                entries.insert(
                    *b,
                    self.act(z, x, b.d0, b.support, &z.z.get(b)?.adjoint(), true)?,
                );
            }
            locals.push(Cocycle::from_entries(z.z.d(), px.members.clone(), entries));
        }
        Ok(glue(self.fam, &locals, self.p, &self.tol)?.cocycle)
    }

    /// `z̄(b) = y^z(∂0 b)^{-1}(z(b)*)` for simple `z`.
    pub fn conjugate(&self, z: &Cocycle) -> Result<Cocycle, SectorError> {
        let zp = self.prepare(z)?;
        self.require_simple(&zp)?;
        self.conjugate_prepared(&zp)
    }

    /// Checks `χ z(b) = y^z(∂0 b)(z(b)) = y^z(∂1 b)(z(b))` on simplices
    /// with disjoint faces.
    pub fn lemma_chi(&self, z: &Cocycle) -> Result<ChiLemma, SectorError> {
        let zp = self.prepare(z)?;
        let chi = self.require_simple(&zp)?;
        let (mut count, mut r0, mut r1) = (0, 0.0f64, 0.0f64);
        for b in z.entries().keys().filter(|b| self.p.disjoint(b.d0, b.d1)) {
            let Some(x) = self.fam.containing(b).next() else {
                continue;
            };
            let m = z.get(b)?;
            let target = m * Complex64::from(chi as f64);
            r0 = r0.max(dist(&target, &self.act(&zp, x, b.d0, b.support, m, false)?));
            r1 = r1.max(dist(&target, &self.act(&zp, x, b.d1, b.support, m, false)?));
            count += 1;
        }
        Ok(ChiLemma {
            chi,
            simplices_checked: count,
            residual_d0: r0,
            residual_d1: r1,
        })
    }

    /// Checks the tensor C*-category axioms, the symmetry and left-inverse
    /// axioms and the conjugate equations on a battery. Identity arrows are
    /// added automatically. Errors from the operations become failed rows.
    pub fn verify_category_axioms(&self, battery: &Battery, faults: &[TensorFault]) -> AxiomReport {
        axioms::verify(self, battery, faults)
    }
}

mod axioms;

#[cfg(test)]
mod tests;
