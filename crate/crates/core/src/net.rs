//! Nets of finite-dimensional matrix algebras over a poset.

use crate::linalg::{
    extend_orthonormal, hs_norm, identity, op_norm, paulis, span_residual, sylvester_operator,
    unvectorize, CMat, Normal, Tolerances,
};
use crate::poset::{Element, Poset, Region};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A unital *-subalgebra of `M_d`, stored as a Hilbert–Schmidt orthonormal
/// basis.
#[derive(Debug, Clone)]
pub struct Algebra {
    d: usize,
    basis: Vec<CMat>,
}

impl Algebra {
    /// All of `M_d`, spanned by matrix units.
    pub fn full(d: usize) -> Self {
        let mut basis = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                let mut m = CMat::zeros(d, d);
                m[(i, j)] = Complex64::from(1.0);
                basis.push(m);
            }
        }
        Algebra { d, basis }
    }

    pub fn scalars(d: usize) -> Self {
        Algebra {
            d,
            basis: vec![identity(d) / Complex64::from((d as f64).sqrt())],
        }
    }

    /// The unital *-algebra generated by `gens`.
    pub fn generated(d: usize, gens: &[CMat], tol: f64) -> Self {
        let mut letters: Vec<CMat> = Vec::with_capacity(2 * gens.len());
        for g in gens {
            letters.push(g.clone());
            letters.push(g.adjoint());
        }
        let mut basis = Vec::new();
        extend_orthonormal(&mut basis, std::iter::once(identity(d)), tol);
        let start = basis.len();
        extend_orthonormal(&mut basis, letters.iter().cloned(), tol);
        // Words in the generators span the algebra; multiply the newest
        // basis elements by letters until nothing new appears.
        let mut frontier = start..basis.len();
        while !frontier.is_empty() && basis.len() < d * d {
            let fresh: Vec<CMat> = frontier
                .clone()
                .flat_map(|i| letters.iter().map(move |l| (i, l)))
                .map(|(i, l)| &basis[i] * l)
                .collect();
            let before = basis.len();
            extend_orthonormal(&mut basis, fresh, tol);
            frontier = before..basis.len();
        }
        Algebra { d, basis }
    }

    /// The algebra generated by several algebras.
    pub fn join<'a>(d: usize, parts: impl IntoIterator<Item = &'a Algebra>, tol: f64) -> Self {
        let mut gens = Vec::new();
        let mut seed = Vec::new();
        for a in parts {
            if a.is_full() {
                return Algebra::full(d);
            }
            for b in &a.basis {
                seed.push(b.clone());
            }
        }
        extend_orthonormal(&mut gens, seed, tol);
        Algebra::generated(d, &gens, tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.d * self.d
    }

    /// Distance of `m` from the algebra, Hilbert–Schmidt.
    pub fn residual(&self, m: &CMat) -> f64 {
        if self.is_full() {
            0.0
        } else {
            span_residual(&self.basis, m)
        }
    }

    pub fn contains(&self, m: &CMat, tol: f64) -> bool {
        self.residual(m) <= tol
    }

    /// Largest residual of a basis element of `self` in `other`.
    pub fn inclusion_residual(&self, other: &Algebra) -> f64 {
        self.basis
            .iter()
            .map(|b| other.residual(b))
            .fold(0.0, f64::max)
    }

    /// Largest commutator norm between basis elements.
    pub fn commutation_defect(&self, other: &Algebra) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.basis {
            for b in &other.basis {
                worst = worst.max(op_norm(&(a * b - b * a)));
            }
        }
        worst
    }

    /// Algebras equal within `tol`.
    pub fn same_as(&self, other: &Algebra, tol: f64) -> bool {
        self.dim() == other.dim() && self.inclusion_residual(other) <= tol
    }
}

/// The commutant `{X | XM = MX for all M}` of a set of matrices.
pub fn commutant(d: usize, mats: &[CMat], tol: f64) -> Algebra {
    let mut normal = Normal::new(d * d);
    for m in mats {
        // X ↦ mX − Xm
        normal.add(&sylvester_operator(m, m));
    }
    let basis = normal
        .kernel(tol)
        .iter()
        .map(|v| unvectorize(v, d))
        .collect();
    Algebra { d, basis }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetMode {
    /// Every algebra is all of `M_d`.
    Full,
    #[default]
    Subalgebra,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error("generator {index} of element {element} is {rows}×{cols}, expected {d}×{d}")]
    Dimension {
        element: Element,
        index: usize,
        rows: usize,
        cols: usize,
        d: usize,
    },
    #[error("net has {got} algebras, poset has {n} elements")]
    Size { got: usize, n: usize },
}

/// An assignment of a unital *-subalgebra of `M_d` to every element.
#[derive(Debug, Clone)]
pub struct LocalNet {
    d: usize,
    mode: NetMode,
    generators: Vec<Vec<CMat>>,
    algebras: Vec<Algebra>,
}

impl LocalNet {
    /// `M_d` everywhere.
    pub fn full(n: usize, d: usize) -> Self {
        LocalNet {
            d,
            mode: NetMode::Full,
            generators: vec![Vec::new(); n],
            algebras: vec![Algebra::full(d); n],
        }
    }

    /// The net of algebras generated by the given matrices; closure under
    /// products and adjoints is computed here.
    pub fn from_generators(
        d: usize,
        mode: NetMode,
        generators: Vec<Vec<CMat>>,
        tol: &Tolerances,
    ) -> Result<Self, NetError> {
        for (element, gens) in generators.iter().enumerate() {
            for (index, g) in gens.iter().enumerate() {
                if g.nrows() != d || g.ncols() != d {
                    return Err(NetError::Dimension {
                        element,
                        index,
                        rows: g.nrows(),
                        cols: g.ncols(),
                        d,
                    });
                }
            }
        }
        let algebras = match mode {
            NetMode::Full => vec![Algebra::full(d); generators.len()],
            NetMode::Subalgebra => generators
                .iter()
                .map(|g| Algebra::generated(d, g, tol.algebra))
                .collect(),
        };
        Ok(LocalNet {
            d,
            mode,
            generators,
            algebras,
        })
    }

    /// Qubits at `num_sites` sites; element `e` gets the operators acting on
    /// the sites in `sites[e]`, generated by Pauli X and Z at each.
    pub fn qubit_sites(num_sites: usize, sites: &[Vec<usize>], tol: &Tolerances) -> Self {
        let d = 1usize << num_sites;
        let [x, _, z] = paulis();
        let at = |site: usize, m: &CMat| {
            let factors: Vec<CMat> = (0..num_sites)
                .map(|k| if k == site { m.clone() } else { identity(2) })
                .collect();
            crate::linalg::kron_all(&factors)
        };
        let generators: Vec<Vec<CMat>> = sites
            .iter()
            .map(|ss| ss.iter().flat_map(|&s| [at(s, &x), at(s, &z)]).collect())
            .collect();
        LocalNet::from_generators(d, NetMode::Subalgebra, generators, tol)
            .expect("qubit generators have the right size")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> NetMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.algebras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebras.is_empty()
    }

    pub fn algebra(&self, e: Element) -> &Algebra {
        &self.algebras[e]
    }

    pub fn generators(&self, e: Element) -> &[CMat] {
        &self.generators[e]
    }

    /// The algebra generated by the algebras of the elements of `region`.
    pub fn region_algebra(&self, region: &[Element], tol: f64) -> Algebra {
        Algebra::join(self.d, region.iter().map(|&e| &self.algebras[e]), tol)
    }

    pub fn check_size(&self, p: &Poset) -> Result<(), NetError> {
        if self.len() != p.len() {
            Err(NetError::Size {
                got: self.len(),
                n: p.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// A failed net axiom with its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum NetFailure {
    /// `smaller <= larger` but the algebra of `smaller` sticks out.
    Isotony {
        smaller: Element,
        larger: Element,
        residual: f64,
    },
    /// `a ⊥ b` but their algebras do not commute.
    Causality { a: Element, b: Element, norm: f64 },
    /// The joint commutant is larger than the scalars.
    Irreducibility { commutant_dim: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetReport {
    /// First failure of each axiom, in the order isotony, causality,
    /// irreducibility; pairs in lexicographic order.
    pub failures: Vec<NetFailure>,
    pub isotony_failures: usize,
    pub causality_failures: usize,
    pub commutant_dim: usize,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks isotony, causality and irreducibility.
pub fn validate_net(net: &LocalNet, p: &Poset, tol: &Tolerances) -> Result<NetReport, NetError> {
    net.check_size(p)?;
    let mut failures = Vec::new();
    let mut isotony_failures = 0;
    for (a, b) in p.order_pairs() {
        if a == b {
            continue;
        }
        let r = net.algebra(a).inclusion_residual(net.algebra(b));
        if r > tol.algebra {
            if isotony_failures == 0 {
                failures.push(NetFailure::Isotony {
                    smaller: a,
                    larger: b,
                    residual: r,
                });
            }
            isotony_failures += 1;
        }
    }
    let mut causality_failures = 0;
    for (a, b) in p.disjoint_pairs() {
        if a > b {
            continue;
        }
        let norm = net.algebra(a).commutation_defect(net.algebra(b));
        if norm > tol.algebra {
            if causality_failures == 0 {
                failures.push(NetFailure::Causality { a, b, norm });
            }
            causality_failures += 1;
        }
    }
    let commutant_dim = if net.algebras.iter().any(Algebra::is_full) {
        1
    } else {
        let mats: Vec<CMat> = net
            .algebras
            .iter()
            .flat_map(|a| a.basis().iter().cloned())
            .collect();
        commutant(net.d, &mats, tol.algebra).dim()
    };
    if commutant_dim != 1 {
        failures.push(NetFailure::Irreducibility { commutant_dim });
    }
    Ok(NetReport {
        failures,
        isotony_failures,
        causality_failures,
        commutant_dim,
    })
}

/// A failure of (relative) Haag duality at an element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityFailure {
    pub element: Element,
    /// Dimension of the commutant of the algebras disjoint from `element`.
    pub commutant_dim: usize,
    pub algebra_dim: usize,
}

/// Haag duality relative to `region`: for every `O` in the region, the
/// commutant of the algebras of the elements of the region disjoint from
/// `O` is the algebra of `O`. The whole poset gives Haag duality, a
/// puncture gives punctured duality. Returns the first failure.
pub fn relative_duality(
    net: &LocalNet,
    p: &Poset,
    region: &Region,
    tol: &Tolerances,
) -> Option<DualityFailure> {
    for &o in region.members() {
        let far: Vec<CMat> = region
            .members()
            .iter()
            .filter(|&&e| p.disjoint(e, o))
            .flat_map(|&e| net.algebra(e).basis().iter().cloned())
            .collect();
        let comm = commutant(net.d, &far, tol.algebra);
        if !comm.same_as(net.algebra(o), tol.algebra) {
            return Some(DualityFailure {
                element: o,
                commutant_dim: comm.dim(),
                algebra_dim: net.algebra(o).dim(),
            });
        }
    }
    None
}

/// Hilbert–Schmidt norm of the component of `m` outside the algebra,
/// relative to the norm of `m`.
pub fn relative_residual(a: &Algebra, m: &CMat) -> f64 {
    let n = hs_norm(m);
    if n == 0.0 {
        0.0
    } else {
        a.residual(m) / n
    }
}
