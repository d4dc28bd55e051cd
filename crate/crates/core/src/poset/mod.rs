//! Finite posets with a causal disjointness relation, their low-dimensional
//! singular simplices, paths, sieves and refinements.

mod path;
mod region;
mod search;
mod simplex;

pub use path::{compose_paths, reverse_path, Path, PathError};
pub use region::{Region, Sieve, SieveError};
pub use search::{
    components, find_path, is_pathwise_connected, is_refinement, Adjacency, RefinementCheck,
    RefinementError,
};
pub use simplex::{Simplex1, Simplex2};

use std::fmt;

/// Index of a poset element.
pub type Element = usize;

/// Errors raised while building a poset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("element {index} out of range for a poset with {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("matrix has {rows} rows, expected {n}")]
    Shape { rows: usize, n: usize },
    #[error("order relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(Element, Element, Element),
    #[error("label list has {got} entries, expected {n}")]
    Labels { got: usize, n: usize },
}

/// A poset axiom that fails, with the elements exhibiting the failure.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Reflexivity {
        element: Element,
    },
    Antisymmetry {
        a: Element,
        b: Element,
    },
    Transitivity {
        a: Element,
        b: Element,
        c: Element,
    },
    DisjointSymmetry {
        a: Element,
        b: Element,
    },
    /// Property (i): the element is disjoint from nothing.
    NoDisjointPartner {
        element: Element,
    },
    /// Property (ii): `a <= b`, `b ⊥ c`, but `a` is not disjoint from `c`.
    DisjointHeredity {
        a: Element,
        b: Element,
        c: Element,
    },
    DisjointComparable {
        a: Element,
        b: Element,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Reflexivity { element } => write!(f, "reflexivity fails at {element}"),
            Violation::Antisymmetry { a, b } => write!(f, "antisymmetry fails for ({a}, {b})"),
            Violation::Transitivity { a, b, c } => {
                write!(f, "transitivity fails for {a} <= {b} <= {c}")
            }
            Violation::DisjointSymmetry { a, b } => {
                write!(f, "disjointness not symmetric for ({a}, {b})")
            }
            Violation::NoDisjointPartner { element } => {
                write!(f, "element {element} is disjoint from no element")
            }
            Violation::DisjointHeredity { a, b, c } => {
                write!(
                    f,
                    "{a} <= {b} and {b} ⊥ {c} but {a} is not disjoint from {c}"
                )
            }
            Violation::DisjointComparable { a, b } => {
                write!(f, "{a} ⊥ {b} although they are comparable")
            }
        }
    }
}

/// Outcome of [`Poset::validate`]: the first violated axiom, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// A finite poset stored as dense boolean matrices.
///
/// The order matrix is kept reflexive by every constructor. Order axioms and
/// the disjointness axioms are not enforced on construction; use
/// [`Poset::validate`] (all axioms) or [`Poset::validate_order`] (order
/// axioms only, which is all the homotopy machinery needs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
    disjoint: Vec<bool>,
    labels: Option<Vec<String>>,
}

impl Poset {
    /// Builds a poset from relation pairs. The order is closed reflexively,
    /// the disjointness pairs are symmetrized.
    pub fn from_relations(
        n: usize,
        leq_pairs: &[(Element, Element)],
        disjoint_pairs: &[(Element, Element)],
    ) -> Result<Self, PosetError> {
        let mut leq = vec![false; n * n];
        let mut disjoint = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(i, j) in leq_pairs {
            check_index(i, n)?;
            check_index(j, n)?;
            leq[i * n + j] = true;
        }
        for &(i, j) in disjoint_pairs {
            check_index(i, n)?;
            check_index(j, n)?;
            disjoint[i * n + j] = true;
            disjoint[j * n + i] = true;
        }
        Ok(Poset {
            n,
            leq,
            disjoint,
            labels: None,
        })
    }

    /// Builds a poset from square matrices, taken verbatim.
    pub fn from_matrices(leq: &[Vec<bool>], disjoint: &[Vec<bool>]) -> Result<Self, PosetError> {
        let n = leq.len();
        if disjoint.len() != n {
            return Err(PosetError::Shape {
                rows: disjoint.len(),
                n,
            });
        }
        let mut l = Vec::with_capacity(n * n);
        let mut d = Vec::with_capacity(n * n);
        for (row_l, row_d) in leq.iter().zip(disjoint) {
            if row_l.len() != n {
                return Err(PosetError::Shape {
                    rows: row_l.len(),
                    n,
                });
            }
            if row_d.len() != n {
                return Err(PosetError::Shape {
                    rows: row_d.len(),
                    n,
                });
            }
            l.extend_from_slice(row_l);
            d.extend_from_slice(row_d);
        }
        Ok(Poset {
            n,
            leq: l,
            disjoint: d,
            labels: None,
        })
    }

    /// Builds a poset from an order predicate and a disjointness predicate.
    pub fn from_fn(
        n: usize,
        leq: impl Fn(Element, Element) -> bool,
        disjoint: impl Fn(Element, Element) -> bool,
    ) -> Self {
        let mut l = vec![false; n * n];
        let mut d = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                l[i * n + j] = i == j || leq(i, j);
                d[i * n + j] = disjoint(i, j);
            }
        }
        Poset {
            n,
            leq: l,
            disjoint: d,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, PosetError> {
        if labels.len() != self.n {
            return Err(PosetError::Labels {
                got: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Closes the order relation transitively (Warshall).
    pub fn transitive_closure(mut self) -> Self {
        let n = self.n;
        for k in 0..n {
            for i in 0..n {
                if self.leq[i * n + k] {
                    for j in 0..n {
                        if self.leq[k * n + j] {
                            self.leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        self
    }

    /// Returns the first transitivity failure, if any.
    pub fn check_transitive(&self) -> Result<(), PosetError> {
        match self.first_transitivity_failure() {
            Some((a, b, c)) => Err(PosetError::NotTransitive(a, b, c)),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, i: Element, j: Element) -> bool {
        self.leq[i * self.n + j]
    }

    #[inline]
    pub fn lt(&self, i: Element, j: Element) -> bool {
        i != j && self.leq(i, j)
    }

    #[inline]
    pub fn disjoint(&self, i: Element, j: Element) -> bool {
        self.disjoint[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Elements `j` with `i <= j`, ascending.
    pub fn up_set(&self, i: Element) -> Vec<Element> {
        (0..self.n).filter(|&j| self.leq(i, j)).collect()
    }

    /// Elements `j` with `j <= i`, ascending.
    pub fn down_set(&self, i: Element) -> Vec<Element> {
        (0..self.n).filter(|&j| self.leq(j, i)).collect()
    }

    /// Common upper bounds of `i` and `j`, ascending.
    pub fn upper_bounds(&self, i: Element, j: Element) -> Vec<Element> {
        (0..self.n)
            .filter(|&s| self.leq(i, s) && self.leq(j, s))
            .collect()
    }

    /// Non-reflexive order pairs, row-major.
    pub fn order_pairs(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Disjoint pairs with `i < j`, row-major.
    pub fn disjoint_pairs(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.disjoint(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Checks the order axioms only.
    pub fn validate_order(&self) -> ValidationReport {
        ValidationReport {
            violation: self.order_violation(),
        }
    }

    /// Checks every axiom in a fixed order and reports the first failure:
    /// reflexivity, antisymmetry, transitivity, symmetry of ⊥, property (i),
    /// property (ii), then incomparability of disjoint pairs.
    pub fn validate(&self) -> ValidationReport {
        if let Some(v) = self.order_violation() {
            return ValidationReport { violation: Some(v) };
        }
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if self.disjoint(i, j) != self.disjoint(j, i) {
                    return ValidationReport {
                        violation: Some(Violation::DisjointSymmetry { a: i, b: j }),
                    };
                }
            }
        }
        for i in 0..n {
            if !(0..n).any(|j| self.disjoint(i, j)) {
                return ValidationReport {
                    violation: Some(Violation::NoDisjointPartner { element: i }),
                };
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.disjoint(j, k) && !self.disjoint(i, k) {
                        return ValidationReport {
                            violation: Some(Violation::DisjointHeredity { a: i, b: j, c: k }),
                        };
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.disjoint(i, j) && (self.leq(i, j) || self.leq(j, i)) {
                    return ValidationReport {
                        violation: Some(Violation::DisjointComparable { a: i, b: j }),
                    };
                }
            }
        }
        ValidationReport { violation: None }
    }

    fn order_violation(&self) -> Option<Violation> {
        let n = self.n;
        if let Some(i) = (0..n).find(|&i| !self.leq(i, i)) {
            return Some(Violation::Reflexivity { element: i });
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.leq(i, j) && self.leq(j, i) {
                    return Some(Violation::Antisymmetry { a: i, b: j });
                }
            }
        }
        self.first_transitivity_failure()
            .map(|(a, b, c)| Violation::Transitivity { a, b, c })
    }

    fn first_transitivity_failure(&self) -> Option<(Element, Element, Element)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// True iff every pair of elements has a common upper bound.
    pub fn is_directed(&self) -> bool {
        self.undirected_pair().is_none()
    }

    /// A pair without a common upper bound, scanning pairs in order.
    pub fn undirected_pair(&self) -> Option<(Element, Element)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if !(0..self.n).any(|s| self.leq(i, s) && self.leq(j, s)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The greatest element, if there is one.
    pub fn top(&self) -> Option<Element> {
        (0..self.n).find(|&t| (0..self.n).all(|i| self.leq(i, t)))
    }

    /// The sieve `{O | O ⊥ target}`.
    pub fn causal_complement(&self, target: Element) -> Sieve {
        let members = (0..self.n).filter(|&o| self.disjoint(o, target));
        Sieve::new_unchecked(Region::from_members(self.n, members))
    }

    pub fn is_simplex1(&self, b: &Simplex1) -> bool {
        b.d1 < self.n
            && b.d0 < self.n
            && b.support < self.n
            && self.leq(b.d1, b.support)
            && self.leq(b.d0, b.support)
    }

    pub fn is_simplex2(&self, c: &Simplex2) -> bool {
        c.vertices_match()
            && c.support < self.n
            && [c.f0, c.f1, c.f2]
                .iter()
                .all(|f| self.is_simplex1(f) && self.leq(f.support, c.support))
    }

    /// All 1-simplices, ordered lexicographically on `(d1, d0, support)`.
    pub fn simplices1(&self) -> Vec<Simplex1> {
        self.simplices1_in(&Region::full(self.n))
    }

    /// 1-simplices with faces and support in `region`, lexicographic order.
    pub fn simplices1_in(&self, region: &Region) -> Vec<Simplex1> {
        let members = region.members();
        let mut out = Vec::new();
        for &d1 in members {
            let ups: Vec<Element> = members
                .iter()
                .copied()
                .filter(|&s| self.leq(d1, s))
                .collect();
            for &d0 in members {
                for &s in &ups {
                    if self.leq(d0, s) {
                        out.push(Simplex1::new(d1, d0, s));
                    }
                }
            }
        }
        out
    }

    /// Number of 2-simplices, computed without materializing them.
    pub fn count_simplices2(&self) -> u128 {
        // A 2-simplex is a vertex triple plus three face supports, all below
        // a common support.
        let mut total: u128 = 0;
        for s in 0..self.n {
            let down = self.down_set(s);
            let mut faces: u128 = 0;
            // Number of (v0, v1, v2, s0, s1, s2) below s.
            for &v0 in &down {
                for &v1 in &down {
                    for &v2 in &down {
                        let n2 = down
                            .iter()
                            .filter(|&&x| self.leq(v0, x) && self.leq(v1, x))
                            .count();
                        let n0 = down
                            .iter()
                            .filter(|&&x| self.leq(v1, x) && self.leq(v2, x))
                            .count();
                        let n1 = down
                            .iter()
                            .filter(|&&x| self.leq(v0, x) && self.leq(v2, x))
                            .count();
                        faces += (n0 * n1 * n2) as u128;
                    }
                }
            }
            total += faces;
        }
        total
    }

    /// All 2-simplices ordered lexicographically on `(f0, f1, f2, support)`.
    /// The count grows like the sixth power of down-set sizes; meant for
    /// small posets.
    pub fn simplices2(&self) -> Vec<Simplex2> {
        let mut out = Vec::new();
        for s in 0..self.n {
            self.for_each_simplex2_with_support(s, |c| out.push(c));
        }
        out.sort();
        out
    }

    /// Visits every 2-simplex whose support is exactly `s`.
    pub fn for_each_simplex2_with_support(&self, s: Element, mut visit: impl FnMut(Simplex2)) {
        let down = self.down_set(s);
        for &v0 in &down {
            for &v1 in &down {
                for &v2 in &down {
                    for &s0 in &down {
                        if !(self.leq(v1, s0) && self.leq(v2, s0)) {
                            continue;
                        }
                        for &s1 in &down {
                            if !(self.leq(v0, s1) && self.leq(v2, s1)) {
                                continue;
                            }
                            for &s2 in &down {
                                if !(self.leq(v0, s2) && self.leq(v1, s2)) {
                                    continue;
                                }
                                visit(Simplex2::new(
                                    Simplex1::new(v1, v2, s0),
                                    Simplex1::new(v0, v2, s1),
                                    Simplex1::new(v0, v1, s2),
                                    s,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    /// Cartesian product with componentwise order; a pair is disjoint from
    /// another iff both components are disjoint.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.n;
        Poset::from_fn(
            self.n * m,
            |a, b| self.leq(a / m, b / m) && other.leq(a % m, b % m),
            |a, b| self.disjoint(a / m, b / m) && other.disjoint(a % m, b % m),
        )
    }

    /// The subposet induced on `region`, with elements renumbered in
    /// ascending order of their original index.
    pub fn induced(&self, region: &Region) -> Poset {
        let members = region.members();
        let mut p = Poset::from_fn(
            members.len(),
            |a, b| self.leq(members[a], members[b]),
            |a, b| self.disjoint(members[a], members[b]),
        );
        if let Some(labels) = &self.labels {
            p.labels = Some(members.iter().map(|&m| labels[m].clone()).collect());
        }
        p
    }
}

fn check_index(index: usize, n: usize) -> Result<(), PosetError> {
    if index >= n {
        Err(PosetError::OutOfRange { index, n })
    } else {
        Ok(())
    }
}
