//! Elementary deformations of paths and witness construction.

use crate::poset::{Element, Path, Poset, Simplex1, Simplex2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformationKind {
    /// Replace `path[j] = ∂1c` by `∂2c` followed by `∂0c`.
    Ampliation,
    /// Replace `path[j] = ∂2c`, `path[j+1] = ∂0c` by `∂1c`.
    Contraction,
}

/// An elementary ampliation or contraction at a position of a path, with
/// the 2-simplex that licenses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Deformation {
    pub kind: DeformationKind,
    pub position: usize,
    pub witness: Simplex2,
}

impl Deformation {
    pub fn ampliation(position: usize, witness: Simplex2) -> Self {
        Deformation {
            kind: DeformationKind::Ampliation,
            position,
            witness,
        }
    }

    pub fn contraction(position: usize, witness: Simplex2) -> Self {
        Deformation {
            kind: DeformationKind::Contraction,
            position,
            witness,
        }
    }

    /// The move undoing this one.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            DeformationKind::Ampliation => DeformationKind::Contraction,
            DeformationKind::Contraction => DeformationKind::Ampliation,
        };
        Deformation { kind, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformationError {
    #[error("witness {0} is not a 2-simplex of the poset")]
    NotASimplex(Simplex2),
    #[error("position {position} out of range for a path of length {len}")]
    OutOfRange { position: usize, len: usize },
    #[error("witness face {expected} does not match path simplex {found} at position {position}")]
    Mismatch {
        position: usize,
        expected: Simplex1,
        found: Simplex1,
    },
}

/// Applies one deformation. The result has the same endpoints.
pub fn apply_deformation(
    p: &Poset,
    path: &Path,
    d: &Deformation,
) -> Result<Path, DeformationError> {
    let mut v = path.simplices().to_vec();
    apply_in_place(p, &mut v, d)?;
    Ok(Path::new(v).expect("deformations preserve chaining"))
}

pub(crate) fn apply_in_place(
    p: &Poset,
    v: &mut Vec<Simplex1>,
    d: &Deformation,
) -> Result<(), DeformationError> {
    let c = d.witness;
    if !p.is_simplex2(&c) {
        return Err(DeformationError::NotASimplex(c));
    }
    let j = d.position;
    match d.kind {
        DeformationKind::Ampliation => {
            let found = *v.get(j).ok_or(DeformationError::OutOfRange {
                position: j,
                len: v.len(),
            })?;
            if found != c.f1 {
                return Err(DeformationError::Mismatch {
                    position: j,
                    expected: c.f1,
                    found,
                });
            }
            v[j] = c.f2;
            v.insert(j + 1, c.f0);
        }
        DeformationKind::Contraction => {
            if j + 1 >= v.len() {
                return Err(DeformationError::OutOfRange {
                    position: j,
                    len: v.len(),
                });
            }
            if v[j] != c.f2 {
                return Err(DeformationError::Mismatch {
                    position: j,
                    expected: c.f2,
                    found: v[j],
                });
            }
            if v[j + 1] != c.f0 {
                return Err(DeformationError::Mismatch {
                    position: j + 1,
                    expected: c.f0,
                    found: v[j + 1],
                });
            }
            v[j] = c.f1;
            v.remove(j + 1);
        }
    }
    Ok(())
}

/// Replays a sequence of deformations.
pub fn replay(p: &Poset, path: &Path, moves: &[Deformation]) -> Result<Path, DeformationError> {
    let mut v = path.simplices().to_vec();
    for d in moves {
        apply_in_place(p, &mut v, d)?;
    }
    Ok(Path::new(v).expect("deformations preserve chaining"))
}

/// Rewrites a path by elementary moves, recording each one.
pub(crate) struct Rewriter<'a> {
    poset: &'a Poset,
    pub(crate) path: Vec<Simplex1>,
    pub(crate) moves: Vec<Deformation>,
}

impl<'a> Rewriter<'a> {
    pub(crate) fn new(poset: &'a Poset, path: &Path) -> Self {
        Rewriter {
            poset,
            path: path.simplices().to_vec(),
            moves: Vec::new(),
        }
    }

    fn apply(&mut self, d: Deformation) {
        apply_in_place(self.poset, &mut self.path, &d).expect("rewriter only builds valid moves");
        self.moves.push(d);
    }

    /// Contracts `path[j], path[j+1]` into one simplex with support `s`.
    fn merge(&mut self, j: usize, s: Element) {
        let (b, b1) = (self.path[j], self.path[j + 1]);
        let c = Simplex2::new(b1, Simplex1::new(b.d1, b1.d0, s), b, s);
        self.apply(Deformation::contraction(j, c));
    }

    /// Turns a loop `(x, x, s)` into `b(x)` through `(x, s, s), (s, x, s)`.
    fn collapse_loop(&mut self, j: usize) {
        let b = self.path[j];
        let (x, s) = (b.d1, b.support);
        let up = Simplex1::new(x, s, s);
        let down = Simplex1::new(s, x, s);
        self.apply(Deformation::ampliation(j, Simplex2::new(down, b, up, s)));
        self.apply(Deformation::contraction(
            j,
            Simplex2::new(down, Simplex1::degenerate(x), up, s),
        ));
    }

    /// Removes a degenerate simplex at `j` from a path of length at least 2.
    fn drop_degenerate(&mut self, j: usize) {
        let a = self.path[j].d1;
        if j + 1 < self.path.len() {
            let next = self.path[j + 1];
            let c = Simplex2::new(next, next, Simplex1::degenerate(a), next.support);
            self.apply(Deformation::contraction(j, c));
        } else {
            let prev = self.path[j - 1];
            let c = Simplex2::new(Simplex1::degenerate(a), prev, prev, prev.support);
            self.apply(Deformation::contraction(j - 1, c));
        }
    }

    /// Appends `b(end)` after the last simplex.
    fn append_degenerate(&mut self) {
        let j = self.path.len() - 1;
        let b = self.path[j];
        let c = Simplex2::new(Simplex1::degenerate(b.d0), b, b, b.support);
        self.apply(Deformation::ampliation(j, c));
    }

    /// Replaces the degenerate simplex `b(q.end())` at `j` by `q̄` followed
    /// by `q`.
    fn expand_degenerate(&mut self, j: usize, q: &[Simplex1]) {
        let k = q.len();
        let last = q[k - 1];
        let (u, a) = (last.d1, last.d0);
        debug_assert_eq!(self.path[j], Simplex1::degenerate(a));
        self.apply(Deformation::ampliation(
            j,
            Simplex2::new(last, Simplex1::degenerate(a), last.reverse(), last.support),
        ));
        if k > 1 {
            // Insert b(u) between q̄_k and q_k, then expand it recursively.
            self.apply(Deformation::ampliation(
                j + 1,
                Simplex2::new(last, last, Simplex1::degenerate(u), last.support),
            ));
            self.expand_degenerate(j + 1, &q[..k - 1]);
        }
    }

    /// The minimal common upper bound of two elements with the smallest
    /// index, if any.
    fn join(&self, a: Element, b: Element) -> Option<Element> {
        let ub = self.poset.upper_bounds(a, b);
        ub.iter()
            .copied()
            .find(|&s| !ub.iter().any(|&t| self.poset.lt(t, s)))
    }

    /// Greedy normalization: merge neighbours whose supports have a common
    /// upper bound, collapse loops, drop degenerate simplices.
    pub(crate) fn normalize(&mut self) {
        loop {
            if let Some(j) = (0..self.path.len().saturating_sub(1)).find(|&j| {
                self.join(self.path[j].support, self.path[j + 1].support)
                    .is_some()
            }) {
                let s = self
                    .join(self.path[j].support, self.path[j + 1].support)
                    .expect("checked");
                self.merge(j, s);
                continue;
            }
            if let Some(j) = self.path.iter().position(|b| b.is_loop()) {
                self.collapse_loop(j);
                continue;
            }
            if self.path.len() > 1 {
                if let Some(j) = self.path.iter().position(|b| b.is_degenerate()) {
                    self.drop_degenerate(j);
                    continue;
                }
            }
            break;
        }
    }
}

/// Normalizes a path greedily; returns the normal form and the moves.
pub fn normalize(p: &Poset, path: &Path) -> (Path, Vec<Deformation>) {
    let mut rw = Rewriter::new(p, path);
    rw.normalize();
    (
        Path::new(rw.path).expect("normalization preserves chaining"),
        rw.moves,
    )
}

/// Witness for `p1 ~ p2` built from moves collapsing the loop `p1` then
/// `p̄2` to `b(start)`. Returns `None` when greedy normalization does not
/// collapse that loop.
pub(crate) fn loop_witness(p: &Poset, p1: &Path, p2: &Path) -> Option<Vec<Deformation>> {
    let lp = p1.then(&p2.reverse()).ok()?;
    let (nf, collapse) = normalize(p, &lp);
    if nf.simplices() != [Simplex1::degenerate(p1.start())] {
        return None;
    }
    let mut rw = Rewriter::new(p, p1);
    rw.append_degenerate();
    let j = rw.path.len() - 1;
    rw.expand_degenerate(j, p2.simplices());
    // Now p1, p̄2, p2: collapse the prefix with the recorded moves.
    for d in collapse {
        rw.apply(d);
    }
    rw.drop_degenerate(0);
    debug_assert_eq!(rw.path, p2.simplices());
    Some(rw.moves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::from_fn(n, |i, j| i <= j, |_, _| false)
    }

    #[test]
    fn contraction_of_back_and_forth_leaves_a_loop() {
        let p = chain(2);
        let b = Simplex1::new(0, 1, 1);
        let path = Path::new(vec![b, b.reverse()]).unwrap();
        // ∂1c = b(∂1 b): vertices (0, 1, 0).
        let c = Simplex2::new(b.reverse(), Simplex1::new(0, 0, 1), b, 1);
        let out = apply_deformation(&p, &path, &Deformation::contraction(0, c)).unwrap();
        assert_eq!(out.simplices(), &[Simplex1::new(0, 0, 1)]);
    }

    #[test]
    fn ampliation_then_contraction_restores() {
        let p = chain(3);
        let path = Path::single(Simplex1::new(0, 2, 2));
        let c = Simplex2::flat([0, 1, 2], 2);
        let amp = Deformation::ampliation(0, c);
        let mid = apply_deformation(&p, &path, &amp).unwrap();
        assert_eq!(mid.len(), 2);
        assert_eq!(apply_deformation(&p, &mid, &amp.inverse()).unwrap(), path);
    }

    #[test]
    fn mismatched_witness_is_an_error() {
        let p = chain(3);
        let path = Path::single(Simplex1::new(0, 2, 2));
        let c = Simplex2::flat([0, 1, 1], 2);
        assert!(matches!(
            apply_deformation(&p, &path, &Deformation::ampliation(0, c)),
            Err(DeformationError::Mismatch { .. })
        ));
        let bogus = Simplex2::flat([0, 1, 2], 1);
        assert!(matches!(
            apply_deformation(&p, &path, &Deformation::ampliation(0, bogus)),
            Err(DeformationError::NotASimplex(_))
        ));
    }

    #[test]
    fn normalization_collapses_loops_in_a_chain() {
        let p = chain(3);
        let path = Path::new(vec![
            Simplex1::new(0, 1, 1),
            Simplex1::new(1, 2, 2),
            Simplex1::new(2, 0, 2),
        ])
        .unwrap();
        let (nf, moves) = normalize(&p, &path);
        assert_eq!(nf, Path::degenerate(0));
        assert_eq!(replay(&p, &path, &moves).unwrap(), nf);
    }

    #[test]
    fn loop_witness_replays() {
        let p = chain(3);
        let p1 = Path::new(vec![Simplex1::new(0, 1, 1), Simplex1::new(1, 2, 2)]).unwrap();
        let p2 = Path::new(vec![Simplex1::new(0, 2, 2)]).unwrap();
        let w = loop_witness(&p, &p1, &p2).unwrap();
        assert_eq!(replay(&p, &p1, &w).unwrap(), p2);
    }
}
