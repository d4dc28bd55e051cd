use super::{Element, Simplex1};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("a path needs at least one simplex")]
    Empty,
    #[error("simplices {index} and {next} do not chain: {left} ends at {end}, {right} starts at {start}", next = index + 1)]
    Broken {
        index: usize,
        left: Simplex1,
        right: Simplex1,
        end: Element,
        start: Element,
    },
    #[error("cannot compose: first path ends at {end}, second starts at {start}")]
    EndpointMismatch { end: Element, start: Element },
}

/// A nonempty composable sequence of 1-simplices.
///
/// Simplices are stored in traversal order: `simplices()[0]` is traversed
/// first and starts at [`Path::start`]; the last one ends at [`Path::end`].
/// Evaluating a cocycle multiplies from the right, so the first simplex
/// contributes the rightmost factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Path(Vec<Simplex1>);

impl Path {
    pub fn new(simplices: Vec<Simplex1>) -> Result<Self, PathError> {
        if simplices.is_empty() {
            return Err(PathError::Empty);
        }
        for (index, w) in simplices.windows(2).enumerate() {
            if w[0].d0 != w[1].d1 {
                return Err(PathError::Broken {
                    index,
                    left: w[0],
                    right: w[1],
                    end: w[0].d0,
                    start: w[1].d1,
                });
            }
        }
        Ok(Path(simplices))
    }

    pub fn single(b: Simplex1) -> Self {
        Path(vec![b])
    }

    /// The path consisting of `b(a)` only.
    pub fn degenerate(a: Element) -> Self {
        Path(vec![Simplex1::degenerate(a)])
    }

    pub fn simplices(&self) -> &[Simplex1] {
        &self.0
    }

    pub fn into_simplices(self) -> Vec<Simplex1> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> Element {
        self.0[0].d1
    }

    pub fn end(&self) -> Element {
        self.0[self.0.len() - 1].d0
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// Traverses `self`, then `next`.
    pub fn then(&self, next: &Path) -> Result<Path, PathError> {
        compose_paths(next, self)
    }

    pub fn reverse(&self) -> Path {
        reverse_path(self)
    }

    /// Supports of the simplices in traversal order.
    pub fn supports(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.iter().map(|b| b.support)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let simplices = Vec::<Simplex1>::deserialize(d)?;
        Path::new(simplices).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `q * p`: traverse `p`, then `q`. Requires `p.end() == q.start()`.
///
/// No normalization happens; the result has `p.len() + q.len()` simplices.
pub fn compose_paths(q: &Path, p: &Path) -> Result<Path, PathError> {
    if p.end() != q.start() {
        return Err(PathError::EndpointMismatch {
            end: p.end(),
            start: q.start(),
        });
    }
    let mut v = Vec::with_capacity(p.len() + q.len());
    v.extend_from_slice(&p.0);
    v.extend_from_slice(&q.0);
    Ok(Path(v))
}

/// Reverses every simplex and the order of traversal.
pub fn reverse_path(p: &Path) -> Path {
    Path(p.0.iter().rev().map(|b| b.reverse()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(triples: &[(usize, usize, usize)]) -> Path {
        Path::new(
            triples
                .iter()
                .map(|&(a, b, s)| Simplex1::new(a, b, s))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_broken_chains() {
        let err = Path::new(vec![Simplex1::new(0, 1, 2), Simplex1::new(0, 2, 2)]).unwrap_err();
        assert!(matches!(err, PathError::Broken { index: 0, .. }));
        assert_eq!(Path::new(vec![]).unwrap_err(), PathError::Empty);
    }

    #[test]
    fn composition_concatenates() {
        let p = path(&[(0, 1, 2)]);
        let q = path(&[(1, 3, 3), (3, 4, 4)]);
        let qp = compose_paths(&q, &p).unwrap();
        assert_eq!(qp.len(), 3);
        assert_eq!((qp.start(), qp.end()), (0, 4));
        assert!(compose_paths(&p, &q).is_err());
    }

    #[test]
    fn composing_with_degenerate_lengthens() {
        let p = path(&[(0, 1, 2)]);
        let out = compose_paths(&p, &Path::degenerate(0)).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn reverse_single_simplex() {
        assert_eq!(reverse_path(&path(&[(0, 1, 2)])), path(&[(1, 0, 2)]));
    }

    #[test]
    fn json_uses_traversal_order() {
        let p = path(&[(0, 1, 2), (1, 3, 3)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0,1,2],[1,3,3]]");
        assert_eq!(serde_json::from_str::<Path>(&s).unwrap(), p);
        assert!(serde_json::from_str::<Path>("[[0,1,2],[0,3,3]]").is_err());
    }
}
