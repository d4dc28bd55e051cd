use super::Element;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A singular 1-simplex: a starting face `d1`, an ending face `d0` and a
/// support dominating both.
///
/// Field order gives the lexicographic order `(d1, d0, support)` used by
/// every enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex1 {
    pub d1: Element,
    pub d0: Element,
    pub support: Element,
}

impl Simplex1 {
    pub const fn new(d1: Element, d0: Element, support: Element) -> Self {
        Simplex1 { d1, d0, support }
    }

    /// The degenerate 1-simplex `b(a)`.
    pub const fn degenerate(a: Element) -> Self {
        Simplex1 {
            d1: a,
            d0: a,
            support: a,
        }
    }

    /// The reversed simplex: faces swapped, same support.
    pub const fn reverse(self) -> Self {
        Simplex1 {
            d1: self.d0,
            d0: self.d1,
            support: self.support,
        }
    }

    pub const fn is_degenerate(&self) -> bool {
        self.d1 == self.d0 && self.d0 == self.support
    }

    /// A closed simplex `d1 == d0` whose support is strictly above the face.
    pub const fn is_loop(&self) -> bool {
        self.d1 == self.d0 && self.d0 != self.support
    }

    pub const fn as_triple(&self) -> [Element; 3] {
        [self.d1, self.d0, self.support]
    }
}

impl fmt::Display for Simplex1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}→{} | {})", self.d1, self.d0, self.support)
    }
}

impl Serialize for Simplex1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_triple().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex1 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [d1, d0, support] = <[Element; 3]>::deserialize(d)?;
        Ok(Simplex1 { d1, d0, support })
    }
}

/// A singular 2-simplex given by its faces `∂0 = f0`, `∂1 = f1`, `∂2 = f2`
/// and its support.
///
/// With vertices `v0, v1, v2`, the faces are `f2 = v0→v1`, `f0 = v1→v2` and
/// `f1 = v0→v2`; traversing `f2` then `f0` is homotopic to `f1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex2 {
    pub f0: Simplex1,
    pub f1: Simplex1,
    pub f2: Simplex1,
    pub support: Element,
}

impl Simplex2 {
    pub const fn new(f0: Simplex1, f1: Simplex1, f2: Simplex1, support: Element) -> Self {
        Simplex2 {
            f0,
            f1,
            f2,
            support,
        }
    }

    /// The 2-simplex on vertices `v` whose faces and body all have support
    /// `s`.
    pub const fn flat(v: [Element; 3], s: Element) -> Self {
        Simplex2 {
            f0: Simplex1::new(v[1], v[2], s),
            f1: Simplex1::new(v[0], v[2], s),
            f2: Simplex1::new(v[0], v[1], s),
            support: s,
        }
    }

    /// The degenerate 2-simplex on `a`: all faces are `b(a)`.
    pub const fn degenerate(a: Element) -> Self {
        let b = Simplex1::degenerate(a);
        Simplex2 {
            f0: b,
            f1: b,
            f2: b,
            support: a,
        }
    }

    /// The three vertex-matching identities between faces.
    pub const fn vertices_match(&self) -> bool {
        self.f0.d0 == self.f1.d0 && self.f0.d1 == self.f2.d0 && self.f1.d1 == self.f2.d1
    }

    /// Vertices `[v0, v1, v2]`.
    pub const fn vertices(&self) -> [Element; 3] {
        [self.f2.d1, self.f2.d0, self.f0.d0]
    }
}

impl fmt::Display for Simplex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[∂0 {}, ∂1 {}, ∂2 {} | {}]",
            self.f0, self.f1, self.f2, self.support
        )
    }
}
