use super::{Element, Poset};

/// A subset of the elements of a poset with `n` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    mask: Vec<bool>,
    members: Vec<Element>,
}

impl Region {
    pub fn full(n: usize) -> Self {
        Region {
            mask: vec![true; n],
            members: (0..n).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Region {
            mask: vec![false; n],
            members: Vec::new(),
        }
    }

    /// Panics if a member is out of range.
    pub fn from_members(n: usize, members: impl IntoIterator<Item = Element>) -> Self {
        let mut mask = vec![false; n];
        for m in members {
            mask[m] = true;
        }
        let members = (0..n).filter(|&i| mask[i]).collect();
        Region { mask, members }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = (0..mask.len()).filter(|&i| mask[i]).collect();
        Region { mask, members }
    }

    /// Size of the ambient poset.
    pub fn ambient(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn contains(&self, e: Element) -> bool {
        self.mask.get(e).copied().unwrap_or(false)
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Members of `self` lying below `o` in `p`.
    pub fn below(&self, p: &Poset, o: Element) -> Region {
        Region::from_members(
            self.ambient(),
            self.members.iter().copied().filter(|&m| p.leq(m, o)),
        )
    }

    pub fn intersect(&self, other: &Region) -> Region {
        Region::from_members(
            self.ambient(),
            self.members.iter().copied().filter(|&m| other.contains(m)),
        )
    }

    pub fn is_subset_of(&self, other: &Region) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// A pair `(member, below)` with `below <= member` and `below` outside
    /// the region, or `None` when the region is downward closed.
    pub fn closure_failure(&self, p: &Poset) -> Option<(Element, Element)> {
        for &i in &self.members {
            for j in 0..p.len() {
                if p.leq(j, i) && !self.contains(j) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error("{member} is in the set but {below} <= {member} is not")]
    NotDownwardClosed { member: Element, below: Element },
    #[error("region is over {got} elements, poset has {n}")]
    Ambient { got: usize, n: usize },
}

/// A downward-closed subset of a poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sieve(Region);

impl Sieve {
    pub fn new(p: &Poset, region: Region) -> Result<Self, SieveError> {
        if region.ambient() != p.len() {
            return Err(SieveError::Ambient {
                got: region.ambient(),
                n: p.len(),
            });
        }
        match region.closure_failure(p) {
            Some((member, below)) => Err(SieveError::NotDownwardClosed { member, below }),
            None => Ok(Sieve(region)),
        }
    }

    pub(crate) fn new_unchecked(region: Region) -> Self {
        Sieve(region)
    }

    pub fn region(&self) -> &Region {
        &self.0
    }

    pub fn into_region(self) -> Region {
        self.0
    }

    pub fn members(&self) -> &[Element] {
        self.0.members()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.0.contains(e)
    }
}

impl AsRef<Region> for Sieve {
    fn as_ref(&self) -> &Region {
        &self.0
    }
}
