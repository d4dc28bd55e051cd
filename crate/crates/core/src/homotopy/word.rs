use serde::{Deserialize, Serialize};
use std::fmt;

/// A letter of a free-group word: `+(g+1)` is generator `g`, `-(g+1)` its
/// inverse.
pub type Letter = i64;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as i64 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// A word over generators and their inverses, read left to right as a
/// product. Group words follow the matrix convention: the leftmost letter is
/// applied last.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Free reduction: cancels adjacent `x x⁻¹` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let (mut i, mut j) = (0usize, w.len());
        while j - i >= 2 && w[i] == -w[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Product `self · other`, freely reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    /// Number of occurrences of generator `g` (either sign).
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|&&l| generator_of(l) == g).count()
    }

    /// Signed exponent sum of every generator, in a vector of length `n`.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for &l in &self.0 {
            v[generator_of(l)] += l.signum();
        }
        v
    }

    /// Replaces every occurrence of generator `g` by `expr` (and `g⁻¹` by
    /// the inverse of `expr`), then reduces freely.
    pub fn substitute(&self, g: usize, expr: &Word) -> Word {
        let inv = expr.inverse();
        let mut v = Vec::with_capacity(self.0.len() + expr.len());
        for &l in &self.0 {
            if generator_of(l) == g {
                if l > 0 {
                    v.extend_from_slice(&expr.0);
                } else {
                    v.extend_from_slice(&inv.0);
                }
            } else {
                v.push(l);
            }
        }
        Word(v).reduced()
    }

    /// Canonical representative of the cyclic word up to rotation and
    /// inversion; used to deduplicate relators.
    pub fn cyclic_canonical(&self) -> Word {
        let w = self.cyclically_reduced();
        if w.is_empty() {
            return w;
        }
        let mut best = w.0.clone();
        for cand in [w.0.clone(), w.inverse().0] {
            for r in 0..cand.len() {
                let mut rot = cand[r..].to_vec();
                rot.extend_from_slice(&cand[..r]);
                if rot < best {
                    best = rot;
                }
            }
        }
        Word(best)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l > 0 {
                write!(f, "g{}", generator_of(l))?;
            } else {
                write!(f, "g{}⁻¹", generator_of(l))?;
            }
        }
        Ok(())
    }
}
