//! Tietze simplification by generator elimination.

use super::word::{generator_of, Word};
use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

/// Shape of a simplified presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupShape {
    Trivial,
    /// Free group on the surviving generators.
    Free {
        rank: usize,
    },
    /// Only the commutators of all pairs of surviving generators remain.
    FreeAbelian {
        rank: usize,
    },
    Other {
        generators: usize,
        relations: usize,
    },
}

/// Result of Tietze simplification.
#[derive(Debug, Clone)]
pub struct Simplified {
    /// Surviving generators (original indices), ascending.
    pub generators: Vec<usize>,
    /// Remaining relators over the surviving generators, cyclically reduced
    /// and deduplicated up to rotation and inversion.
    pub relations: Vec<Word>,
    pub shape: GroupShape,
    /// Elimination moves performed.
    pub moves: usize,
    /// `(g, w)`: generator `g` was replaced by `w`, in elimination order.
    eliminated: Vec<(usize, Word)>,
    expansion: Vec<Option<Word>>,
}

impl Simplified {
    /// Rewrites a word over the original generators into the surviving ones.
    pub fn rewrite(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let g = generator_of(l);
            match &self.expansion[g] {
                None => out.push(l),
                Some(e) if l > 0 => out.extend_from_slice(e.letters()),
                Some(e) => out.extend(e.letters().iter().rev().map(|&x| -x)),
            }
        }
        Word(out).reduced()
    }

    pub fn eliminated(&self) -> &[(usize, Word)] {
        &self.eliminated
    }

    /// A normal form when the shape admits one: the reduced word for free
    /// groups, the exponent vector over surviving generators for free
    /// abelian ones, the empty word for the trivial group.
    pub fn normal_form(&self, w: &Word) -> Option<NormalForm> {
        let r = self.rewrite(w);
        match self.shape {
            GroupShape::Trivial => Some(NormalForm::Word(Word::new())),
            GroupShape::Free { .. } => Some(NormalForm::Word(r)),
            GroupShape::FreeAbelian { .. } => {
                let mut v = Vec::with_capacity(self.generators.len());
                for &g in &self.generators {
                    v.push(
                        r.letters()
                            .iter()
                            .filter(|&&l| generator_of(l) == g)
                            .map(|l| l.signum())
                            .sum(),
                    );
                }
                Some(NormalForm::Exponents(v))
            }
            GroupShape::Other { .. } => None,
        }
    }
}

/// A canonical form of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalForm {
    Word(Word),
    Exponents(Vec<i64>),
}

/// Eliminates generators that occur exactly once in some relator, shortest
/// relators first, for at most `budget` moves.
pub fn simplify(num_generators: usize, relations: &[Word], budget: usize) -> Simplified {
    let mut rels: Vec<Option<Word>> = Vec::with_capacity(relations.len());
    let mut occ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); num_generators];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for r in relations {
        let w = r.cyclically_reduced();
        let idx = rels.len();
        if w.is_empty() {
            rels.push(None);
            continue;
        }
        for &l in w.letters() {
            occ[generator_of(l)].insert(idx);
        }
        queue.insert((w.len(), idx));
        rels.push(Some(w));
    }

    let mut alive = vec![true; num_generators];
    let mut eliminated: Vec<(usize, Word)> = Vec::new();
    let mut moves = 0;
    while moves < budget {
        let Some(&(len, idx)) = queue.iter().next() else {
            break;
        };
        queue.remove(&(len, idx));
        let r = rels[idx].clone().expect("queued relators are present");
        let Some((pos, g)) = pick_once(&r, &occ) else {
            continue;
        };
        // r = u g^e v  ⇒  g = u⁻¹ v⁻¹ (e = +1) or g = v u (e = -1).
        let (u, v) = (
            Word(r.letters()[..pos].to_vec()),
            Word(r.letters()[pos + 1..].to_vec()),
        );
        let expr = if r.letters()[pos] > 0 {
            u.inverse().mul(&v.inverse())
        } else {
            v.mul(&u)
        };
        rels[idx] = None;
        for &l in r.letters() {
            occ[generator_of(l)].remove(&idx);
        }
        let users: Vec<usize> = occ[g].iter().copied().collect();
        for j in users {
            let old = rels[j]
                .take()
                .expect("occurrence lists track live relators");
            queue.remove(&(old.len(), j));
            for &l in old.letters() {
                occ[generator_of(l)].remove(&j);
            }
            let new = old.substitute(g, &expr).cyclically_reduced();
            if !new.is_empty() {
                for &l in new.letters() {
                    occ[generator_of(l)].insert(j);
                }
                queue.insert((new.len(), j));
                rels[j] = Some(new);
            }
        }
        alive[g] = false;
        eliminated.push((g, expr));
        moves += 1;
    }

    let mut seen = HashSet::new();
    let mut remaining: Vec<Word> = Vec::new();
    for w in rels.into_iter().flatten() {
        let c = w.cyclic_canonical();
        if seen.insert(c.clone()) {
            remaining.push(c);
        }
    }
    remaining.sort();
    let generators: Vec<usize> = (0..num_generators).filter(|&g| alive[g]).collect();
    let shape = classify(&generators, &remaining);

    let mut expansion: Vec<Option<Word>> = vec![None; num_generators];
    // Later eliminations only involve generators alive at their time, so
    // expanding in reverse order only meets already-expanded generators.
    for (g, expr) in eliminated.iter().rev() {
        let mut out = Vec::new();
        for &l in expr.letters() {
            match &expansion[generator_of(l)] {
                None => out.push(l),
                Some(e) if l > 0 => out.extend_from_slice(e.letters()),
                Some(e) => out.extend(e.letters().iter().rev().map(|&x| -x)),
            }
        }
        expansion[*g] = Some(Word(out).reduced());
    }

    Simplified {
        generators,
        relations: remaining,
        shape,
        moves,
        eliminated,
        expansion,
    }
}

/// A generator occurring exactly once in `r`, preferring the one with the
/// fewest occurrences elsewhere, then the smallest index.
fn pick_once(r: &Word, occ: &[BTreeSet<usize>]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (pos, &l) in r.letters().iter().enumerate() {
        let g = generator_of(l);
        if r.occurrences(g) != 1 {
            continue;
        }
        let cost = occ[g].len();
        if best.is_none_or(|(c, bg, _)| (cost, g) < (c, bg)) {
            best = Some((cost, g, pos));
        }
    }
    best.map(|(_, g, pos)| (pos, g))
}

fn classify(generators: &[usize], relations: &[Word]) -> GroupShape {
    let k = generators.len();
    if k == 0 {
        return GroupShape::Trivial;
    }
    if relations.is_empty() {
        return GroupShape::Free { rank: k };
    }
    let mut pairs = BTreeSet::new();
    for r in relations {
        let l = r.letters();
        let is_commutator = l.len() == 4
            && l[2] == -l[0]
            && l[3] == -l[1]
            && generator_of(l[0]) != generator_of(l[1]);
        if !is_commutator {
            return GroupShape::Other {
                generators: k,
                relations: relations.len(),
            };
        }
        let (a, b) = (generator_of(l[0]), generator_of(l[1]));
        pairs.insert((a.min(b), a.max(b)));
    }
    if pairs.len() == relations.len() && pairs.len() == k * (k - 1) / 2 {
        GroupShape::FreeAbelian { rank: k }
    } else {
        GroupShape::Other {
            generators: k,
            relations: relations.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_relators_kill_generators() {
        let s = simplify(3, &[Word(vec![1]), Word(vec![2, 3])], 30);
        assert_eq!(s.generators.len(), 1);
        assert_eq!(s.shape, GroupShape::Free { rank: 1 });
    }

    #[test]
    fn rewrite_respects_eliminations() {
        // g1 = g0 via g1 g0⁻¹ = 1.
        let s = simplify(2, &[Word(vec![2, -1])], 10);
        assert_eq!(s.generators.len(), 1);
        let survivor = s.generators[0] as i64 + 1;
        assert_eq!(s.rewrite(&Word(vec![1, 2])), Word(vec![survivor, survivor]));
    }

    #[test]
    fn torus_relator_is_free_abelian() {
        let s = simplify(2, &[Word(vec![1, 2, -1, -2])], 10);
        assert_eq!(s.shape, GroupShape::FreeAbelian { rank: 2 });
        let nf_ab = s.normal_form(&Word(vec![1, 2])).unwrap();
        let nf_ba = s.normal_form(&Word(vec![2, 1])).unwrap();
        assert_eq!(nf_ab, nf_ba);
    }

    #[test]
    fn budget_bounds_the_moves() {
        let rels: Vec<Word> = (0..5).map(|g| Word(vec![g + 1])).collect();
        let s = simplify(5, &rels, 2);
        assert_eq!(s.moves, 2);
        assert_eq!(s.generators.len(), 3);
    }

    #[test]
    fn cyclic_group_is_other() {
        let s = simplify(1, &[Word(vec![1, 1, 1])], 10);
        assert_eq!(
            s.shape,
            GroupShape::Other {
                generators: 1,
                relations: 1
            }
        );
    }
}
