//! Abelianization of a finitely presented group via Smith normal form.
//!
//! Relators become rows of an integer matrix. Unit pivots are eliminated
//! sparsely first (each one records a substitution of a generator), and the
//! small remainder is brought to Smith normal form densely while tracking
//! the column transform, which yields coordinates on H₁.

use super::word::Word;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// The abelianized group `ℤ^rank ⊕ ⊕ ℤ/torsion[i]`, with a map from
/// exponent vectors to coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct Abelianization {
    pub rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<i64>,
    #[serde(skip)]
    num_generators: usize,
    #[serde(skip)]
    substitutions: Vec<(usize, Vec<(usize, i64)>)>,
    #[serde(skip)]
    dense_cols: Vec<usize>,
    #[serde(skip)]
    transform: Vec<Vec<i128>>,
    /// Invariant factor per dense coordinate; zero marks a free coordinate.
    #[serde(skip)]
    factors: Vec<i128>,
}

impl Abelianization {
    /// Coordinates of an exponent vector: torsion residues (in the order of
    /// `torsion`) followed by the free coordinates.
    pub fn class(&self, exponents: &[i64]) -> Vec<i64> {
        assert_eq!(
            exponents.len(),
            self.num_generators,
            "exponent vector length"
        );
        let mut v: Vec<i128> = exponents.iter().map(|&e| e as i128).collect();
        for (c, expr) in &self.substitutions {
            let coef = v[*c];
            if coef != 0 {
                v[*c] = 0;
                for &(j, e) in expr {
                    v[j] += coef * e as i128;
                }
            }
        }
        let x: Vec<i128> = self.dense_cols.iter().map(|&c| v[c]).collect();
        let k = x.len();
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for col in 0..k {
            let y: i128 = (0..k).map(|i| x[i] * self.transform[i][col]).sum();
            match self.factors[col] {
                0 => free.push(y as i64),
                1 => {}
                d => torsion.push(y.rem_euclid(d) as i64),
            }
        }
        torsion.extend(free);
        torsion
    }

    pub fn class_of_word(&self, w: &Word) -> Vec<i64> {
        self.class(&w.exponent_sums(self.num_generators))
    }
}

/// Abelianizes the group with `num_generators` generators and the given
/// relators.
pub fn abelianize(num_generators: usize, relations: &[Word]) -> Abelianization {
    let mut rows: Vec<Option<BTreeMap<usize, i64>>> = Vec::new();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); num_generators];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for r in relations {
        let mut row = BTreeMap::new();
        for (g, e) in r.exponent_sums(num_generators).into_iter().enumerate() {
            if e != 0 {
                row.insert(g, e);
            }
        }
        let idx = rows.len();
        if !row.is_empty() {
            for &c in row.keys() {
                col_rows[c].insert(idx);
            }
            queue.insert((row.len(), idx));
            rows.push(Some(row));
        } else {
            rows.push(None);
        }
    }

    let mut eliminated = vec![false; num_generators];
    let mut substitutions = Vec::new();
    while let Some(&(len, idx)) = queue.iter().next() {
        queue.remove(&(len, idx));
        let row = rows[idx].as_ref().expect("queued rows are present");
        // Unit pivot in the column with the fewest other rows.
        let pivot = row
            .iter()
            .filter(|(_, &a)| a.abs() == 1)
            .min_by_key(|(&c, _)| (col_rows[c].len(), c))
            .map(|(&c, &a)| (c, a));
        let Some((c, a)) = pivot else { continue };
        let row = rows[idx].take().expect("row present");
        for &k in row.keys() {
            col_rows[k].remove(&idx);
        }
        // x_c = -a Σ_{j≠c} a_j x_j
        let expr: Vec<(usize, i64)> = row
            .iter()
            .filter(|(&j, _)| j != c)
            .map(|(&j, &aj)| (j, -a * aj))
            .collect();
        let users: Vec<usize> = col_rows[c].iter().copied().collect();
        for u in users {
            let mut other = rows[u].take().expect("column index tracks live rows");
            queue.remove(&(other.len(), u));
            let b = other.remove(&c).expect("row uses the column");
            col_rows[c].remove(&u);
            for &(j, e) in &expr {
                let entry = other.entry(j).or_insert(0);
                *entry += b * e;
                if *entry == 0 {
                    other.remove(&j);
                    col_rows[j].remove(&u);
                } else {
                    col_rows[j].insert(u);
                }
            }
            if !other.is_empty() {
                queue.insert((other.len(), u));
                rows[u] = Some(other);
            }
        }
        eliminated[c] = true;
        substitutions.push((c, expr));
    }

    let dense_cols: Vec<usize> = (0..num_generators).filter(|&c| !eliminated[c]).collect();
    let pos: BTreeMap<usize, usize> = dense_cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let mut matrix: Vec<Vec<i128>> = Vec::new();
    for row in rows.into_iter().flatten() {
        let mut dense = vec![0i128; dense_cols.len()];
        for (c, a) in row {
            dense[pos[&c]] = a as i128;
        }
        matrix.push(dense);
    }
    let (factors, transform) = smith_with_column_transform(matrix, dense_cols.len());
    let rank = factors.iter().filter(|&&d| d == 0).count();
    let torsion = factors
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| d as i64)
        .collect();
    Abelianization {
        rank,
        torsion,
        num_generators,
        substitutions,
        dense_cols,
        transform,
        factors,
    }
}

/// Smith normal form of an `r × k` matrix, returning the diagonal (padded
/// with zeros to length `k`) and the unimodular column transform `V` with
/// `U A V = D`.
fn smith_with_column_transform(mut a: Vec<Vec<i128>>, k: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let r = a.len();
    let mut v: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();
    let swap_cols = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };
    // col_j -= q col_i
    let sub_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, j: usize, i: usize, q: i128| {
        for row in a.iter_mut() {
            row[j] -= q * row[i];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[i];
        }
    };
    let mut t = 0;
    while t < r.min(k) {
        // Smallest nonzero entry of the trailing block goes to (t, t).
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                    best = Some((x.abs(), i, j));
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, &mut v, t, bj);
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..r {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..k {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    sub_col(&mut a, &mut v, j, t, q);
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // Move the smallest remaining entry of row/column t to the pivot.
                let mut best = (p.abs(), t, t);
                for i in t + 1..r {
                    if a[i][t] != 0 && a[i][t].abs() < best.0 {
                        best = (a[i][t].abs(), i, t);
                    }
                }
                for j in t + 1..k {
                    if a[t][j] != 0 && a[t][j].abs() < best.0 {
                        best = (a[t][j].abs(), t, j);
                    }
                }
                if best.1 != t {
                    a.swap(t, best.1);
                }
                if best.2 != t {
                    swap_cols(&mut a, &mut v, t, best.2);
                }
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let bad = (t + 1..r).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let row_i = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&row_i) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let mut diag = vec![0i128; k];
    for (i, d) in diag.iter_mut().enumerate().take(t) {
        *d = a[i][i];
    }
    (diag, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_presentation() {
        let ab = abelianize(0, &[]);
        assert_eq!((ab.rank, ab.torsion.clone()), (0, vec![]));
    }

    #[test]
    fn free_and_torsion_parts() {
        // <a, b | a^2 b^2, a^4> ... a^2 = b^-2, a^4 = 1 → Z/4 ⊕ ... compute.
        let ab = abelianize(2, &[Word(vec![1, 1, 2, 2]), Word(vec![1, 1, 1, 1])]);
        // Matrix [[2,2],[4,0]] has invariant factors 2, 4.
        assert_eq!(ab.rank, 0);
        assert_eq!(ab.torsion, vec![2, 4]);
    }

    #[test]
    fn class_of_relator_is_zero() {
        let rels = [Word(vec![1, 2, 2]), Word(vec![3, 3, 3, -1])];
        let ab = abelianize(3, &rels);
        for r in &rels {
            assert!(ab.class_of_word(r).iter().all(|&x| x == 0));
        }
        assert_eq!(ab.rank, 1);
    }

    #[test]
    fn free_abelian_rank_two() {
        let ab = abelianize(2, &[Word(vec![1, 2, -1, -2])]);
        assert_eq!(ab.rank, 2);
        assert_eq!(ab.class(&[3, -1]), vec![3, -1]);
    }

    #[test]
    fn torsion_residues_detect_differences() {
        let ab = abelianize(1, &[Word(vec![1, 1, 1])]);
        assert_eq!(ab.torsion, vec![3]);
        assert_eq!(ab.class(&[4]), ab.class(&[1]));
        assert_ne!(ab.class(&[2]), ab.class(&[1]));
    }
}
