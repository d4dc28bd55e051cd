//! Fixtures, random generators and independent oracles shared by the
//! integration tests. Nothing here calls into the homology or homotopy code
//! of the library.
#![allow(dead_code)]

use posetcoh::homotopy::{apply_deformation, Deformation};
use posetcoh::linalg::{c, exp_i_hermitian, paulis};
use posetcoh::spacetime::{diamond_poset, DiamondPoset, Topology};
use posetcoh::{CMat, Element, Path, Poset, Simplex1, Simplex2};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cylinder(m: usize, t: usize) -> DiamondPoset {
    diamond_poset(Topology::Cylinder { m, t }).expect("cylinder fixture")
}

pub fn annulus(m: usize, width: usize, t: usize) -> DiamondPoset {
    diamond_poset(Topology::Annulus { m, width, t }).expect("annulus fixture")
}

/// A random order on `n` elements in which `n - 1` is the top. Only the
/// order is set; there are no disjoint pairs.
pub fn random_directed(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let top = n - 1;
    let mut pairs = Vec::new();
    for i in 0..top {
        for j in i + 1..top {
            if rng.random_bool(density) {
                pairs.push((i, j));
            }
        }
        pairs.push((i, top));
    }
    Poset::from_relations(n, &pairs, &[])
        .expect("indices in range")
        .transitive_closure()
}

/// A random order on `n` elements with no imposed top.
pub fn random_order(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    Poset::from_relations(n, &pairs, &[])
        .expect("indices in range")
        .transitive_closure()
}

/// A random 1-simplex leaving `from`.
pub fn random_step(rng: &mut impl Rng, p: &Poset, from: Element) -> Simplex1 {
    let s = *p.up_set(from).choose(rng).expect("reflexive order");
    let y = *p.down_set(s).choose(rng).expect("reflexive order");
    Simplex1::new(from, y, s)
}

/// A random walk of `len` simplices from `start`.
pub fn random_path(rng: &mut impl Rng, p: &Poset, start: Element, len: usize) -> Path {
    let mut cur = start;
    let mut v = Vec::with_capacity(len.max(1));
    for _ in 0..len.max(1) {
        let b = random_step(rng, p, cur);
        cur = b.d0;
        v.push(b);
    }
    Path::new(v).expect("walk is chained")
}

/// A random ampliation or contraction that applies to `path`, if one was
/// found in a few tries.
pub fn random_move(rng: &mut impl Rng, p: &Poset, path: &Path) -> Option<Deformation> {
    let v = path.simplices();
    for _ in 0..8 {
        let j = rng.random_range(0..v.len());
        if rng.random_bool(0.6) || j + 1 == v.len() {
            let b = v[j];
            let s = *p.up_set(b.support).choose(rng)?;
            let mid = *p.down_set(s).choose(rng)?;
            let c2 = Simplex2::new(
                Simplex1::new(mid, b.d0, s),
                b,
                Simplex1::new(b.d1, mid, s),
                s,
            );
            return Some(Deformation::ampliation(j, c2));
        }
        let (f2, f0) = (v[j], v[j + 1]);
        if let Some(&s) = p.upper_bounds(f2.support, f0.support).choose(rng) {
            let c2 = Simplex2::new(f0, Simplex1::new(f2.d1, f0.d0, s), f2, s);
            return Some(Deformation::contraction(j, c2));
        }
    }
    None
}

/// `path` after `moves` random deformations; homotopic by construction.
pub fn deform(rng: &mut impl Rng, p: &Poset, path: &Path, moves: usize) -> Path {
    let mut q = path.clone();
    for _ in 0..moves {
        if let Some(d) = random_move(rng, p, &q) {
            q = apply_deformation(p, &q, &d).expect("generated move applies");
        }
    }
    q
}

/// A random element of SU(2).
pub fn random_su2(rng: &mut impl Rng) -> CMat {
    let [x, y, z] = paulis();
    let h = &x * c(rng.random_range(-2.0..2.0), 0.0)
        + &y * c(rng.random_range(-2.0..2.0), 0.0)
        + &z * c(rng.random_range(-2.0..2.0), 0.0);
    exp_i_hermitian(&h)
}

/// First homology of the order complex of `p` (vertices are elements,
/// simplices are strict chains), computed by integer elimination of the
/// boundary matrices: `(rank, torsion)` with torsion the invariant factors
/// above one.
pub fn order_complex_h1(p: &Poset) -> (usize, Vec<i128>) {
    let n = p.len();
    let mut edge_index = std::collections::HashMap::new();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if p.lt(a, b) {
                edge_index.insert((a, b), edges.len());
                edges.push((a, b));
            }
        }
    }
    // Boundary of a < b < c is (b,c) - (a,c) + (a,b); one column each.
    let mut boundary2: Vec<Vec<i128>> = Vec::new();
    for &(a, b) in &edges {
        for cc in 0..n {
            if p.lt(b, cc) {
                let mut col = vec![0i128; edges.len()];
                col[edge_index[&(b, cc)]] += 1;
                col[edge_index[&(a, cc)]] -= 1;
                col[edge_index[&(a, b)]] += 1;
                boundary2.push(col);
            }
        }
    }
    let components = {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for &(a, b) in &edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        (0..n).filter(|&x| find(&mut parent, x) == x).count()
    };
    let rank1 = n - components;
    let diagonal = diagonalize(boundary2);
    let rank2 = diagonal.len();
    let torsion = diagonal.into_iter().filter(|&d| d > 1).collect();
    (edges.len() - rank1 - rank2, torsion)
}

/// Nonzero diagonal of a unimodular reduction of the matrix whose columns
/// are given. The cokernel is the sum of the cyclic groups of these entries
/// and a free part.
pub fn diagonalize(columns: Vec<Vec<i128>>) -> Vec<i128> {
    let mut a = columns;
    let cols = a.len();
    let rows = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < cols.min(rows) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for (j, col) in a.iter().enumerate().skip(t) {
            for (i, &x) in col.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bj, bi)| x.abs() < a[bj][bi].abs()) {
                    best = Some((j, i));
                }
            }
        }
        let Some((j, i)) = best else { break };
        a.swap(t, j);
        for col in a.iter_mut() {
            col.swap(t, i);
        }
        loop {
            let pivot = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[t][i] / pivot;
                if q != 0 {
                    for col in a.iter_mut() {
                        col[i] -= q * col[t];
                    }
                }
                dirty |= a[t][i] != 0;
            }
            for j in t + 1..cols {
                let q = a[j][t] / pivot;
                if q != 0 {
                    for i in t..rows {
                        let v = a[t][i];
                        a[j][i] -= q * v;
                    }
                }
                dirty |= a[j][t] != 0;
            }
            if !dirty {
                break;
            }
            // A remainder smaller than the pivot takes its place.
            let mut best = (t, t, pivot.abs());
            for i in t + 1..rows {
                if a[t][i] != 0 && a[t][i].abs() < best.2 {
                    best = (t, i, a[t][i].abs());
                }
            }
            for j in t + 1..cols {
                if a[j][t] != 0 && a[j][t].abs() < best.2 {
                    best = (j, t, a[j][t].abs());
                }
            }
            let (j, i, _) = best;
            a.swap(t, j);
            for col in a.iter_mut() {
                col.swap(t, i);
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    // The diagonal need not be a divisor chain; normalize pairwise.
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let g = gcd(out[i], out[j]);
            let l = out[i] / g * out[j];
            out[i] = g;
            out[j] = l;
        }
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
