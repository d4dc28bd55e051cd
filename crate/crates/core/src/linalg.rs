//! Complex matrix helpers over `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unitarity and cocycle identities, in operator norm.
    pub unitary: f64,
    /// Membership in a subalgebra and commutators, in Hilbert–Schmidt norm.
    pub algebra: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: 1e-9,
            algebra: 1e-8,
        }
    }
}

impl Tolerances {
    /// Sets both tolerances from one value, keeping their ratio.
    pub fn scaled(tau: f64) -> Self {
        Tolerances {
            unitary: tau,
            algebra: 10.0 * tau,
        }
    }
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn scalar(d: usize, z: Complex64) -> CMat {
    CMat::from_diagonal_element(d, d, z)
}

/// `e^{iθ}` times the identity.
pub fn phase(d: usize, theta: f64) -> CMat {
    scalar(d, Complex64::from_polar(1.0, theta))
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() || m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    if m.len() == 1 {
        return m[0].norm();
    }
    m.singular_values().max()
}

/// Operator-norm distance.
pub fn dist(a: &CMat, b: &CMat) -> f64 {
    op_norm(&(a - b))
}

/// `‖u* u − 1‖`.
pub fn unitarity_defect(u: &CMat) -> f64 {
    dist(&(u.adjoint() * u), &identity(u.nrows()))
}

/// Hilbert–Schmidt inner product `tr(a* b)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// If `m` is within `tol` of a multiple of the identity, that multiple.
pub fn as_scalar(m: &CMat, tol: f64) -> Option<Complex64> {
    let d = m.nrows();
    if d == 0 {
        return None;
    }
    let z = m.trace() / Complex64::from(d as f64);
    (dist(m, &scalar(d, z)) <= tol).then_some(z)
}

/// Gram–Schmidt under the Hilbert–Schmidt inner product: extends the
/// orthonormal `basis` by the components of `candidates` that stick out of
/// its span by more than `tol`. Runs two passes of projection for accuracy.
pub fn extend_orthonormal(
    basis: &mut Vec<CMat>,
    candidates: impl IntoIterator<Item = CMat>,
    tol: f64,
) -> usize {
    let mut added = 0;
    for m in candidates {
        let mut r = m;
        for _ in 0..2 {
            for b in basis.iter() {
                let coef = hs_inner(b, &r);
                r -= b * coef;
            }
        }
        let n = hs_norm(&r);
        if n > tol {
            basis.push(r / Complex64::from(n));
            added += 1;
        }
    }
    added
}

/// Residual of `m` after orthogonal projection onto the span of an
/// orthonormal basis, in Hilbert–Schmidt norm.
pub fn span_residual(basis: &[CMat], m: &CMat) -> f64 {
    hs_norm(&(m - project(basis, m)))
}

/// Orthogonal projection onto the span of an orthonormal basis.
pub fn project(basis: &[CMat], m: &CMat) -> CMat {
    let mut p = CMat::zeros(m.nrows(), m.ncols());
    for b in basis {
        p += b * hs_inner(b, m);
    }
    p
}

/// Orthonormal basis of the nullspace of a Hermitian positive semidefinite
/// matrix: eigenvectors with eigenvalue at most `tol`.
pub fn psd_kernel(h: &CMat, tol: f64) -> Vec<CVec> {
    let n = h.nrows();
    if n == 0 {
        return Vec::new();
    }
    // Symmetrize against rounding before the Hermitian solver.
    let sym = (h + h.adjoint()) * Complex64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] <= tol).collect();
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then(i.cmp(&j))
    });
    idx.into_iter()
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect()
}

/// Accumulates linear constraints `L x = 0` as the Gram matrix `Σ L* L`,
/// whose kernel is the joint solution space.
pub struct Normal {
    gram: CMat,
}

impl Normal {
    pub fn new(n: usize) -> Self {
        Normal {
            gram: CMat::zeros(n, n),
        }
    }

    pub fn add(&mut self, l: &CMat) {
        self.gram += l.adjoint() * l;
    }

    /// Kernel vectors; eigenvalues below `tol²` count as zero, matching a
    /// residual of at most `tol` per unit vector. The threshold never drops
    /// below the eigensolver's own rounding floor, which scales with the
    /// largest eigenvalue.
    pub fn kernel(&self, tol: f64) -> Vec<CVec> {
        let scale = self.gram.diagonal().iter().map(|z| z.re).sum::<f64>();
        let floor = 1e3 * f64::EPSILON * scale;
        psd_kernel(&self.gram, (tol * tol).max(floor))
    }
}

/// Column-major vectorization, `vec(X)[i + d j] = X[i, j]`.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().copied())
}

pub fn unvectorize(v: &CVec, d: usize) -> CMat {
    CMat::from_iterator(d, d, v.iter().copied())
}

/// Matrix of `X ↦ a X b` on column-major vectorizations: `bᵀ ⊗ a`.
pub fn sandwich_operator(a: &CMat, b: &CMat) -> CMat {
    b.transpose().kronecker(a)
}

/// Matrix of `X ↦ a X − X b`.
pub fn sylvester_operator(a: &CMat, b: &CMat) -> CMat {
    let d = a.nrows();
    sandwich_operator(a, &identity(d)) - sandwich_operator(&identity(d), b)
}

/// Unitary factor `W V*` of the polar decomposition `m = W Σ V*`, if `m` is
/// invertible with smallest singular value above `tol`.
pub fn polar_unitary(m: &CMat, tol: f64) -> Option<CMat> {
    let svd = m.clone().svd(true, true);
    if svd.singular_values.min() <= tol {
        return None;
    }
    Some(svd.u? * svd.v_t?)
}

/// `exp(i h)` for Hermitian `h`, via the spectral decomposition.
pub fn exp_i_hermitian(h: &CMat) -> CMat {
    let sym = (h + h.adjoint()) * Complex64::from(0.5);
    let eig = SymmetricEigen::new(sym);
    let diag = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, l)));
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

/// Integer power, negative exponents through the adjoint (for unitaries).
pub fn unitary_power(u: &CMat, k: i64) -> CMat {
    let base = if k < 0 { u.adjoint() } else { u.clone() };
    let mut out = identity(u.nrows());
    for _ in 0..k.unsigned_abs() {
        out = &base * out;
    }
    out
}

/// Kronecker product of a list of matrices, leftmost factor most
/// significant.
pub fn kron_all(factors: &[CMat]) -> CMat {
    let mut out = identity(1);
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Pauli matrices X, Y, Z.
pub fn paulis() -> [CMat; 3] {
    let z0 = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z0, one, one, z0]),
        CMat::from_row_slice(2, 2, &[z0, -i, i, z0]),
        CMat::from_row_slice(2, 2, &[one, z0, z0, -one]),
    ]
}
