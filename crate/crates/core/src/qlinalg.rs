//! Dense complex linear algebra for small bipartite operators.
//!
//! [`ComplexMatrix`] wraps a `nalgebra` dense matrix and rejects non-finite
//! entries at construction. Everything here is a pure function of its inputs;
//! randomness only enters through explicit seeds or caller-provided RNGs.

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{dimension_err, Error, Result};

/// Largest side length [`kron`] will produce by default (a 64×64 joint system).
pub const MAX_DIMENSION: usize = 4096;

/// Absolute Hermiticity slack absorbed by symmetrisation in [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

/// Which tensor factor of a bipartite space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return dimension_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            ));
        }
        Self::from_nalgebra(DMatrix::from_row_slice(rows, cols, &entries))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Wraps a matrix the caller knows to be finite (results of arithmetic on
    /// finite inputs of bounded size).
    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::from_nalgebra(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_complex_diagonal(diag: &[C64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    /// Projector `|v⟩⟨v|` (no normalisation applied).
    pub fn outer(v: &[C64]) -> Result<Self> {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Entrywise max-norm of the difference; `INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// `max |H - H†|` for a square matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `max |U†U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint() * self;
        gram.max_abs_diff(&Self::identity(self.cols()))
    }

    /// `(H + H†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &self * rhs
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Hermitian eigendecomposition with eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the same order as `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lam = ComplexMatrix::from_diagonal(&self.eigenvalues).expect("finite eigenvalues");
        &(&self.eigenvectors * &lam) * &self.eigenvectors.adjoint()
    }
}

/// Singular value decomposition `m = U Σ V†` in thin form.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s = ComplexMatrix::from_diagonal(&self.singular_values).expect("finite singular values");
        &(&self.u * &s) * &self.v.adjoint()
    }
}

/// Kronecker product with the default [`MAX_DIMENSION`] limit.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, MAX_DIMENSION)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= max_dim && c <= max_dim => Ok(ComplexMatrix::wrap(a.0.kronecker(&b.0))),
        _ => dimension_err(format!(
            "kron of {}x{} and {}x{} exceeds the maximum side {max_dim}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )),
    }
}

/// Reduced operator on the kept subsystem of a `d_a × d_b` operator.
pub fn partial_trace(rho: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if rho.rows() != n || rho.cols() != n {
        return dimension_err(format!(
            "operator is {}x{} but dims ({da}, {db}) need side {n}",
            rho.rows(),
            rho.cols()
        ));
    }
    let out = match keep {
        Subsystem::A => DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => DMatrix::from_fn(db, db, |k, l| (0..da).map(|i| rho[(i * db + k, i * db + l)]).sum()),
    };
    Ok(ComplexMatrix::wrap(out))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs within [`HERMITIAN_TOL`] of Hermitian (relative to `max(1, ‖h‖_max)`)
/// are symmetrised first; larger deviations are rejected.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return dimension_err(format!("eigendecomposition of a {}x{} matrix", h.rows(), h.cols()));
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.rows();
    if n == 0 {
        return Ok(EigenDecomposition { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }
    let sym = h.hermitian_part();
    let eig = nalgebra::SymmetricEigen::new(sym.0);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors: ComplexMatrix::wrap(vecs) })
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(h).map(|e| e.eigenvalues)
}

/// Thin SVD with singular values sorted in descending order.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(m.rows(), 0),
            singular_values: vec![],
            v: ComplexMatrix::zeros(m.cols(), 0),
        };
    }
    let dec = m.0.clone().svd(true, true);
    let u = dec.u.expect("left singular vectors requested");
    let v_t = dec.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]));
    let singular_values = order.iter().map(|&i| dec.singular_values[i].max(0.0)).collect();
    let u_sorted = DMatrix::from_fn(m.rows(), k, |r, c| u[(r, order[c])]);
    let v_sorted = DMatrix::from_fn(m.cols(), k, |r, c| v_t[(order[c], r)].conj());
    Svd { u: ComplexMatrix::wrap(u_sorted), singular_values, v: ComplexMatrix::wrap(v_sorted) }
}

/// Extends a set of orthonormal columns to a full unitary by Gram–Schmidt
/// against the standard basis.
pub fn complete_unitary(cols: &ComplexMatrix) -> ComplexMatrix {
    let n = cols.rows();
    let mut basis: Vec<Vec<C64>> = (0..cols.cols()).map(|j| cols.column(j)).collect();
    let mut e = 0;
    while basis.len() < n && e < n {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[e] = C64::new(1.0, 0.0);
        // two passes keep the result orthonormal to working precision
        for _ in 0..2 {
            for b in &basis {
                let overlap: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
        e += 1;
    }
    ComplexMatrix::wrap(DMatrix::from_fn(n, n, |i, j| basis[j][i]))
}

/// Standard complex Gaussian sample with `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows × cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::wrap(DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng)))
}

/// Haar-distributed unitary drawn from `rng`.
///
/// QR-orthonormalises a Ginibre matrix and rephases the columns so the
/// triangular factor has a positive real diagonal.
pub fn haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let z = ginibre(d, d, rng);
    let qr = z.0.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..d)
        .map(|i| {
            let rii = r[(i, i)];
            if rii.norm() > 0.0 {
                rii / rii.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        })
        .collect();
    ComplexMatrix::wrap(DMatrix::from_fn(d, d, |i, j| q[(i, j)] * phases[j]))
}

/// Haar-random `d × d` unitary, deterministic in `seed`.
pub fn haar_unitary(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(d, &mut rng)
}

/// Orthonormalises the columns of `a` (modified Gram–Schmidt, two passes).
///
/// Returns `None` when the columns are numerically dependent.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    let rows = a.rows();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        let original = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for b in &cols {
                let overlap: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 1e-12 * original.max(1e-300) || norm == 0.0 {
            return None;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    Some(ComplexMatrix::wrap(DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])))
}
