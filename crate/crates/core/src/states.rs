//! Bipartite states: pure states and their Schmidt forms, density operators,
//! the maximally entangled state and the isotropic family.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{dimension_err, domain_err, Result};
use crate::qlinalg::{self, hermitian_eig, partial_trace, ComplexMatrix, Subsystem};

/// Schmidt coefficients below this are clamped to zero.
pub const SCHMIDT_CLAMP: f64 = 1e-12;

/// Slack on the `F ≤ 1/d` separability test.
pub const SEPARABILITY_SLACK: f64 = 1e-12;

const NORM_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-8;

/// Pure state on a `d_a × d_b` tensor space, amplitude index `i·d_b + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureBipartiteState {
    d_a: usize,
    d_b: usize,
    amplitudes: Vec<C64>,
}

impl PureBipartiteState {
    /// Validates unit norm.
    pub fn new(d_a: usize, d_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_shape(d_a, d_b, &amplitudes)?;
        let norm = norm2(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return domain_err(format!("state norm is {norm}, expected 1"));
        }
        Ok(Self { d_a, d_b, amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(d_a: usize, d_b: usize, amplitudes: Vec<C64>) -> Result<Self> {
        Self::check_shape(d_a, d_b, &amplitudes)?;
        let norm = norm2(&amplitudes);
        if !(norm > 0.0 && norm.is_finite()) {
            return domain_err("cannot normalise a zero or non-finite vector");
        }
        Ok(Self { d_a, d_b, amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() })
    }

    fn check_shape(d_a: usize, d_b: usize, amplitudes: &[C64]) -> Result<()> {
        if d_a == 0 || d_b == 0 {
            return dimension_err("subsystem dimensions must be positive");
        }
        if amplitudes.len() != d_a * d_b {
            return dimension_err(format!("{} amplitudes for a {d_a}x{d_b} system", amplitudes.len()));
        }
        Ok(())
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let amps = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        Self::normalized(a.len(), b.len(), amps)
    }

    /// Uniformly random pure state.
    pub fn random<R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> Self {
        let amps = (0..d_a * d_b).map(|_| qlinalg::complex_gaussian(rng)).collect();
        Self::normalized(d_a, d_b, amps).expect("gaussian vector is nonzero")
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Coefficient matrix `M` with `|Ψ⟩ = Σ M_ik |i⟩|k⟩`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_row_major(self.d_a, self.d_b, self.amplitudes.clone()).expect("finite amplitudes")
    }

    /// Reduced density operator on the kept subsystem.
    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        let m = self.coefficient_matrix();
        match keep {
            Subsystem::A => &m * &m.adjoint(),
            Subsystem::B => &m.transpose() * &m.conj(),
        }
    }

    /// The smaller of the two subsystems (A on ties).
    pub fn smaller_subsystem(&self) -> Subsystem {
        if self.d_a <= self.d_b {
            Subsystem::A
        } else {
            Subsystem::B
        }
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: ComplexMatrix::outer(&self.amplitudes).expect("finite amplitudes"),
            d_a: self.d_a,
            d_b: self.d_b,
        }
    }

    /// `(U_A ⊗ U_B)|Ψ⟩`.
    pub fn apply_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        if u_a.rows() != self.d_a || u_a.cols() != self.d_a || u_b.rows() != self.d_b || u_b.cols() != self.d_b {
            return dimension_err("local operator sizes do not match the subsystems");
        }
        let m = &(u_a * &self.coefficient_matrix()) * &u_b.transpose();
        Self::normalized(self.d_a, self.d_b, m.to_row_major())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Descending squared Schmidt coefficients summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtVector(Vec<f64>);

impl SchmidtVector {
    /// Validates entries in `[0, 1]`, descending, summing to 1 within 1e-12.
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return dimension_err("empty Schmidt vector");
        }
        if mu.iter().any(|&x| !(-SCHMIDT_CLAMP..=1.0 + SCHMIDT_CLAMP).contains(&x)) {
            return domain_err("Schmidt coefficients must lie in [0, 1]");
        }
        if mu.windows(2).any(|w| w[0] < w[1] - SCHMIDT_CLAMP) {
            return domain_err("Schmidt coefficients must be descending");
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return domain_err(format!("Schmidt coefficients sum to {sum}"));
        }
        Ok(Self(mu.into_iter().map(|x| x.clamp(0.0, 1.0)).collect()))
    }

    /// Sorts, clamps entries below [`SCHMIDT_CLAMP`] to zero and renormalises.
    pub fn from_weights(mut w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return dimension_err("empty Schmidt vector");
        }
        if w.iter().any(|x| !x.is_finite()) {
            return domain_err("non-finite Schmidt weight");
        }
        for x in w.iter_mut() {
            if *x < SCHMIDT_CLAMP {
                *x = 0.0;
            }
        }
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            return domain_err("Schmidt weights sum to zero");
        }
        w.iter_mut().for_each(|x| *x /= sum);
        w.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(w))
    }

    pub fn uniform(d: usize) -> Self {
        Self(vec![1.0 / d as f64; d])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ_k √μ_k`.
    pub fn root_sum(&self) -> f64 {
        self.0.iter().map(|x| x.sqrt()).sum()
    }
}

/// `|Ψ⟩ = Σ_j √μ_j (U_A e_j) ⊗ (U_B e_j)`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub mu: SchmidtVector,
    pub u_a: ComplexMatrix,
    pub u_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<C64> {
        let (da, db) = (self.u_a.rows(), self.u_b.rows());
        let mut amps = vec![C64::new(0.0, 0.0); da * db];
        for (j, &m) in self.mu.as_slice().iter().enumerate() {
            let s = m.sqrt();
            for i in 0..da {
                for k in 0..db {
                    amps[i * db + k] += s * self.u_a[(i, j)] * self.u_b[(k, j)];
                }
            }
        }
        amps
    }
}

/// Schmidt decomposition via the SVD of the coefficient matrix.
pub fn schmidt_decompose(psi: &PureBipartiteState) -> SchmidtDecomposition {
    let s = qlinalg::svd(&psi.coefficient_matrix());
    let weights: Vec<f64> = s.singular_values.iter().map(|x| x * x).collect();
    let mu = SchmidtVector::from_weights(weights).expect("unit-norm state has nonzero weights");
    // M = U Σ V†  ⇒  |Ψ⟩ = Σ σ_j u_j ⊗ conj(v_j)
    SchmidtDecomposition {
        mu,
        u_a: qlinalg::complete_unitary(&s.u),
        u_b: qlinalg::complete_unitary(&s.v.conj()),
    }
}

/// Unit-trace positive semidefinite operator on a `d_a × d_b` space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    d_a: usize,
    d_b: usize,
}

impl DensityOperator {
    /// Validates Hermiticity (1e-10), eigenvalues ≥ −1e-10 and unit trace (1e-12).
    pub fn new(matrix: ComplexMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        let n = d_a * d_b;
        if matrix.rows() != n || matrix.cols() != n {
            return dimension_err(format!("{}x{} matrix for a {d_a}x{d_b} system", matrix.rows(), matrix.cols()));
        }
        let eig = hermitian_eig(&matrix)?;
        if let Some(&min) = eig.eigenvalues.last() {
            if min < -PSD_TOL {
                return domain_err(format!("density operator has eigenvalue {min}"));
            }
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return domain_err(format!("density operator has trace {tr}"));
        }
        Ok(Self { matrix: matrix.hermitian_part(), d_a, d_b })
    }

    /// Random full-rank state `G G† / tr(G G†)` with Ginibre `G`.
    pub fn random<R: Rng + ?Sized>(d_a: usize, d_b: usize, rng: &mut R) -> Self {
        let n = d_a * d_b;
        Self::random_rank(d_a, d_b, n, rng)
    }

    /// Random state of the given rank.
    pub fn random_rank<R: Rng + ?Sized>(d_a: usize, d_b: usize, rank: usize, rng: &mut R) -> Self {
        let g = qlinalg::ginibre(d_a * d_b, rank, rng);
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        Self { matrix: m.scale_real(1.0 / tr).hermitian_part(), d_a, d_b }
    }

    /// Convex combination `Σ p_i ρ_i`.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return domain_err("empty mixture");
        };
        let (d_a, d_b) = first.dims();
        let mut acc = ComplexMatrix::zeros(d_a * d_b, d_a * d_b);
        for (p, rho) in parts {
            if rho.dims() != (d_a, d_b) {
                return dimension_err("mixture components have different dimensions");
            }
            if *p < 0.0 {
                return domain_err("negative mixture weight");
            }
            acc = &acc + &rho.matrix.scale_real(*p);
        }
        Self::new(acc, d_a, d_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_a, self.d_b)
    }

    pub fn marginal(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(&self.matrix, (self.d_a, self.d_b), keep).expect("dims match by construction")
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
    pub fn conjugate_local(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        let u = qlinalg::kron(u_a, u_b)?;
        if u.rows() != self.matrix.rows() {
            return dimension_err("local operator sizes do not match the subsystems");
        }
        Self::new(&(&u * &self.matrix) * &u.adjoint(), self.d_a, self.d_b)
    }
}

/// `(1/√d) Σ_j |j⟩|j⟩`.
pub fn max_entangled(d: usize) -> Result<PureBipartiteState> {
    if d < 2 {
        return dimension_err(format!("maximally entangled state needs d >= 2, got {d}"));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    for j in 0..d {
        amps[j * d + j] = C64::new(amp, 0.0);
    }
    Ok(PureBipartiteState { d_a: d, d_b: d, amplitudes: amps })
}

fn check_fidelity(f: f64) -> Result<f64> {
    if !(f.is_finite() && (-NORM_TOL..=1.0 + NORM_TOL).contains(&f)) {
        return domain_err(format!("fidelity {f} outside [0, 1]"));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Isotropic state stored as `(d, F)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsotropicState {
    d: usize,
    fidelity: f64,
}

impl IsotropicState {
    pub fn new(d: usize, fidelity: f64) -> Result<Self> {
        if d < 2 {
            return dimension_err(format!("isotropic states need d >= 2, got {d}"));
        }
        Ok(Self { d, fidelity: check_fidelity(fidelity)? })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fidelity(&self) -> f64 {
        self.fidelity
    }

    pub fn is_separable(&self) -> bool {
        self.fidelity <= 1.0 / self.d as f64 + SEPARABILITY_SLACK
    }

    /// `ρ_F = (1−F)/(d²−1)·(I − P₊) + F·P₊`.
    pub fn to_density(&self) -> DensityOperator {
        let d = self.d;
        let n = d * d;
        let f = self.fidelity;
        let background = (1.0 - f) / (n as f64 - 1.0);
        let inv_d = 1.0 / d as f64;
        let coeff = (f - background) * inv_d;
        // P₊ has entries 1/d between |jj⟩ and |kk⟩
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            let mut v = if r == c { background } else { 0.0 };
            if r % (d + 1) == 0 && c % (d + 1) == 0 {
                v += coeff;
            }
            C64::new(v, 0.0)
        })
        .expect("finite entries");
        DensityOperator { matrix, d_a: d, d_b: d }
    }
}

/// Materialised isotropic density operator.
pub fn isotropic(d: usize, fidelity: f64) -> Result<DensityOperator> {
    Ok(IsotropicState::new(d, fidelity)?.to_density())
}

/// `⟨Ψ+|ρ|Ψ+⟩`.
pub fn fidelity_with_max_entangled(rho: &DensityOperator) -> Result<f64> {
    let (da, db) = rho.dims();
    if da != db {
        return dimension_err(format!("fidelity with |Ψ+⟩ needs d_A = d_B, got {da}x{db}"));
    }
    let d = da;
    let m = rho.matrix();
    let mut s = C64::new(0.0, 0.0);
    for j in 0..d {
        for k in 0..d {
            s += m[(j * d + j, k * d + k)];
        }
    }
    let f = s.re / d as f64;
    Ok(f.clamp(0.0, 1.0))
}

/// Twirl onto the isotropic family, computed from the fidelity alone.
pub fn twirl(rho: &DensityOperator) -> Result<IsotropicState> {
    let f = fidelity_with_max_entangled(rho)?;
    IsotropicState::new(rho.dims().0, f)
}

/// `(1/d)|Σ_k √μ_k V_kk|²`.
pub fn schmidt_fidelity(mu: &SchmidtVector, v: &ComplexMatrix) -> Result<f64> {
    let d = mu.len();
    if v.rows() != d || v.cols() != d {
        return dimension_err(format!("V is {}x{}, Schmidt vector has length {d}", v.rows(), v.cols()));
    }
    let res = v.unitarity_residual();
    if res > UNITARY_TOL {
        return domain_err(format!("V is not unitary (residual {res:e})"));
    }
    let s: C64 = mu.as_slice().iter().enumerate().map(|(k, m)| m.sqrt() * v[(k, k)]).sum();
    Ok(s.norm_sqr() / d as f64)
}

/// `F ≤ 1/d` with [`SEPARABILITY_SLACK`].
pub fn is_isotropic_separable(d: usize, fidelity: f64) -> Result<bool> {
    Ok(IsotropicState::new(d, fidelity)?.is_separable())
}
