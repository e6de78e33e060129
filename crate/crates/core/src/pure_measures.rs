//! Pure-state measures: I-concurrence, tangle and entanglement of formation.
//!
//! All three are functions of the spectrum of either marginal. The smaller
//! marginal is used for evaluation. Entropies are in bits.

use std::fmt;

use crate::qlinalg::{hermitian_eigenvalues, ComplexMatrix, Subsystem};
use crate::states::{PureBipartiteState, SchmidtVector};

/// Which pure-state measure (and which convex roof) is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Concurrence,
    Tangle,
    Eof,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Concurrence => "concurrence",
            Measure::Tangle => "tangle",
            Measure::Eof => "eof",
        })
    }
}

/// A measure value tagged with the measure it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: Measure,
}

impl MeasureValue {
    /// Largest value the measure can take on a system whose smaller factor has
    /// dimension `d`.
    pub fn upper_bound(measure: Measure, d: usize) -> f64 {
        let d = d as f64;
        match measure {
            Measure::Concurrence => (2.0 * (d - 1.0) / d).sqrt(),
            Measure::Tangle => 2.0 * (d - 1.0) / d,
            Measure::Eof => d.log2(),
        }
    }
}

/// `-x log₂ x` with `0 log 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// `H₂(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    xlogx(x) + xlogx(1.0 - x)
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| xlogx(x)).sum()
}

/// `2(1 − tr ρ²)` for a unit-trace Hermitian operator.
pub fn tangle_functional(rho: &ComplexMatrix) -> f64 {
    2.0 * (1.0 - (rho * rho).trace().re)
}

fn concurrence_of_marginal(rho: &ComplexMatrix) -> f64 {
    tangle_functional(rho).max(0.0).sqrt()
}

/// I-concurrence computed from a chosen marginal.
pub fn pure_concurrence_via(psi: &PureBipartiteState, side: Subsystem) -> f64 {
    concurrence_of_marginal(&psi.marginal(side))
}

/// `2[1 − tr ρ_A²]` written as `4 Σ |2×2 minors of M|²` over the coefficient
/// matrix `M`, which avoids the cancellation in `1 − tr ρ_A²` near product
/// states.
fn tangle_from_minors(psi: &PureBipartiteState) -> f64 {
    let (da, db) = psi.dims();
    let a = psi.amplitudes();
    let mut s = 0.0;
    for i in 0..da {
        for j in i + 1..da {
            for k in 0..db {
                for l in k + 1..db {
                    let minor = a[i * db + k] * a[j * db + l] - a[i * db + l] * a[j * db + k];
                    s += minor.norm_sqr();
                }
            }
        }
    }
    4.0 * s
}

/// `√(2[1 − tr ρ_A²])`.
pub fn pure_concurrence(psi: &PureBipartiteState) -> MeasureValue {
    MeasureValue { value: tangle_from_minors(psi).sqrt(), measure: Measure::Concurrence }
}

/// `2[1 − tr ρ_A²]`, the squared I-concurrence.
pub fn pure_tangle(psi: &PureBipartiteState) -> MeasureValue {
    MeasureValue { value: tangle_from_minors(psi), measure: Measure::Tangle }
}

/// `2(1 − Σ μ_j²)`.
pub fn tangle_from_schmidt(mu: &SchmidtVector) -> MeasureValue {
    let sq: f64 = mu.as_slice().iter().map(|m| m * m).sum();
    MeasureValue { value: (2.0 * (1.0 - sq)).max(0.0), measure: Measure::Tangle }
}

/// `4 Σ_{j<k} μ_j μ_k`, the pairwise form of [`tangle_from_schmidt`].
pub fn tangle_from_schmidt_pairs(mu: &SchmidtVector) -> f64 {
    let m = mu.as_slice();
    let mut s = 0.0;
    for j in 0..m.len() {
        for k in j + 1..m.len() {
            s += m[j] * m[k];
        }
    }
    4.0 * s
}

/// Von Neumann entropy (bits) of a chosen marginal.
pub fn pure_eof_via(psi: &PureBipartiteState, side: Subsystem) -> f64 {
    let ev = hermitian_eigenvalues(&psi.marginal(side)).expect("marginals are Hermitian");
    shannon_entropy(&ev).max(0.0)
}

/// Entropy of entanglement `S(ρ_A)` in bits.
pub fn pure_eof(psi: &PureBipartiteState) -> MeasureValue {
    MeasureValue { value: pure_eof_via(psi, psi.smaller_subsystem()), measure: Measure::Eof }
}

/// `S(ρ_A)` from the Schmidt vector.
pub fn eof_from_schmidt(mu: &SchmidtVector) -> f64 {
    shannon_entropy(mu.as_slice())
}

/// Evaluates `measure` on a pure state.
pub fn evaluate(measure: Measure, psi: &PureBipartiteState) -> f64 {
    match measure {
        Measure::Concurrence => pure_concurrence(psi).value,
        Measure::Tangle => pure_tangle(psi).value,
        Measure::Eof => pure_eof(psi).value,
    }
}
