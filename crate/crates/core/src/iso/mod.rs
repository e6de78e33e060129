//! Closed forms for isotropic states.
//!
//! The minimum tangle of a pure state with fixed fidelity `F` to `|Ψ+⟩` is
//! attained on one of finitely many extremum branches `(n, m)`: `n` Schmidt
//! coefficients equal `γ²`, `m` equal `δ²` and the rest vanish. Everything in
//! this module is evaluated from the explicit radical solutions for `γ` and
//! `δ`; nothing is solved numerically except the location of the inflection
//! point and the re-derivation of the tangent point used for cross-checks.

mod curve;

pub use curve::{
    concurrence_curve, eof_iso_curve, tangle_curve, PiecewiseCurve, Segment, SegmentKind,
};

use crate::error::{dimension_err, domain_err, Error, Result};
use crate::pure_measures::binary_entropy;
use crate::states::SchmidtVector;

/// Slack used when clamping `F` onto a closed branch domain.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// An extremum family `(n, m)` of the constrained minimisation in dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtremumBranch {
    n: usize,
    m: usize,
    d: usize,
}

impl ExtremumBranch {
    /// Requires `n ≥ 1` and `n + m ≤ d`.
    pub fn new(n: usize, m: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return dimension_err(format!("d must be at least 2, got {d}"));
        }
        if n < 1 || n + m > d {
            return domain_err(format!("branch ({n}, {m}) is not admissible for d = {d}"));
        }
        Ok(Self { n, m, d })
    }

    /// The `(1, d−1)` branch that carries the minimum.
    pub fn vertex(d: usize) -> Result<Self> {
        Self::new(1, d.saturating_sub(1), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Fidelity range `[n/d, (n+m)/d]` on which the branch exists.
    pub fn fidelity_range(&self) -> (f64, f64) {
        let d = self.d as f64;
        (self.n as f64 / d, (self.n + self.m) as f64 / d)
    }

    /// Whether the branch has a real, nonnegative solution at `fidelity`.
    pub fn admits(&self, fidelity: f64) -> bool {
        branch_solution(*self, fidelity).is_ok()
    }

    /// All admissible `(n, m)` pairs for dimension `d`, `m = 0` included.
    pub fn enumerate(d: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=d {
            for m in 0..=d - n {
                out.push(Self { n, m, d });
            }
        }
        out
    }
}

/// `(γ, δ)` on one branch at one fidelity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSolution {
    pub branch: ExtremumBranch,
    pub fidelity: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `√((1−F)/F)`.
    pub w: f64,
}

impl BranchSolution {
    /// `n·γ² + m·δ² − 1` and `n·γ + m·δ − √(Fd)`.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        let (n, m) = (self.branch.n as f64, self.branch.m as f64);
        let fd = self.fidelity * self.branch.d as f64;
        (
            n * self.gamma * self.gamma + m * self.delta * self.delta - 1.0,
            n * self.gamma + m * self.delta - fd.sqrt(),
        )
    }

    /// `2(1 − nγ⁴ − mδ⁴)`.
    pub fn tangle(&self) -> f64 {
        let (n, m) = (self.branch.n as f64, self.branch.m as f64);
        (2.0 * (1.0 - n * self.gamma.powi(4) - m * self.delta.powi(4))).max(0.0)
    }

    /// The Schmidt vector `(γ², …, δ², …, 0, …)` of length `d`.
    pub fn schmidt_vector(&self) -> SchmidtVector {
        let mut mu = vec![0.0; self.branch.d];
        for (k, x) in mu.iter_mut().enumerate() {
            if k < self.branch.n {
                *x = self.gamma * self.gamma;
            } else if k < self.branch.n + self.branch.m {
                *x = self.delta * self.delta;
            }
        }
        SchmidtVector::from_weights(mu).expect("branch weights are positive")
    }
}

/// Radical solution of `nγ² + mδ² = 1`, `nγ + mδ = √(fd)` with the sign that
/// makes `γ ≥ δ`, for continuous `n ≥ 1`, `m > 0`, `n ≤ fd ≤ n + m`.
///
/// `δ` is written as `(fd − n)/(m√fd + √(nm(n+m−fd)))`, which is the same
/// quantity without the cancellation near `fd = n`.
pub(crate) fn gamma_delta(n: f64, m: f64, fd: f64) -> (f64, f64) {
    let s = fd.sqrt();
    let r = (n * m * (n + m - fd)).max(0.0).sqrt();
    let gamma = (n * s + r) / (n * (n + m));
    let delta = (fd - n).max(0.0) / (m * s + r);
    (gamma, delta)
}

fn check_fidelity(fidelity: f64) -> Result<()> {
    if !fidelity.is_finite() || !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&fidelity) {
        return domain_err(format!("fidelity {fidelity} outside [0, 1]"));
    }
    Ok(())
}

/// `γ_nm(F)`, `δ_nm(F)` for an integer branch.
pub fn branch_solution(branch: ExtremumBranch, fidelity: f64) -> Result<BranchSolution> {
    check_fidelity(fidelity)?;
    let d = branch.d as f64;
    let (n, m) = (branch.n as f64, branch.m as f64);
    let tol = DOMAIN_SLACK * d;
    let fd = fidelity * d;
    if fd < n - tol || fd > n + m + tol {
        return domain_err(format!(
            "F = {fidelity} outside [{}, {}] for branch ({}, {})",
            n / d,
            (n + m) / d,
            branch.n,
            branch.m
        ));
    }
    let fd = fd.clamp(n, n + m);
    let fidelity = fd / d;
    let (gamma, delta) = if branch.m == 0 {
        if (fidelity * d - n).abs() > tol {
            return domain_err(format!("branch ({}, 0) only exists at F = {}", branch.n, n / d));
        }
        (1.0 / n.sqrt(), 0.0)
    } else {
        gamma_delta(n, m, fd)
    };
    Ok(BranchSolution { branch, fidelity, gamma, delta, w: ((1.0 - fidelity) / fidelity).sqrt() })
}

/// `C²_nm(F) = 2(1 − nγ⁴ − mδ⁴)`.
pub fn branch_tangle(branch: ExtremumBranch, fidelity: f64) -> Result<f64> {
    branch_solution(branch, fidelity).map(|s| s.tangle())
}

/// `C_nm(F) = √C²_nm(F)`.
pub fn branch_concurrence(branch: ExtremumBranch, fidelity: f64) -> Result<f64> {
    branch_tangle(branch, fidelity).map(f64::sqrt)
}

/// `C²_nm` with `n` and `m` treated as continuous parameters.
pub fn branch_tangle_continuous(n: f64, m: f64, d: usize, fidelity: f64) -> Result<f64> {
    let fd = check_continuous(n, m, d, fidelity)?;
    let (g, dl) = gamma_delta(n, m, fd);
    Ok(2.0 * (1.0 - n * g.powi(4) - m * dl.powi(4)))
}

fn check_continuous(n: f64, m: f64, d: usize, fidelity: f64) -> Result<f64> {
    check_fidelity(fidelity)?;
    let fd = fidelity * d as f64;
    let tol = DOMAIN_SLACK * d as f64;
    if !(n >= 1.0 && m > 0.0 && n + m <= d as f64 + tol) {
        return domain_err(format!("(n, m) = ({n}, {m}) outside the admissible region for d = {d}"));
    }
    if fd < n - tol || fd > n + m + tol {
        return domain_err(format!("Fd = {fd} outside [n, n+m] = [{n}, {}]", n + m));
    }
    Ok(fd.clamp(n, n + m))
}

/// Partial derivatives of `C²_nm` with respect to `n`, `m` and `u = m − n`
/// (at fixed `v = m + n`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPartials {
    pub d_n: f64,
    pub d_m: f64,
    pub d_u: f64,
}

/// Closed-form partials of `C²_nm(F)` on the parallelogram
/// `1 ≤ n ≤ Fd ≤ n + m ≤ d`.
///
/// `∂C²/∂u` is the directional derivative with `m = (v+u)/2`, `n = (v−u)/2`,
/// i.e. `−(γ+δ)(γ−δ)³`.
pub fn branch_partials(n: f64, m: f64, d: usize, fidelity: f64) -> Result<BranchPartials> {
    let fd = check_continuous(n, m, d, fidelity)?;
    let (g, dl) = gamma_delta(n, m, fd);
    let d_n = 2.0 * g * g * (g * g - 2.0 * dl * (g + dl));
    let d_m = 2.0 * dl * dl * (dl * dl - 2.0 * g * (g + dl));
    let d_u = -(g + dl) * (g - dl).powi(3);
    Ok(BranchPartials { d_n, d_m, d_u })
}

/// `(∂γ/∂n, ∂δ/∂n, ∂γ/∂m, ∂δ/∂m)`; these carry `1/(γ−δ)` and are singular on
/// the `n + m = Fd` edge.
pub fn gamma_delta_partials(n: f64, m: f64, d: usize, fidelity: f64) -> Result<[f64; 4]> {
    let fd = check_continuous(n, m, d, fidelity)?;
    let (g, dl) = gamma_delta(n, m, fd);
    let gap = g - dl;
    if gap <= 1e-12 {
        return Err(Error::SingularDerivative(format!("γ = δ at (n, m) = ({n}, {m}), F = {fidelity}")));
    }
    Ok([
        (2.0 * g * dl - g * g) / (2.0 * n * gap),
        -(g * g) / (2.0 * m * gap),
        (dl * dl) / (2.0 * n * gap),
        -(2.0 * g * dl - dl * dl) / (2.0 * m * gap),
    ])
}

/// Clamps `F` into `[1/d, 1]`, rejecting values more than 1e-12 outside.
pub(crate) fn check_iso_domain(fidelity: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return dimension_err(format!("d must be at least 2, got {d}"));
    }
    let lo = 1.0 / d as f64;
    if !fidelity.is_finite() || fidelity < lo - DOMAIN_SLACK {
        return domain_err(format!("C²(F) has no minimum for F = {fidelity} < 1/d = {lo}"));
    }
    if fidelity > 1.0 + DOMAIN_SLACK {
        return domain_err(format!("fidelity {fidelity} > 1"));
    }
    Ok(fidelity.clamp(lo, 1.0))
}

fn vertex_solution(fidelity: f64, d: usize) -> Result<BranchSolution> {
    let f = check_iso_domain(fidelity, d)?;
    branch_solution(ExtremumBranch::vertex(d)?, f)
}

/// `C²(F)`, the minimum pure-state tangle at singlet fidelity `F`.
pub fn csquared(fidelity: f64, d: usize) -> Result<f64> {
    vertex_solution(fidelity, d).map(|s| s.tangle())
}

/// `C(F) = √C²(F)`.
pub fn concurrence_function(fidelity: f64, d: usize) -> Result<f64> {
    csquared(fidelity, d).map(f64::sqrt)
}

/// `∂C²/∂F = 4√(d/F) γδ(γ+δ)` on the `(1, d−1)` branch.
pub fn csquared_d_f(fidelity: f64, d: usize) -> Result<f64> {
    let s = vertex_solution(fidelity, d)?;
    Ok(4.0 * (d as f64 / s.fidelity).sqrt() * s.gamma * s.delta * (s.gamma + s.delta))
}

/// `∂C²/∂F` written out in `w = √((1−F)/F)`.
pub fn csquared_d_f_explicit(fidelity: f64, d: usize) -> Result<f64> {
    let f = check_iso_domain(fidelity, d)?;
    let w = ((1.0 - f) / f).sqrt();
    let r = (d as f64 - 1.0).sqrt();
    Ok(8.0 * f / d as f64 * (1.0 + w * r) * (1.0 - w / r) * (1.0 + 0.5 * w * (r - 1.0 / r)))
}

/// `∂²C²/∂F²` as a function of `w`, expanded so that `d = 2` needs no limit.
fn csquared_d2_in_w(w: f64, d: usize) -> f64 {
    let df = d as f64;
    let r = (df - 1.0).sqrt();
    let lead = -6.0 * (df - 2.0) / (df * r);
    let lin = -4.0 * (df * df - 8.0 * df + 8.0) / (df * (df - 1.0));
    if d == 2 {
        return lin;
    }
    lead * (1.0 / w - 2.0 * w - w.powi(3) / 3.0) + lin
}

fn check_open_domain(fidelity: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return dimension_err(format!("d must be at least 2, got {d}"));
    }
    let lo = 1.0 / d as f64;
    if !(fidelity > lo && fidelity < 1.0) {
        return domain_err(format!("F = {fidelity} outside the open interval (1/d, 1)"));
    }
    Ok(fidelity)
}

/// `∂²C²/∂F²` on `1/d < F < 1`.
pub fn csquared_d2_f(fidelity: f64, d: usize) -> Result<f64> {
    let f = check_open_domain(fidelity, d)?;
    Ok(csquared_d2_in_w(((1.0 - f) / f).sqrt(), d))
}

/// `∂C/∂F` for `C(F) = √C²(F)` on `1/d < F ≤ 1`.
pub fn concurrence_d_f(fidelity: f64, d: usize) -> Result<f64> {
    let c = concurrence_function(fidelity, d)?;
    if c <= 0.0 {
        return domain_err("∂C/∂F is unbounded at the separability boundary");
    }
    Ok(csquared_d_f(fidelity, d)? / (2.0 * c))
}

/// `∂²C/∂F²` on `1/d < F < 1`.
pub fn concurrence_d2_f(fidelity: f64, d: usize) -> Result<f64> {
    let f = check_open_domain(fidelity, d)?;
    let c = concurrence_function(f, d)?;
    let d1 = csquared_d_f(f, d)?;
    let d2 = csquared_d2_f(f, d)?;
    Ok(d2 / (2.0 * c) - d1 * d1 / (4.0 * c.powi(3)))
}

/// The fidelity where `C²(F)` turns from convex to concave, `d ≥ 3`.
///
/// Bisects the sign of `∂²C²/∂F²` in `w ∈ (0, √(d−1))` down to `|Δw| ≤ 1e-12`.
pub fn inflection_point(d: usize) -> Result<f64> {
    if d < 2 {
        return dimension_err(format!("d must be at least 2, got {d}"));
    }
    if d == 2 {
        return Err(Error::NoInflection(d));
    }
    // concave (negative) near F = 1, i.e. small w; convex near F = 1/d
    let mut lo = 0.0;
    let mut hi = (d as f64 - 1.0).sqrt();
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if csquared_d2_in_w(mid, d) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    Ok(1.0 / (1.0 + w * w))
}

/// `4(d−1)/d²`, where the tangent from `(1, 2(d−1)/d)` touches `C²(F)`.
pub fn tangent_point(d: usize) -> f64 {
    let df = d as f64;
    4.0 * (df - 1.0) / (df * df)
}

/// `2d/(d−1)`, slope of the tangent line.
pub fn tangent_slope(d: usize) -> f64 {
    let df = d as f64;
    2.0 * df / (df - 1.0)
}

/// `2(2d−3)/(d(d−1))`, the value of `C²` at the tangent point.
pub fn tangent_value(d: usize) -> f64 {
    let df = d as f64;
    2.0 * (2.0 * df - 3.0) / (df * (df - 1.0))
}

/// `2(d−1)/d`, the tangle of a maximally entangled state.
pub fn max_tangle(d: usize) -> f64 {
    let df = d as f64;
    2.0 * (df - 1.0) / df
}

/// Tangent point re-derived numerically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentSolution {
    pub fidelity: f64,
    pub slope: f64,
    pub value: f64,
}

/// Solves `∂C²/∂F = [2(d−1)/d − C²(F)]/(1−F)` for the tangent point by a grid
/// scan for the first sign change followed by bisection. When no interior
/// root exists (`d = 2`, where `C²` is convex) the tangent point is `F = 1`.
pub fn solve_tangent_point(d: usize) -> Result<TangentSolution> {
    check_iso_domain(1.0, d)?;
    let lo_f = 1.0 / d as f64;
    let top = max_tangle(d);
    let g = |f: f64| -> Result<f64> { Ok(csquared_d_f(f, d)? * (1.0 - f) - (top - csquared(f, d)?)) };
    let steps = 4000;
    let h = (1.0 - lo_f) / steps as f64;
    let mut bracket = None;
    let mut prev = g(lo_f)?;
    for i in 1..steps {
        let f = lo_f + h * i as f64;
        let cur = g(f)?;
        if prev < 0.0 && cur >= 0.0 {
            bracket = Some((f - h, f));
            break;
        }
        prev = cur;
    }
    let fidelity = match bracket {
        None => 1.0,
        Some((mut a, mut b)) => {
            while b - a > 1e-15 {
                let mid = 0.5 * (a + b);
                if mid == a || mid == b {
                    break;
                }
                if g(mid)? < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        }
    };
    Ok(TangentSolution { fidelity, slope: csquared_d_f(fidelity, d)?, value: csquared(fidelity, d)? })
}

/// `E(F) = H₂(γ²) + (1−γ²) log₂(d−1)` on the `(1, d−1)` branch.
pub fn eof_curve_point(fidelity: f64, d: usize) -> Result<f64> {
    let s = vertex_solution(fidelity, d)?;
    let g2 = (s.gamma * s.gamma).min(1.0);
    let tail = if d > 2 { (1.0 - g2) * (d as f64 - 1.0).log2() } else { 0.0 };
    Ok(binary_entropy(g2) + tail)
}

/// Smallest `C²_nm(F)` over every admissible integer branch.
pub fn min_over_branches(fidelity: f64, d: usize) -> Result<(ExtremumBranch, f64)> {
    check_iso_domain(fidelity, d)?;
    ExtremumBranch::enumerate(d)
        .into_iter()
        .filter_map(|b| branch_tangle(b, fidelity).ok().map(|t| (b, t)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Domain(format!("no admissible branch at F = {fidelity}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: usize, m: usize, d: usize) -> ExtremumBranch {
        ExtremumBranch::new(n, m, d).unwrap()
    }

    #[test]
    fn branch_validation() {
        assert!(ExtremumBranch::new(0, 2, 3).is_err());
        assert!(ExtremumBranch::new(2, 2, 3).is_err());
        assert!(ExtremumBranch::new(1, 1, 1).is_err());
        assert_eq!(ExtremumBranch::enumerate(3).len(), 6);
    }

    #[test]
    fn vertex_branch_endpoints() {
        for d in 2..=8 {
            let s = branch_solution(ExtremumBranch::vertex(d).unwrap(), 1.0).unwrap();
            let x = 1.0 / (d as f64).sqrt();
            assert!((s.gamma - x).abs() < 1e-14 && (s.delta - x).abs() < 1e-14);
            assert_eq!(s.w, 0.0);
            let s = branch_solution(ExtremumBranch::vertex(d).unwrap(), 1.0 / d as f64).unwrap();
            assert!((s.gamma - 1.0).abs() < 1e-14 && s.delta.abs() < 1e-14);
        }
    }

    #[test]
    fn qutrit_branch_matches_w_parameterisation() {
        let f = 8.0 / 9.0;
        let s = branch_solution(b(1, 2, 3), f).unwrap();
        let w = (1.0f64 / 8.0).sqrt();
        assert!((s.w - w).abs() < 1e-15);
        let pre = (f / 3.0).sqrt();
        assert!((s.gamma - pre * (1.0 + w * 2f64.sqrt())).abs() < 1e-14);
        assert!((s.delta - pre * (1.0 - w / 2f64.sqrt())).abs() < 1e-14);
        let (r1, r2) = s.constraint_residuals();
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
    }

    #[test]
    fn branch_domain_errors() {
        assert!(matches!(branch_solution(b(2, 1, 3), 0.5), Err(Error::Domain(_))));
        assert!(matches!(branch_solution(b(1, 1, 3), 0.9), Err(Error::Domain(_))));
        assert!(matches!(branch_solution(b(2, 0, 3), 0.7), Err(Error::Domain(_))));
        let s = branch_solution(b(2, 0, 4), 0.5).unwrap();
        assert!((s.gamma - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((s.tangle() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_qubit_branch_is_square_of_linear() {
        for i in 0..=50 {
            let f = 0.5 + 0.01 * i as f64;
            let t = branch_tangle(b(1, 1, 2), f).unwrap();
            assert!((t - (2.0 * f - 1.0).powi(2)).abs() < 1e-12, "F={f}");
        }
    }

    #[test]
    fn constraints_hold_on_every_branch() {
        for d in 2..=7 {
            for br in ExtremumBranch::enumerate(d) {
                let (lo, hi) = br.fidelity_range();
                for k in 0..=20 {
                    let f = lo + (hi - lo) * k as f64 / 20.0;
                    if let Ok(s) = branch_solution(br, f) {
                        let (r1, r2) = s.constraint_residuals();
                        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "{br:?} F={f}");
                        assert!(s.gamma + 1e-15 >= s.delta && s.delta >= 0.0);
                        let t = s.tangle();
                        assert!((0.0..=max_tangle(d) + 1e-12).contains(&t));
                    }
                }
            }
        }
    }

    #[test]
    fn lower_sign_delta_is_upper_sign_gamma_of_swapped_branch() {
        // δ⁻_nm = (m√Fd + √(nm(n+m−Fd)))/(m(n+m)) = γ⁺_mn
        for &(n, m, d) in &[(1usize, 2usize, 3usize), (2, 3, 6), (1, 4, 5)] {
            let (nf, mf) = (n as f64, m as f64);
            for k in 1..10 {
                let fd = nf.max(mf) + (nf + mf - nf.max(mf)) * k as f64 / 10.0;
                let r = (nf * mf * (nf + mf - fd)).sqrt();
                let delta_lower = (mf * fd.sqrt() + r) / (mf * (nf + mf));
                let (gamma_swapped, _) = gamma_delta(mf, nf, fd);
                assert!((delta_lower - gamma_swapped).abs() < 1e-14, "({n},{m}) d={d}");
            }
        }
    }

    #[test]
    fn csquared_paper_point() {
        assert!((csquared(8.0 / 9.0, 3).unwrap() - 1.0).abs() < 1e-12);
        for d in 2..=9 {
            assert!(csquared(1.0 / d as f64, d).unwrap().abs() < 1e-14);
        }
        assert!(matches!(csquared(0.3, 3), Err(Error::Domain(_))));
        // roundoff just below 1/d is clamped
        assert!(csquared(1.0 / 3.0 - 1e-14, 3).is_ok());
    }

    #[test]
    fn csquared_is_the_minimum_over_all_branches() {
        for d in 2..=6 {
            let lo = 1.0 / d as f64;
            let mut f = lo;
            while f <= 1.0 + 1e-12 {
                let c2 = csquared(f.min(1.0), d).unwrap();
                let (_, best) = min_over_branches(f.min(1.0), d).unwrap();
                assert!(c2 <= best + 1e-12, "d={d} F={f}: vertex {c2} vs {best}");
                f += 1e-2;
            }
        }
    }

    #[test]
    fn derivative_forms_agree() {
        for d in 2..=10 {
            for k in 0..=40 {
                let f = 1.0 / d as f64 + (1.0 - 1.0 / d as f64) * k as f64 / 40.0;
                let a = csquared_d_f(f, d).unwrap();
                let b = csquared_d_f_explicit(f, d).unwrap();
                assert!((a - b).abs() < 1e-10, "d={d} F={f}: {a} vs {b}");
                assert!(a >= -1e-12);
            }
        }
        assert!(csquared_d_f(1.0 / 3.0, 3).unwrap().abs() < 1e-14);
        assert!((csquared_d_f(8.0 / 9.0, 3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn first_derivative_matches_finite_differences() {
        let h = 1e-6;
        for &(d, f) in &[(2usize, 0.7), (3, 0.5), (3, 0.95), (5, 0.33), (8, 0.8), (12, 0.6)] {
            let fd = (csquared(f + h, d).unwrap() - csquared(f - h, d).unwrap()) / (2.0 * h);
            assert!((fd - csquared_d_f(f, d).unwrap()).abs() < 1e-6, "d={d} F={f}");
        }
    }

    #[test]
    fn second_derivative_two_qubits_and_finite_differences() {
        for k in 1..50 {
            let f = 0.5 + 0.01 * k as f64;
            assert_eq!(csquared_d2_f(f, 2).unwrap(), 8.0);
        }
        let h = 1e-4;
        for &(d, f) in &[(3usize, 0.5), (3, 0.95), (4, 0.6), (6, 0.3), (10, 0.85)] {
            let fd = (csquared(f + h, d).unwrap() - 2.0 * csquared(f, d).unwrap() + csquared(f - h, d).unwrap()) / (h * h);
            assert!((fd - csquared_d2_f(f, d).unwrap()).abs() < 1e-4 * 10.0f64.max(fd.abs()), "d={d} F={f}");
        }
        assert!(csquared_d2_f(1.0, 3).is_err());
        assert!(csquared_d2_f(1.0 / 3.0, 3).is_err());
    }

    #[test]
    fn inflection_for_qutrits() {
        // high-precision root of the second derivative of C²(F) for d = 3
        let f = inflection_point(3).unwrap();
        assert!((f - 0.936_123_439_774_896_3).abs() < 1e-10);
        assert!(f > tangent_point(3) && f < 1.0);
        assert!(csquared_d2_f(f - 1e-4, 3).unwrap() > 0.0 && csquared_d2_f(f + 1e-4, 3).unwrap() < 0.0);
        assert!(matches!(inflection_point(2), Err(Error::NoInflection(2))));
    }

    #[test]
    fn second_derivative_changes_sign_once() {
        for d in 3..=10 {
            let top = (d as f64 - 1.0).sqrt();
            let n = (top / 1e-3) as usize;
            let signs: Vec<bool> = (1..n).map(|i| csquared_d2_in_w(i as f64 * 1e-3, d) > 0.0).collect();
            let changes = signs.windows(2).filter(|p| p[0] != p[1]).count();
            assert_eq!(changes, 1, "d={d}");
        }
    }

    #[test]
    fn inflection_matches_quartic_root() {
        // Newton on 1 + a w − 2w² − w⁴/3 from the right end of the bracket
        for d in 3..=12 {
            let df = d as f64;
            let a = 2.0 / 3.0 * (df * df - 8.0 * df + 8.0) / ((df - 2.0) * (df - 1.0).sqrt());
            let p = |w: f64| 1.0 + a * w - 2.0 * w * w - w.powi(4) / 3.0;
            let dp = |w: f64| a - 4.0 * w - 4.0 / 3.0 * w.powi(3);
            let mut w = (df - 1.0).sqrt();
            for _ in 0..100 {
                w -= p(w) / dp(w);
            }
            let f_root = 1.0 / (1.0 + w * w);
            assert!((inflection_point(d).unwrap() - f_root).abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn tangent_constants() {
        assert!((tangent_point(3) - 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(tangent_slope(3), 3.0);
        assert_eq!(tangent_value(3), 1.0);
        for d in 2..=10 {
            let f = tangent_point(d);
            assert!((csquared(f, d).unwrap() - tangent_value(d)).abs() < 1e-12);
            assert!((csquared_d_f(f, d).unwrap() - tangent_slope(d)).abs() < 1e-10);
            let num = solve_tangent_point(d).unwrap();
            assert!((num.fidelity - f).abs() < 1e-8, "d={d}: {} vs {f}", num.fidelity);
        }
    }

    #[test]
    fn eof_point_values() {
        for d in 2..=8 {
            assert!((eof_curve_point(1.0, d).unwrap() - (d as f64).log2()).abs() < 1e-12);
            assert!(eof_curve_point(1.0 / d as f64, d).unwrap().abs() < 1e-12);
        }
        // two qubits: Wootters' h((1 + √(1 − C²))/2) with C = 2F − 1
        let f = 0.75;
        let c = 2.0 * f - 1.0;
        let x: f64 = (1.0 + (1.0f64 - c * c).sqrt()) / 2.0;
        let h = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((eof_curve_point(f, 2).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn partials_match_finite_differences() {
        let (d, f) = (6usize, 0.6);
        let fd = f * d as f64;
        let h = 1e-6;
        for &(n, m) in &[(1.5, 3.0), (2.0, 2.5), (1.2, 4.5), (3.2, 2.0)] {
            assert!(n < fd && fd < n + m && n + m < d as f64);
            let p = branch_partials(n, m, d, f).unwrap();
            let dm = (branch_tangle_continuous(n, m + h, d, f).unwrap() - branch_tangle_continuous(n, m - h, d, f).unwrap()) / (2.0 * h);
            let dn = (branch_tangle_continuous(n + h, m, d, f).unwrap() - branch_tangle_continuous(n - h, m, d, f).unwrap()) / (2.0 * h);
            let du = (branch_tangle_continuous(n - h / 2.0, m + h / 2.0, d, f).unwrap()
                - branch_tangle_continuous(n + h / 2.0, m - h / 2.0, d, f).unwrap())
                / (2.0 * h);
            assert!((p.d_m - dm).abs() < 1e-6, "∂m at ({n},{m})");
            assert!((p.d_n - dn).abs() < 1e-6, "∂n at ({n},{m})");
            assert!((p.d_u - du).abs() < 1e-6, "∂u at ({n},{m})");
        }
    }

    #[test]
    fn partials_on_the_equal_coefficient_edge() {
        let (d, f) = (5usize, 0.6);
        let fd = f * d as f64;
        let p = branch_partials(1.0, fd - 1.0, d, f).unwrap();
        assert!(p.d_u.abs() < 1e-15);
        assert!(matches!(gamma_delta_partials(1.0, fd - 1.0, d, f), Err(Error::SingularDerivative(_))));
        assert!(gamma_delta_partials(1.0, 3.0, d, f).is_ok());
    }

    #[test]
    fn partial_signs_over_the_parallelogram() {
        let (d, f) = (5usize, 0.6);
        let fd = f * d as f64;
        for i in 0..=20 {
            let n = 1.0 + (fd - 1.0) * i as f64 / 20.0;
            for j in 0..=20 {
                let v = fd + (d as f64 - fd) * j as f64 / 20.0;
                let m = v - n;
                if m <= 0.0 {
                    continue;
                }
                let p = branch_partials(n, m, d, f).unwrap();
                let (g, dl) = gamma_delta(n, m, fd);
                assert!(p.d_m <= -6.0 * dl.powi(4) + 1e-14);
                if dl > 0.0 {
                    assert!(p.d_m < 0.0);
                }
                assert!(p.d_u <= 1e-15);
                let _ = g;
            }
        }
    }
}
