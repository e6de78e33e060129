//! Numerical oracles that re-derive the closed forms by direct search.
//!
//! - [`min_tangle_at_F`] minimises the pure-state tangle over Schmidt vectors
//!   at fixed fidelity with random-restart projected local search.
//! - [`convex_envelope`] builds the lower convex hull of sampled points.
//! - [`roof_upper_bound`] searches over ensemble decompositions of a density
//!   operator, parameterised by isometries acting on its eigen-ensemble.
//! - [`wootters_concurrence`] is the spin-flip formula for two qubits.
//!
//! Every stochastic routine takes an explicit seed. Restart `i` draws from its
//! own ChaCha stream, so results do not depend on how restarts are scheduled.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{dimension_err, domain_err, Error, Result};
use crate::iso::{check_iso_domain, PiecewiseCurve, Segment};
use crate::pure_measures::{evaluate, Measure};
use crate::qlinalg::{complex_gaussian, hermitian_eig, ComplexMatrix};
use crate::states::{DensityOperator, PureBipartiteState, SchmidtVector};
use crate::C64;

/// Default number of random restarts.
pub const DEFAULT_RESTARTS: usize = 32;

const PG_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;
const STABLE_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-8;

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Minimum over seeded restarts, ties broken by restart index, together with
/// the running minimum after each restart.
fn combine<T>(results: Vec<(f64, T)>) -> (f64, T, Vec<f64>) {
    let mut history = Vec::with_capacity(results.len());
    let mut best: Option<(f64, T)> = None;
    for (v, payload) in results {
        let better = match &best {
            None => true,
            Some((b, _)) => v < *b,
        };
        if better {
            best = Some((v, payload));
        }
        history.push(best.as_ref().map(|b| b.0).unwrap_or(f64::INFINITY));
    }
    let (v, payload) = best.expect("at least one restart");
    (v, payload, history)
}

fn stable_over_last_three(history: &[f64]) -> bool {
    let n = history.len();
    n >= 3 && history[n - 3] - history[n - 1] <= STABLE_TOL
}

// ---------------------------------------------------------------------------
// Constrained minimisation over Schmidt vectors

/// Outcome of [`min_tangle_at_F`].
#[derive(Clone, Debug)]
pub struct ConstrainedMinResult {
    pub fidelity: f64,
    pub d: usize,
    pub minimum: f64,
    pub argmin: SchmidtVector,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Maps `y` onto `{x : Σx = s, Σx² = 1, x ≥ 0, x_i = 0 off active}`.
///
/// Projects onto the plane, pushes radially onto the sphere, and drops the
/// most negative coordinate until none is left. `None` when the active set
/// becomes too small to reach the plane.
fn retract(y: &[f64], active: &[bool], s: f64) -> Option<Vec<f64>> {
    let mut active = active.to_vec();
    loop {
        let k = active.iter().filter(|&&a| a).count();
        if k == 0 || (k as f64) < s * s - 1e-12 {
            return None;
        }
        let kf = k as f64;
        let c = s / kf;
        let r2 = 1.0 - s * s / kf;
        let r = if r2 > 1e-15 { r2.sqrt() } else { 0.0 };
        let shift = (y.iter().zip(&active).filter(|(_, &a)| a).map(|(v, _)| v).sum::<f64>() - s) / kf;
        let mut u: Vec<f64> = y.iter().zip(&active).map(|(&v, &a)| if a { v - shift - c } else { 0.0 }).collect();
        let nu = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 0.0 && nu < 1e-300 {
            return None;
        }
        for (ui, &a) in u.iter_mut().zip(&active) {
            *ui = if !a {
                0.0
            } else if r == 0.0 {
                c
            } else {
                c + r * *ui / nu
            };
        }
        let worst = u
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i);
        match worst {
            None => return Some(u),
            Some(i) => active[i] = false,
        }
    }
}

/// `−Σ x⁴`; the tangle is `2 + 2h`.
fn quartic(x: &[f64]) -> f64 {
    -x.iter().map(|v| v.powi(4)).sum::<f64>()
}

/// Gradient of [`quartic`] projected onto the tangent space of the active
/// face, and the plane multiplier `λ` of the stationarity condition
/// `−4x³ = λ + 2νx` fitted by least squares.
fn projected_gradient(x: &[f64]) -> (Vec<f64>, f64) {
    let active: Vec<bool> = x.iter().map(|&v| v > 0.0).collect();
    let k = active.iter().filter(|&&a| a).count() as f64;
    let g: Vec<f64> = x.iter().zip(&active).map(|(&v, &a)| if a { -4.0 * v.powi(3) } else { 0.0 }).collect();
    let e1: Vec<f64> = active.iter().map(|&a| if a { 1.0 / k.sqrt() } else { 0.0 }).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let xe = dot(x, &e1);
    let mut e2: Vec<f64> = x.iter().zip(&e1).map(|(v, e)| v - xe * e).collect();
    let n2 = dot(&e2, &e2).sqrt();
    let has_e2 = n2 > 1e-14;
    if has_e2 {
        e2.iter_mut().for_each(|v| *v /= n2);
    }
    let ge1 = dot(&g, &e1);
    let ge2 = if has_e2 { dot(&g, &e2) } else { 0.0 };
    let pg: Vec<f64> = (0..x.len())
        .map(|i| g[i] - ge1 * e1[i] - if has_e2 { ge2 * e2[i] } else { 0.0 })
        .collect();
    // normal equations for g = λ·1 + μ·x on the active set (Σx = s, Σx² = 1)
    let sx: f64 = x.iter().sum();
    let (sg, sgx) = (g.iter().sum::<f64>(), dot(&g, x));
    let det = k - sx * sx;
    let lambda = if det.abs() > 1e-14 { (sg - sx * sgx) / det } else { 0.0 };
    (pg, lambda)
}

fn initial_point<R: Rng>(d: usize, s: f64, rng: &mut R) -> Vec<f64> {
    let kmin = ((s * s - 1e-9).ceil() as usize).clamp(1, d);
    loop {
        let k = rng.random_range(kmin..=d);
        let mut idx: Vec<usize> = (0..d).collect();
        idx.shuffle(rng);
        let mut active = vec![false; d];
        let mut y = vec![0.0; d];
        for &i in &idx[..k] {
            active[i] = true;
            y[i] = rng.random::<f64>();
        }
        if let Some(x) = retract(&y, &active, s) {
            return x;
        }
    }
}

fn descend(mut x: Vec<f64>, s: f64) -> Vec<f64> {
    let mut h = quartic(&x);
    let mut t = 0.1;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (pg, lambda) = projected_gradient(&x);
        let norm = pg.iter().map(|v| v * v).sum::<f64>().sqrt();
        let active: Vec<bool> = x.iter().map(|&v| v > 0.0).collect();
        if norm <= PG_TOL {
            match release_coordinate(&x, h, lambda, s) {
                Some((nx, nh)) => {
                    x = nx;
                    h = nh;
                    t = 0.1;
                    continue;
                }
                None => break,
            }
        }
        let mut moved = false;
        while t > 1e-18 {
            let y: Vec<f64> = x.iter().zip(&pg).map(|(v, g)| v - t * g).collect();
            if let Some(cand) = retract(&y, &active, s) {
                let hc = quartic(&cand);
                if hc < h {
                    x = cand;
                    h = hc;
                    t = (2.0 * t).min(1.0);
                    moved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !moved {
            match release_coordinate(&x, h, lambda, s) {
                Some((nx, nh)) => {
                    x = nx;
                    h = nh;
                    t = 0.1;
                }
                None => break,
            }
        }
    }
    x
}

/// Tries to lift a zero coordinate when the fitted multiplier says the bound
/// `x_i ≥ 0` is holding the objective back.
fn release_coordinate(x: &[f64], h: f64, lambda: f64, s: f64) -> Option<(Vec<f64>, f64)> {
    if lambda <= 1e-12 {
        return None;
    }
    for i in (0..x.len()).filter(|&i| x[i] == 0.0) {
        for eps in [1e-2, 1e-3, 1e-4] {
            let mut y = x.to_vec();
            y[i] = eps;
            let active: Vec<bool> = y.iter().map(|&v| v > 0.0).collect();
            if let Some(cand) = retract(&y, &active, s) {
                let hc = quartic(&cand);
                if hc < h {
                    return Some((cand, hc));
                }
            }
        }
    }
    None
}

/// Minimum of the pure-state tangle `2(1 − Σμ²)` over Schmidt vectors with
/// `(Σ√μ_k)²/d = F`.
///
/// Works on `x = √μ`, where the constraints are the unit sphere, the plane
/// `Σx = √(Fd)` and the positive orthant.
#[allow(non_snake_case)]
pub fn min_tangle_at_F(d: usize, fidelity: f64, restarts: usize, seed: u64) -> Result<ConstrainedMinResult> {
    let f = check_iso_domain(fidelity, d)?;
    if restarts == 0 {
        return Err(Error::Input("at least one restart is needed".into()));
    }
    let s = (f * d as f64).sqrt();
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(seed, i);
            let x = descend(initial_point(d, s, &mut rng), s);
            ((2.0 * (1.0 + quartic(&x))).max(0.0), x)
        })
        .collect();
    let (minimum, x, history) = combine(runs);
    let argmin = SchmidtVector::from_weights(x.iter().map(|v| v * v).collect())?;
    Ok(ConstrainedMinResult {
        fidelity: f,
        d,
        minimum,
        argmin,
        restarts_used: restarts,
        converged: stable_over_last_three(&history),
    })
}

// ---------------------------------------------------------------------------
// Lower convex envelope

/// Vertices of the lower convex hull of `points`, which must be sorted by
/// strictly increasing abscissa. Collinear points are kept.
pub fn lower_hull(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if points.len() < 3 {
        return Err(Error::Input(format!("need at least 3 points, got {}", points.len())));
    }
    for (i, p) in points.iter().enumerate() {
        if !p.0.is_finite() || !p.1.is_finite() {
            return Err(Error::Input(format!("point {i} is not finite")));
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        if w[1].0 <= w[0].0 {
            return Err(Error::Input(format!("abscissae not strictly increasing at index {}", i + 1)));
        }
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) < 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(hull)
}

/// Largest convex function lying below the sampled points, as linear pieces.
pub fn convex_envelope(points: &[(f64, f64)]) -> Result<PiecewiseCurve> {
    let hull = lower_hull(points)?;
    let segments = hull.windows(2).map(|w| Segment::linear_through(w[0], w[1])).collect();
    PiecewiseCurve::new(None, None, segments)
}

// ---------------------------------------------------------------------------
// Ensembles and convex-roof upper bounds

/// A pure-state ensemble `{p_j, |Ψ_j⟩}`.
#[derive(Clone, Debug)]
pub struct EnsembleDecomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureBipartiteState>,
}

impl EnsembleDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ p_j |Ψ_j⟩⟨Ψ_j|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.states.first().map(|s| s.amplitudes().len()).unwrap_or(0);
        let mut acc = ComplexMatrix::zeros(n, n);
        for (p, s) in self.weights.iter().zip(&self.states) {
            let proj = ComplexMatrix::outer(s.amplitudes()).expect("finite amplitudes");
            acc = &acc + &proj.scale_real(*p);
        }
        acc
    }

    /// `Σ p_j m(Ψ_j)`.
    pub fn average(&self, measure: Measure) -> f64 {
        self.weights.iter().zip(&self.states).map(|(p, s)| p * evaluate(measure, s)).sum()
    }
}

/// Eigenpairs with eigenvalue above the rank threshold, as `√λ_k |e_k⟩`.
fn scaled_eigenvectors(rho: &DensityOperator) -> Result<Vec<Vec<C64>>> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_TOL)
        .map(|(k, &l)| eig.eigenvectors.column(k).into_iter().map(|z| z * l.sqrt()).collect())
        .collect())
}

fn ensemble_from_vectors(mix: &[C64], m: usize, vecs: &[Vec<C64>], dims: (usize, usize)) -> Result<EnsembleDecomposition> {
    let r = vecs.len();
    let n = dims.0 * dims.1;
    let mut weights = Vec::with_capacity(m);
    let mut states = Vec::with_capacity(m);
    for j in 0..m {
        let mut psi = vec![C64::new(0.0, 0.0); n];
        for (k, v) in vecs.iter().enumerate() {
            let c = mix[j * r + k].conj();
            for (a, b) in psi.iter_mut().zip(v) {
                *a += c * b;
            }
        }
        let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if p > 0.0 {
            weights.push(p);
            states.push(PureBipartiteState::normalized(dims.0, dims.1, psi)?);
        }
    }
    Ok(EnsembleDecomposition { weights, states })
}

/// `|Ψ̃_j⟩ = Σ_k mix*_{jk} √λ_k |e_k⟩` with `p_j = ⟨Ψ̃_j|Ψ̃_j⟩`. Members with
/// zero weight are dropped.
pub fn ensemble_from_isometry(rho: &DensityOperator, mix: &ComplexMatrix) -> Result<EnsembleDecomposition> {
    let vecs = scaled_eigenvectors(rho)?;
    let r = vecs.len();
    if mix.cols() != r {
        return dimension_err(format!("mix has {} columns but the state has rank {r}", mix.cols()));
    }
    if mix.rows() < r {
        return dimension_err(format!("mix has {} rows, fewer than the rank {r}", mix.rows()));
    }
    let gram = &mix.adjoint() * mix;
    let residual = gram.max_abs_diff(&ComplexMatrix::identity(r));
    if residual > ISOMETRY_TOL {
        return domain_err(format!("mix columns are not orthonormal (residual {residual:e})"));
    }
    ensemble_from_vectors(&mix.to_row_major(), mix.rows(), &vecs, rho.dims())
}

/// Result of [`roof_upper_bound`].
#[derive(Clone, Debug)]
pub struct RoofBound {
    pub value: f64,
    pub ensemble: EnsembleDecomposition,
    pub restarts_used: usize,
}

/// Row-major `m × r` complex matrix from interleaved real parameters, with
/// orthonormalised columns. `None` if the columns are dependent.
fn isometry_from_params(params: &[f64], m: usize, r: usize) -> Option<Vec<C64>> {
    let mut q: Vec<C64> = params.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    for k in 0..r {
        for _ in 0..2 {
            for l in 0..k {
                let overlap: C64 = (0..m).map(|j| q[j * r + l].conj() * q[j * r + k]).sum();
                for j in 0..m {
                    let t = q[j * r + l];
                    q[j * r + k] -= overlap * t;
                }
            }
        }
        let norm = (0..m).map(|j| q[j * r + k].norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm <= 1e-10 {
            return None;
        }
        for j in 0..m {
            q[j * r + k] /= norm;
        }
    }
    Some(q)
}

/// `Σ_j p_j m(Ψ_j)` written on the unnormalised members: the tangle term is
/// `4 S_j / p_j` and the concurrence term `2 √S_j`, with `S_j` the sum of
/// squared 2×2 minors of the coefficient matrix of `|Ψ̃_j⟩`.
struct RoofObjective<'a> {
    vecs: &'a [Vec<C64>],
    dims: (usize, usize),
    m: usize,
    measure: Measure,
}

impl RoofObjective<'_> {
    fn value(&self, params: &[f64]) -> f64 {
        let r = self.vecs.len();
        let Some(q) = isometry_from_params(params, self.m, r) else {
            return f64::INFINITY;
        };
        let (da, db) = self.dims;
        let mut psi = vec![C64::new(0.0, 0.0); da * db];
        let mut total = 0.0;
        for j in 0..self.m {
            psi.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            for (k, v) in self.vecs.iter().enumerate() {
                let c = q[j * r + k].conj();
                for (a, b) in psi.iter_mut().zip(v) {
                    *a += c * b;
                }
            }
            let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            if p <= 1e-300 {
                continue;
            }
            let mut minors = 0.0;
            for i in 0..da {
                for i2 in i + 1..da {
                    for k in 0..db {
                        for k2 in k + 1..db {
                            minors += (psi[i * db + k] * psi[i2 * db + k2] - psi[i * db + k2] * psi[i2 * db + k]).norm_sqr();
                        }
                    }
                }
            }
            total += match self.measure {
                Measure::Tangle => 4.0 * minors / p,
                _ => 2.0 * minors.sqrt(),
            };
        }
        total
    }
}

/// Hooke–Jeeves pattern search: coordinate exploration with a shrinking
/// step, plus pattern moves along successful directions.
fn pattern_search(f: impl Fn(&[f64]) -> f64, mut x: Vec<f64>, step0: f64, min_step: f64, max_evals: usize) -> (Vec<f64>, f64) {
    let mut evals = 0usize;
    let mut eval = |p: &[f64], evals: &mut usize| {
        *evals += 1;
        f(p)
    };
    let mut fx = eval(&x, &mut evals);
    let mut step = step0;
    let explore = |base: &[f64], fbase: f64, step: f64, evals: &mut usize, eval: &mut dyn FnMut(&[f64], &mut usize) -> f64| {
        let mut y = base.to_vec();
        let mut fy = fbase;
        for i in 0..y.len() {
            let orig = y[i];
            y[i] = orig + step;
            let up = eval(&y, evals);
            if up < fy {
                fy = up;
                continue;
            }
            y[i] = orig - step;
            let down = eval(&y, evals);
            if down < fy {
                fy = down;
                continue;
            }
            y[i] = orig;
        }
        (y, fy)
    };
    while step >= min_step && evals < max_evals {
        let (mut x1, mut f1) = explore(&x, fx, step, &mut evals, &mut eval);
        if f1 < fx {
            loop {
                let xp: Vec<f64> = x1.iter().zip(&x).map(|(a, b)| 2.0 * a - b).collect();
                let fp = eval(&xp, &mut evals);
                let (x2, f2) = explore(&xp, fp, step, &mut evals, &mut eval);
                x = x1;
                fx = f1;
                if f2 < f1 && evals < max_evals {
                    x1 = x2;
                    f1 = f2;
                } else {
                    break;
                }
            }
        } else {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Upper bound on the convex roof of `measure` at `rho` from optimised
/// `m`-member ensembles.
///
/// Ensembles are `mix`-transforms of the eigen-ensemble, with `mix` an
/// `m × rank` isometry obtained by orthonormalising an unconstrained complex
/// matrix. Restart 0 starts from the eigen-ensemble itself and the others from
/// Gaussian matrices. The concurrence search is started from the optimum of
/// the tangle search. Only the concurrence and the tangle are supported.
pub fn roof_upper_bound(rho: &DensityOperator, measure: Measure, m: usize, restarts: usize, seed: u64) -> Result<RoofBound> {
    if measure == Measure::Eof {
        return Err(Error::Input("ensemble search supports the concurrence and the tangle".into()));
    }
    if restarts == 0 {
        return Err(Error::Input("at least one restart is needed".into()));
    }
    let vecs = scaled_eigenvectors(rho)?;
    let r = vecs.len();
    if m < r {
        return domain_err(format!("ensemble size {m} is below the rank {r}"));
    }
    let dims = rho.dims();
    if r == 1 {
        let ensemble = ensemble_from_vectors(&[C64::new(1.0, 0.0)], 1, &vecs, dims)?;
        let value = ensemble.average(measure);
        return Ok(RoofBound { value, ensemble, restarts_used: restarts });
    }
    let tangle = RoofObjective { vecs: &vecs, dims, m, measure: Measure::Tangle };
    let target = RoofObjective { vecs: &vecs, dims, m, measure };
    let budget = 4000 * m * r;
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let start: Vec<f64> = if i == 0 {
                (0..m * r).flat_map(|idx| [if idx / r == idx % r { 1.0 } else { 0.0 }, 0.0]).collect()
            } else {
                let mut rng = restart_rng(seed, i);
                (0..m * r)
                    .flat_map(|_| {
                        let z = complex_gaussian(&mut rng);
                        [z.re, z.im]
                    })
                    .collect()
            };
            let (x, ft) = pattern_search(|p| tangle.value(p), start, 0.25, 1e-9, budget);
            if measure == Measure::Tangle {
                (ft, x)
            } else {
                let (x, fc) = pattern_search(|p| target.value(p), x, 1e-2, 1e-10, budget);
                (fc, x)
            }
        })
        .collect();
    let (value, params, _) = combine(runs);
    let q = isometry_from_params(&params, m, r).expect("optimum has independent columns");
    let ensemble = ensemble_from_vectors(&q, m, &vecs, dims)?;
    Ok(RoofBound { value, ensemble, restarts_used: restarts })
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit state,
/// with `λ_i` the descending square roots of the eigenvalues of `ρ ρ̃` and
/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn wootters_concurrence(rho: &DensityOperator) -> Result<f64> {
    if rho.dims() != (2, 2) {
        let (a, b) = rho.dims();
        return dimension_err(format!("Wootters concurrence needs two qubits, got {a}x{b}"));
    }
    let yy = ComplexMatrix::from_real_row_major(
        4,
        4,
        &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
    )?;
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;
    let eig = hermitian_eig(rho.matrix())?;
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let sqrt_rho = &(&eig.eigenvectors * &ComplexMatrix::from_diagonal(&roots)?) * &eig.eigenvectors.adjoint();
    let r = (&(&sqrt_rho * &flipped) * &sqrt_rho).hermitian_part();
    let mut lam: Vec<f64> = crate::qlinalg::hermitian_eigenvalues(&r)?.into_iter().map(|v| v.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}
