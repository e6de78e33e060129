//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Each criterion is a list of measured
//! deviations with pinned tolerances plus a wall-clock budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isotangle::iso::{
    concurrence_curve, concurrence_d2_f, csquared, csquared_d2_f, csquared_d_f, eof_iso_curve, min_over_branches, tangle_curve,
};
use isotangle::pure_measures::{evaluate, tangle_functional, Measure};
use isotangle::qlinalg::{haar_unitary_with, ComplexMatrix};
use isotangle::roof::{convex_envelope, min_tangle_at_F, roof_upper_bound, wootters_concurrence};
use isotangle::states::{isotropic, schmidt_fidelity, DensityOperator, PureBipartiteState, SchmidtVector};
use isotangle_cli::table::Table;
use isotangle_cli::{run, svg, Cli, Outcome};

struct Measured {
    label: String,
    deviation: f64,
    tolerance: f64,
}

impl Measured {
    fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn m(label: impl Into<String>, deviation: f64, tolerance: f64) -> Measured {
    Measured { label: label.into(), deviation, tolerance }
}

/// A boolean property expressed as a deviation: 0 when it holds.
fn holds(label: impl Into<String>, ok: bool) -> Measured {
    m(label, if ok { 0.0 } else { 1.0 }, 0.0)
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| (lo + step * i as f64).min(hi)).collect();
    if hi - pts[n] > 1e-12 {
        pts.push(hi);
    }
    pts
}

fn dev(a: isotangle::Result<f64>, b: f64) -> f64 {
    match a {
        Ok(a) if a.is_finite() => (a - b).abs(),
        _ => f64::INFINITY,
    }
}

fn criterion_1() -> Vec<Measured> {
    let tol = 1e-12;
    let mut out = vec![
        m("C²(8/9) = 1 at d = 3", dev(csquared(8.0 / 9.0, 3), 1.0), tol),
        m("∂C²/∂F(8/9) = 3 at d = 3", dev(csquared_d_f(8.0 / 9.0, 3), 3.0), tol),
    ];
    let t3 = tangle_curve(3).unwrap();
    let bp = t3.breakpoints();
    let bp_dev = if bp.len() == 2 { (bp[0] - 1.0 / 3.0).abs().max((bp[1] - 8.0 / 9.0).abs()) } else { f64::INFINITY };
    out.push(m("tangle breakpoints 1/3 and 8/9", bp_dev, tol));
    out.push(m("tangle(1) = 4/3 at d = 3", dev(t3.eval(1.0), 4.0 / 3.0), tol));
    out.push(m("E_f(1) = log₂ 3 at d = 3", dev(eof_iso_curve(3).unwrap().eval(1.0), 3f64.log2()), tol));
    let mut tangent = 0.0f64;
    for d in 3..=10usize {
        let df = d as f64;
        let ft = 4.0 * (df - 1.0) / (df * df);
        let curve = tangle_curve(d).unwrap();
        let seg = curve.segments()[2];
        tangent = tangent
            .max((seg.start - ft).abs())
            .max(dev(csquared(ft, d), 2.0 * (2.0 * df - 3.0) / (df * (df - 1.0))))
            .max(dev(curve.eval(ft), 2.0 * (2.0 * df - 3.0) / (df * (df - 1.0))))
            .max((seg.slope().unwrap() - 2.0 * df / (df - 1.0)).abs())
            .max(dev(csquared_d_f(ft, d), 2.0 * df / (df - 1.0)));
    }
    out.push(m("tangent point, value and slope for d = 3..10", tangent, tol));
    out
}

fn criterion_2() -> Vec<Measured> {
    let tol = 1e-10;
    let tau = tangle_curve(2).unwrap();
    let mut dt = 0.0f64;
    let mut dw = 0.0f64;
    for f in grid(0.0, 1.0, 1e-2) {
        let want = if f <= 0.5 { 0.0 } else { (2.0 * f - 1.0).powi(2) };
        dt = dt.max(dev(tau.eval(f), want));
        dw = dw.max(dev(isotropic(2, f).and_then(|r| wootters_concurrence(&r)), (2.0 * f - 1.0).max(0.0)));
    }
    let d2 = grid(0.501, 0.999, 1e-3).into_iter().map(|f| dev(csquared_d2_f(f, 2), 8.0)).fold(0.0, f64::max);
    vec![
        m("τ(ρ_F) = (2F−1)² on 0.01 grid", dt, tol),
        m("Wootters C(ρ_F) = max(0, 2F−1) on 0.01 grid", dw, tol),
        m("∂²C²/∂F² = 8 on (1/2, 1)", d2, tol),
    ]
}

fn criterion_3() -> Vec<Measured> {
    let tol = 1e-6;
    let mut oracle = 0.0f64;
    let mut unconverged = 0;
    for d in 2..=6usize {
        for i in 0..=20 {
            let f = i as f64 * 0.05;
            if f < 1.0 / d as f64 {
                continue;
            }
            let r = min_tangle_at_F(d, f, 32, 2024).unwrap();
            if !r.converged {
                unconverged += 1;
            }
            oracle = oracle.max(dev(Ok(r.minimum), csquared(f, d).unwrap()));
        }
    }
    let mut beaten = 0.0f64;
    for d in 2..=6usize {
        for f in grid(1.0 / d as f64, 1.0, 1e-2) {
            let (_, best) = min_over_branches(f, d).unwrap();
            beaten = beaten.max(csquared(f, d).unwrap() - best);
        }
    }
    vec![
        m("constrained search vs C²(F), d = 2..6, 0.05 grid, 32 restarts", oracle, tol),
        holds("every grid search reports convergence", unconverged == 0),
        m("no (n, m) branch below (1, d−1)", beaten, tol),
    ]
}

fn criterion_4() -> Vec<Measured> {
    let tol = 1e-4;
    let mut dt = 0.0f64;
    let mut dc = 0.0f64;
    for d in 3..=6usize {
        let fs = grid(1.0 / d as f64, 1.0, 1e-3);
        let c2: Vec<(f64, f64)> = fs.iter().map(|&f| (f, csquared(f, d).unwrap())).collect();
        let c1: Vec<(f64, f64)> = c2.iter().map(|&(f, v)| (f, v.sqrt())).collect();
        let env2 = convex_envelope(&c2).unwrap();
        let env1 = convex_envelope(&c1).unwrap();
        let tau = tangle_curve(d).unwrap();
        let conc = concurrence_curve(d).unwrap();
        for &f in &fs {
            dt = dt.max(dev(env2.eval(f), tau.eval(f).unwrap()));
            dc = dc.max(dev(env1.eval(f), conc.eval(f).unwrap()));
        }
    }
    let c2: Vec<(f64, f64)> = grid(1.0 / 3.0, 1.0, 1e-3).into_iter().map(|f| (f, csquared(f, 3).unwrap())).collect();
    let env = convex_envelope(&c2).unwrap();
    let bp = env.segments().last().unwrap().start;
    vec![
        m("envelope of sampled C² vs tangle curve, d = 3..6", dt, tol),
        m("envelope of sampled C vs concurrence line, d = 3..6", dc, tol),
        m("envelope breakpoint at d = 3 vs 8/9", (bp - 8.0 / 9.0).abs(), 2e-3),
    ]
}

fn criterion_5() -> Vec<Measured> {
    let tol = 1e-3;
    let seed = 5;
    let mut out = Vec::new();
    for f in [0.6, 0.75, 0.9] {
        let rho = isotropic(2, f).unwrap();
        let t = roof_upper_bound(&rho, Measure::Tangle, 8, 8, seed).unwrap();
        let c = roof_upper_bound(&rho, Measure::Concurrence, 8, 8, seed).unwrap();
        out.push(m(format!("tangle bound at F = {f}"), (t.value - (2.0 * f - 1.0).powi(2)).abs(), tol));
        out.push(m(format!("concurrence bound at F = {f}"), (c.value - (2.0 * f - 1.0)).abs(), tol));
        let recon = t.ensemble.reconstruct().max_abs_diff(rho.matrix()).max(c.ensemble.reconstruct().max_abs_diff(rho.matrix()));
        out.push(m(format!("optimal ensembles reproduce ρ at F = {f}"), recon, 1e-8));
    }
    let sep = isotropic(2, 0.4).unwrap();
    let t = roof_upper_bound(&sep, Measure::Tangle, 8, 8, seed).unwrap();
    out.push(m("tangle bound at F = 0.4", t.value, 1e-6));
    out
}

fn criterion_6() -> Vec<Measured> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 1000;

    let mut lu = 0.0f64;
    for i in 0..trials {
        let (da, db) = (2 + i % 3, 2 + (i / 3) % 3);
        let psi = PureBipartiteState::random(da, db, &mut rng);
        let phi = psi.apply_local(&haar_unitary_with(da, &mut rng), &haar_unitary_with(db, &mut rng)).unwrap();
        for meas in [Measure::Concurrence, Measure::Tangle, Measure::Eof] {
            lu = lu.max((evaluate(meas, &psi) - evaluate(meas, &phi)).abs());
        }
    }

    let mut concave = 0.0f64;
    for _ in 0..trials {
        let a = DensityOperator::random(3, 1, &mut rng);
        let b = DensityOperator::random(3, 1, &mut rng);
        let lam: f64 = rng.random();
        let mix = &a.matrix().scale_real(lam) + &b.matrix().scale_real(1.0 - lam);
        let gap = lam * tangle_functional(a.matrix()) + (1.0 - lam) * tangle_functional(b.matrix()) - tangle_functional(&mix);
        concave = concave.max(gap);
    }

    let mut fid = 0.0f64;
    for i in 0..trials {
        let d = 2 + i % 5;
        let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        let mu = SchmidtVector::from_weights(w).unwrap();
        let v = haar_unitary_with(d, &mut rng);
        fid = fid.max(schmidt_fidelity(&mu, &v).unwrap() - schmidt_fidelity(&mu, &ComplexMatrix::identity(d)).unwrap());
    }

    let mut mono = 0.0f64;
    for d in 2..=16usize {
        for f in grid(1.0 / d as f64, 1.0, 1e-3) {
            mono = mono.max(-csquared_d_f(f, d).unwrap());
        }
    }

    let mut sign_ok = true;
    for d in 3..=10usize {
        let signs: Vec<bool> = grid(1.0 / d as f64 + 1e-3, 1.0 - 1e-3, 1e-3)
            .into_iter()
            .map(|f| csquared_d2_f(f, d).unwrap() > 0.0)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        sign_ok &= changes == 1 && signs[0];
    }

    let tau = tangle_curve(10_000).unwrap();
    let conc = concurrence_curve(10_000).unwrap();
    let mut at = 0.0f64;
    let mut ac = 0.0f64;
    for f in grid(0.0, 1.0, 1e-3) {
        at = at.max((tau.eval(f).unwrap() - 2.0 * f).abs());
        if f >= 0.01 {
            ac = ac.max((conc.eval(f).unwrap() - 2f64.sqrt() * f).abs());
        }
    }

    vec![
        m("local-unitary invariance of pure measures (10³ trials)", lu, 1e-10),
        m("concavity of 2(1 − tr ρ²) (10³ trials)", concave, 1e-12),
        m("F(μ, V) ≤ F(μ, I) (10³ trials)", fid, 1e-12),
        m("∂C²/∂F ≥ 0 for d = 2..16", mono.max(0.0), 0.0),
        holds("∂²C²/∂F² changes sign once, + to −, d = 3..10", sign_ok),
        m("|τ − 2F| at d = 10⁴", at, 2e-3),
        m("|C − √2 F| at d = 10⁴, F ≥ 0.01", ac, 1e-3),
    ]
}

fn curve(args: &[&str]) -> (Table, String) {
    let mut argv = vec!["isotangle", "curve"];
    argv.extend_from_slice(args);
    let mut csv = Vec::new();
    let cli = Cli::try_parse_from(&argv).expect("valid arguments");
    assert_eq!(run(&cli, &mut csv).expect("curve runs"), Outcome::Success);
    argv.extend_from_slice(&["--format", "svg"]);
    let mut svg_out = Vec::new();
    run(&Cli::try_parse_from(&argv).unwrap(), &mut svg_out).expect("svg runs");
    let table = Table::read_csv(csv.as_slice()).expect("csv parses");
    (table, String::from_utf8(svg_out).unwrap())
}

fn column(t: &Table, name: &str) -> Vec<f64> {
    let j = t.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("missing column {name}"));
    t.rows.iter().map(|r| r[j]).collect()
}

fn criterion_7() -> Vec<Measured> {
    let mut out = Vec::new();
    let mut svg_ok = true;
    let mut check_svg = |t: &Table, svg_text: &str| {
        svg_ok &= svg_text.starts_with("<svg") && svg_text.matches("<path").count() == t.columns.len();
        svg_ok &= t.columns.iter().all(|c| svg_text.contains(c.as_str()));
        svg_ok &= svg::render(t) == svg_text;
    };

    // branches of C² at d = 3
    let (t1, s1) = curve(&["--d", "3", "--measures", "branch:1,1", "branch:2,1", "branch:1,2", "--from", "0.3334", "--to", "1", "--step", "0.001"]);
    check_svg(&t1, &s1);
    let (b11, b21, b12) = (column(&t1, "branch_1_1"), column(&t1, "branch_2_1"), column(&t1, "branch_1_2"));
    let mut fig1 = 0.0f64;
    for i in 0..t1.fidelity.len() {
        let others = [b11[i], b21[i]].into_iter().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
        fig1 = fig1.max(b12[i] - others).max(dev(Ok(b12[i]), csquared(t1.fidelity[i], 3).unwrap()));
    }
    out.push(m("C²₁₂ is the pointwise minimum of the d = 3 branches", fig1.max(0.0), 1e-12));

    // derivatives of C² at d = 3
    let (t2, s2) = curve(&["--d", "3", "--measures", "csquared", "--derivative", "1,2", "--from", "0.334", "--to", "0.999"]);
    check_svg(&t2, &s2);
    let d1 = column(&t2, "csquared_d1");
    let d2 = column(&t2, "csquared_d2");
    let changes = d2.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    out.push(holds("first derivative positive", d1.iter().all(|&v| v > 0.0)));
    out.push(holds("second derivative changes sign once", changes == 1 && d2[0] > 0.0));

    // tangle for several d
    let (t3, s3) = curve(&["--measures", "tangle", "--d", "3,10,100,10000"]);
    check_svg(&t3, &s3);
    let big = column(&t3, "tangle@d=10000");
    let asym = t3.fidelity.iter().zip(&big).map(|(f, v)| (v - 2.0 * f).abs()).fold(0.0, f64::max);
    out.push(m("d = 10⁴ tangle column follows 2F", asym, 2e-3));
    out.push(holds("tangle figure uses dotted, short, long, solid", {
        let p: Vec<&str> = s3.lines().filter(|l| l.starts_with("<path")).collect();
        p.len() == 4 && p[0].contains("2,3") && p[1].contains("4,3") && p[2].contains("12,4") && !p[3].contains("dasharray")
    }));

    // concurrence branches at d = 3
    let (t4, s4) = curve(&["--d", "3", "--measures", "cbranch:1,1", "cbranch:2,1", "cbranch:1,2", "--from", "0.3334", "--to", "1", "--step", "0.001"]);
    check_svg(&t4, &s4);
    let (c11, c21, c12) = (column(&t4, "cbranch_1_1"), column(&t4, "cbranch_2_1"), column(&t4, "cbranch_1_2"));
    let mut fig4 = 0.0f64;
    for i in 0..t4.fidelity.len() {
        let others = [c11[i], c21[i]].into_iter().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min);
        fig4 = fig4.max(c12[i] - others);
    }
    out.push(m("C₁₂ is the pointwise minimum of the d = 3 concurrence branches", fig4.max(0.0), 1e-12));

    // derivatives of C at d = 3
    let (t5, s5) = curve(&["--d", "3", "--measures", "cfunc", "--derivative", "1,2", "--from", "0.334", "--to", "0.999"]);
    check_svg(&t5, &s5);
    let cd2 = column(&t5, "cfunc_d2");
    out.push(holds("C(F) is concave", cd2.iter().all(|&v| v < 0.0)));
    let second = grid(0.3344, 0.999, 1e-3).into_iter().map(|f| concurrence_d2_f(f, 3).unwrap()).fold(f64::NEG_INFINITY, f64::max);
    out.push(holds("closed-form ∂²C/∂F² negative on a fine grid", second < 0.0));

    out.push(holds("SVG output is complete and re-renders identically from CSV", svg_ok));
    out
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Vec<Measured>);
    let criteria: [Criterion; 7] = [
        (1, "exact closed-form values", Duration::from_secs(1), criterion_1),
        (2, "two-qubit closed forms", Duration::from_secs(1), criterion_2),
        (3, "oracle equivalence", Duration::from_secs(120), criterion_3),
        (4, "convex-hull agreement", Duration::from_secs(30), criterion_4),
        (5, "ensemble roof bounds", Duration::from_secs(300), criterion_5),
        (6, "property suites", Duration::from_secs(60), criterion_6),
        (7, "figure reproduction", Duration::from_secs(10), criterion_7),
    ];
    let mut failed = 0;
    for (id, title, budget, f) in criteria {
        let start = Instant::now();
        let checks = f();
        let elapsed = start.elapsed();
        let within = elapsed <= budget;
        let ok = within && checks.iter().all(Measured::passed);
        let worst = checks.iter().map(|c| c.deviation / c.tolerance.max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        println!(
            "criterion {id} ({title}): {}  [{} checks, worst deviation/tolerance {:.2e}, {:.2}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            checks.len(),
            worst,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !ok {
            failed += 1;
            for c in checks.iter().filter(|c| !c.passed()) {
                println!("    {}: deviation {:.3e} > tolerance {:.1e}", c.label, c.deviation, c.tolerance);
            }
            if !within {
                println!("    over the time budget");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
