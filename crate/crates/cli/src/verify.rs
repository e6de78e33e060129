//! Verification suites: closed forms against exact values, closed forms
//! against the numerical oracles, and ensemble roof bounds.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use isotangle::iso::{
    concurrence_curve, csquared, csquared_d2_f, csquared_d_f, eof_iso_curve, max_tangle, min_over_branches, tangent_point,
    tangent_slope, tangent_value, tangle_curve,
};
use isotangle::pure_measures::Measure;
use isotangle::roof::{convex_envelope, min_tangle_at_F, roof_upper_bound, wootters_concurrence, DEFAULT_RESTARTS};
use isotangle::states::isotropic;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForm,
    Oracle,
    Roof,
    All,
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "closed-form" => Ok(Suite::ClosedForm),
            "oracle" => Ok(Suite::Oracle),
            "roof" => Ok(Suite::Roof),
            "all" => Ok(Suite::All),
            other => Err(CliError::usage(format!("unknown suite `{other}` (closed-form, oracle, roof, all)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifySettings {
    pub seed: u64,
    pub oracle_restarts: usize,
    pub roof_restarts: usize,
    pub ensemble_size: usize,
    /// Multiplies every tolerance.
    pub tolerance_scale: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { seed: 7, oracle_restarts: DEFAULT_RESTARTS, roof_restarts: 8, ensemble_size: 8, tolerance_scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    pub runtime: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Text table; runtimes are left out unless asked for so that repeated
    /// runs print identical bytes.
    pub fn render(&self, timings: bool) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<6} {:<width$} {:>12} {:>10}", "status", "check", "deviation", "tolerance");
        if timings {
            out.push_str(&format!(" {:>10}", "runtime"));
        }
        out.push('\n');
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status:<6} {:<width$} {:>12.3e} {:>10.1e}", c.name, c.deviation, c.tolerance));
            if timings {
                out.push_str(&format!(" {:>9.3}s", c.runtime.as_secs_f64()));
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", self.checks.len()));
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

type CheckFn = Box<dyn Fn(&VerifySettings) -> f64>;

struct Check {
    name: String,
    tolerance: f64,
    run: CheckFn,
}

fn check(name: impl Into<String>, tolerance: f64, run: impl Fn(&VerifySettings) -> f64 + 'static) -> Check {
    Check { name: name.into(), tolerance, run: Box::new(run) }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| (lo + step * i as f64).min(hi)).collect();
    if hi - pts[n] > 1e-12 {
        pts.push(hi);
    }
    pts
}

/// Largest `|a − b|`, with any error or NaN counted as infinite.
fn max_dev<I: IntoIterator<Item = (isotangle::Result<f64>, f64)>>(pairs: I) -> f64 {
    pairs
        .into_iter()
        .map(|(a, b)| match a {
            Ok(a) if a.is_finite() => (a - b).abs(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

fn closed_form_checks() -> Vec<Check> {
    vec![
        check("csquared(8/9, 3) == 1", 1e-12, |_| max_dev([(csquared(8.0 / 9.0, 3), 1.0)])),
        check("csquared_dF(8/9, 3) == 3", 1e-12, |_| max_dev([(csquared_d_f(8.0 / 9.0, 3), 3.0)])),
        check("tangle_curve(3) breakpoints 1/3, 8/9", 1e-12, |_| match tangle_curve(3) {
            Ok(c) if c.breakpoints().len() == 2 => {
                let b = c.breakpoints();
                (b[0] - 1.0 / 3.0).abs().max((b[1] - 8.0 / 9.0).abs())
            }
            _ => f64::INFINITY,
        }),
        check("tangle_curve(3)(1) == 4/3", 1e-12, |_| max_dev([(tangle_curve(3).and_then(|c| c.eval(1.0)), 4.0 / 3.0)])),
        check("eof_iso_curve(3)(1) == log2 3", 1e-12, |_| {
            max_dev([(eof_iso_curve(3).and_then(|c| c.eval(1.0)), 3f64.log2())])
        }),
        check("tangent point, value, slope for d = 3..10", 1e-12, |_| {
            let mut dev: f64 = 0.0;
            for d in 3..=10usize {
                let df = d as f64;
                let ft = 4.0 * (df - 1.0) / (df * df);
                dev = dev.max((tangent_point(d) - ft).abs());
                dev = dev.max(max_dev([
                    (csquared(ft, d), 2.0 * (2.0 * df - 3.0) / (df * (df - 1.0))),
                    (csquared_d_f(ft, d), 2.0 * df / (df - 1.0)),
                ]));
                // the line through (1, 2(d−1)/d) with that slope touches C² at ft
                dev = dev.max((max_tangle(d) - tangent_slope(d) * (1.0 - ft) - tangent_value(d)).abs());
            }
            dev
        }),
        check("two-qubit tangle (2F-1)^2 on 0.01 grid", 1e-10, |_| {
            let c = tangle_curve(2);
            max_dev(grid(0.0, 1.0, 0.01).into_iter().map(|f| {
                let want = if f <= 0.5 { 0.0 } else { (2.0 * f - 1.0).powi(2) };
                (c.clone().and_then(|c| c.eval(f)), want)
            }))
        }),
        check("Wootters concurrence max(0, 2F-1) on 0.01 grid", 1e-10, |_| {
            max_dev(grid(0.0, 1.0, 0.01).into_iter().map(|f| {
                (isotropic(2, f).and_then(|r| wootters_concurrence(&r)), (2.0 * f - 1.0).max(0.0))
            }))
        }),
        check("d2 csquared == 8 on (1/2, 1) for d = 2", 1e-10, |_| {
            max_dev(grid(0.501, 0.999, 0.001).into_iter().map(|f| (csquared_d2_f(f, 2), 8.0)))
        }),
        check("csquared_dF >= 0 for d = 2..16", 0.0, |_| {
            let mut worst: f64 = 0.0;
            for d in 2..=16usize {
                for f in grid(1.0 / d as f64, 1.0, 1e-3) {
                    worst = worst.max(csquared_d_f(f, d).map(|v| (-v).max(0.0)).unwrap_or(f64::INFINITY));
                }
            }
            worst
        }),
        check("one sign change of d2 csquared for d = 3..10", 0.0, |_| {
            let mut worst: f64 = 0.0;
            for d in 3..=10usize {
                let lo = 1.0 / d as f64;
                let signs: Vec<bool> = grid(lo + 1e-3, 1.0 - 1e-3, 1e-3)
                    .into_iter()
                    .filter_map(|f| csquared_d2_f(f, d).ok())
                    .map(|v| v > 0.0)
                    .collect();
                let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
                let starts_convex = signs.first().copied().unwrap_or(false);
                worst = worst.max((changes as f64 - 1.0).abs() + if starts_convex { 0.0 } else { 1.0 });
            }
            worst
        }),
        check("d = 10^4 asymptotics |tau - 2F|", 2e-3, |_| {
            let c = tangle_curve(10_000);
            max_dev(grid(0.0, 1.0, 1e-3).into_iter().map(|f| (c.clone().and_then(|c| c.eval(f)), 2.0 * f)))
        }),
        check("d = 10^4 asymptotics |C - sqrt(2) F|, F >= 0.01", 1e-3, |_| {
            let c = concurrence_curve(10_000);
            max_dev(grid(0.01, 1.0, 1e-3).into_iter().map(|f| (c.clone().and_then(|c| c.eval(f)), 2f64.sqrt() * f)))
        }),
    ]
}

fn oracle_checks() -> Vec<Check> {
    vec![
        check("min_tangle_at_F vs csquared, d = 2..6, 0.05 grid", 1e-6, |s| {
            let mut dev: f64 = 0.0;
            for d in 2..=6usize {
                for i in 0..=20 {
                    let f = i as f64 * 0.05;
                    if f < 1.0 / d as f64 {
                        continue;
                    }
                    let got = min_tangle_at_F(d, f, s.oracle_restarts, s.seed).map(|r| r.minimum);
                    dev = dev.max(max_dev([(got, csquared(f, d).unwrap_or(f64::NAN))]));
                }
            }
            dev
        }),
        check("no (n, m) branch below (1, d-1), d = 2..6", 1e-6, |_| {
            let mut worst: f64 = 0.0;
            for d in 2..=6usize {
                for f in grid(1.0 / d as f64, 1.0, 1e-2) {
                    match (min_over_branches(f, d), csquared(f, d)) {
                        (Ok((_, best)), Ok(c2)) => worst = worst.max(c2 - best),
                        _ => return f64::INFINITY,
                    }
                }
            }
            worst
        }),
        check("envelope of sampled csquared vs tangle_curve, d = 3..6", 1e-4, |_| {
            let mut dev: f64 = 0.0;
            for d in 3..=6usize {
                let pts: Vec<(f64, f64)> =
                    grid(1.0 / d as f64, 1.0, 1e-3).into_iter().map(|f| (f, csquared(f, d).unwrap_or(f64::NAN))).collect();
                let (Ok(env), Ok(curve)) = (convex_envelope(&pts), tangle_curve(d)) else {
                    return f64::INFINITY;
                };
                dev = dev.max(max_dev(pts.iter().map(|&(f, _)| (env.eval(f), curve.eval(f).unwrap_or(f64::NAN)))));
            }
            dev
        }),
        check("envelope of sampled C(F) vs concurrence_curve, d = 3..6", 1e-4, |_| {
            let mut dev: f64 = 0.0;
            for d in 3..=6usize {
                let pts: Vec<(f64, f64)> = grid(1.0 / d as f64, 1.0, 1e-3)
                    .into_iter()
                    .map(|f| (f, csquared(f, d).map(f64::sqrt).unwrap_or(f64::NAN)))
                    .collect();
                let (Ok(env), Ok(curve)) = (convex_envelope(&pts), concurrence_curve(d)) else {
                    return f64::INFINITY;
                };
                dev = dev.max(max_dev(pts.iter().map(|&(f, _)| (env.eval(f), curve.eval(f).unwrap_or(f64::NAN)))));
            }
            dev
        }),
        check("envelope breakpoint for d = 3 near 8/9", 2e-3, |_| {
            let pts: Vec<(f64, f64)> = grid(1.0 / 3.0, 1.0, 1e-3).into_iter().map(|f| (f, csquared(f, 3).unwrap_or(f64::NAN))).collect();
            match convex_envelope(&pts) {
                Ok(env) => (env.segments().last().map(|s| s.start).unwrap_or(f64::NAN) - 8.0 / 9.0).abs(),
                Err(_) => f64::INFINITY,
            }
        }),
    ]
}

fn roof_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for f in [0.6, 0.75, 0.9] {
        checks.push(check(format!("two-qubit tangle roof bound at F = {f}"), 1e-3, move |s| {
            let got = isotropic(2, f).and_then(|r| roof_upper_bound(&r, Measure::Tangle, s.ensemble_size, s.roof_restarts, s.seed));
            max_dev([(got.map(|b| b.value), (2.0 * f - 1.0).powi(2))])
        }));
        checks.push(check(format!("two-qubit concurrence roof bound at F = {f}"), 1e-3, move |s| {
            let got =
                isotropic(2, f).and_then(|r| roof_upper_bound(&r, Measure::Concurrence, s.ensemble_size, s.roof_restarts, s.seed));
            max_dev([(got.map(|b| b.value), 2.0 * f - 1.0)])
        }));
    }
    checks.push(check("separable two-qubit roof bound at F = 0.4", 1e-6, |s| {
        let got = isotropic(2, 0.4).and_then(|r| roof_upper_bound(&r, Measure::Tangle, s.ensemble_size, s.roof_restarts, s.seed));
        max_dev([(got.map(|b| b.value), 0.0)])
    }));
    checks
}

/// Runs a suite and collects one result per check.
pub fn run_suite(suite: Suite, settings: &VerifySettings) -> VerifyReport {
    let checks = match suite {
        Suite::ClosedForm => closed_form_checks(),
        Suite::Oracle => oracle_checks(),
        Suite::Roof => roof_checks(),
        Suite::All => {
            let mut all = closed_form_checks();
            all.extend(oracle_checks());
            all.extend(roof_checks());
            all
        }
    };
    let checks = checks
        .into_iter()
        .map(|c| {
            let start = Instant::now();
            let deviation = (c.run)(settings);
            let tolerance = c.tolerance * settings.tolerance_scale;
            CheckResult { name: c.name, passed: deviation <= tolerance, deviation, tolerance, runtime: start.elapsed() }
        })
        .collect();
    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_suite_passes() {
        let report = run_suite(Suite::ClosedForm, &VerifySettings::default());
        assert!(report.passed(), "{report}");
        assert!(report.get("csquared(8/9, 3) == 1").is_some());
    }

    #[test]
    fn zero_tolerance_fails() {
        let settings = VerifySettings { tolerance_scale: 0.0, ..Default::default() };
        let report = run_suite(Suite::ClosedForm, &settings);
        assert!(!report.passed());
    }

    #[test]
    fn suite_names() {
        assert_eq!("closed-form".parse::<Suite>().unwrap(), Suite::ClosedForm);
        assert!("everything".parse::<Suite>().is_err());
    }
}
