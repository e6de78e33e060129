//! Curve requests and the tables they produce.

use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use isotangle::iso::{
    branch_concurrence, branch_tangle, concurrence_curve, concurrence_d2_f, concurrence_d_f, concurrence_function,
    csquared, csquared_d2_f, csquared_d_f, eof_iso_curve, tangle_curve, ExtremumBranch, PiecewiseCurve,
};

use crate::error::{CliError, CliResult};

/// Upper limit on grid points per request.
pub const MAX_GRID_POINTS: usize = 10_000_000;

/// A quantity that can be tabulated against `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureSpec {
    /// `C²(F)`, minimum pure-state tangle at fixed fidelity.
    Csquared,
    /// `C(F) = √C²(F)`.
    Cfunc,
    Tangle,
    Concurrence,
    Eof,
    /// `C²_nm(F)`.
    Branch(usize, usize),
    /// `C_nm(F) = √C²_nm(F)`.
    Cbranch(usize, usize),
}

impl MeasureSpec {
    pub fn name(&self) -> String {
        match self {
            MeasureSpec::Csquared => "csquared".into(),
            MeasureSpec::Cfunc => "cfunc".into(),
            MeasureSpec::Tangle => "tangle".into(),
            MeasureSpec::Concurrence => "concurrence".into(),
            MeasureSpec::Eof => "eof".into(),
            MeasureSpec::Branch(n, m) => format!("branch_{n}_{m}"),
            MeasureSpec::Cbranch(n, m) => format!("cbranch_{n}_{m}"),
        }
    }

    pub fn max_derivative(&self) -> u8 {
        match self {
            MeasureSpec::Csquared | MeasureSpec::Cfunc => 2,
            _ => 0,
        }
    }
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let (n, m) = s.split_once(',')?;
    Some((n.trim().parse().ok()?, m.trim().parse().ok()?))
}

impl FromStr for MeasureSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::usage(format!("unknown measure `{s}`"));
        Ok(match s {
            "csquared" => MeasureSpec::Csquared,
            "cfunc" => MeasureSpec::Cfunc,
            "tangle" => MeasureSpec::Tangle,
            "concurrence" => MeasureSpec::Concurrence,
            "eof" => MeasureSpec::Eof,
            _ => {
                if let Some(rest) = s.strip_prefix("branch:") {
                    let (n, m) = parse_pair(rest).ok_or_else(bad)?;
                    MeasureSpec::Branch(n, m)
                } else if let Some(rest) = s.strip_prefix("cbranch:") {
                    let (n, m) = parse_pair(rest).ok_or_else(bad)?;
                    MeasureSpec::Cbranch(n, m)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

/// Evenly spaced fidelities `from, from + step, …`, ending exactly at `to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl Grid {
    pub fn validate(&self) -> CliResult<()> {
        let Grid { from, to, step } = *self;
        if !(from.is_finite() && to.is_finite() && step.is_finite()) {
            return Err(CliError::usage("grid bounds must be finite"));
        }
        if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from > to {
            return Err(CliError::usage(format!("grid [{from}, {to}] must satisfy 0 <= from <= to <= 1")));
        }
        if step <= 0.0 {
            return Err(CliError::usage(format!("grid step {step} must be positive")));
        }
        if (to - from) / step > MAX_GRID_POINTS as f64 {
            return Err(CliError::usage(format!("grid has more than {MAX_GRID_POINTS} points")));
        }
        Ok(())
    }

    pub fn points(&self) -> CliResult<Vec<f64>> {
        self.validate()?;
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|i| (self.from + self.step * i as f64).min(self.to)).collect();
        if self.to - pts[pts.len() - 1] > 1e-12 {
            pts.push(self.to);
        }
        Ok(pts)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRequest {
    pub ds: Vec<usize>,
    pub measures: Vec<MeasureSpec>,
    pub derivatives: Vec<u8>,
    pub grid: Grid,
}

/// A fidelity column followed by one column per series. Entries outside a
/// series' domain are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub fidelity: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

struct Column {
    name: String,
    d: usize,
    measure: MeasureSpec,
    order: u8,
}

struct Curves {
    tangle: PiecewiseCurve,
    concurrence: PiecewiseCurve,
    eof: PiecewiseCurve,
}

fn evaluate(col: &Column, curves: &Curves, f: f64) -> f64 {
    let d = col.d;
    let value = match (col.measure, col.order) {
        (MeasureSpec::Csquared, 0) => csquared(f, d),
        (MeasureSpec::Csquared, 1) => csquared_d_f(f, d),
        (MeasureSpec::Csquared, _) => csquared_d2_f(f, d),
        (MeasureSpec::Cfunc, 0) => concurrence_function(f, d),
        (MeasureSpec::Cfunc, 1) => concurrence_d_f(f, d),
        (MeasureSpec::Cfunc, _) => concurrence_d2_f(f, d),
        (MeasureSpec::Tangle, _) => curves.tangle.eval(f),
        (MeasureSpec::Concurrence, _) => curves.concurrence.eval(f),
        (MeasureSpec::Eof, _) => curves.eof.eval(f),
        (MeasureSpec::Branch(n, m), _) => ExtremumBranch::new(n, m, d).and_then(|b| branch_tangle(b, f)),
        (MeasureSpec::Cbranch(n, m), _) => ExtremumBranch::new(n, m, d).and_then(|b| branch_concurrence(b, f)),
    };
    value.unwrap_or(f64::NAN)
}

impl CurveRequest {
    fn columns(&self) -> CliResult<Vec<Column>> {
        if self.ds.is_empty() || self.measures.is_empty() || self.derivatives.is_empty() {
            return Err(CliError::usage("need at least one dimension, measure and derivative order"));
        }
        let mut cols = Vec::new();
        for &d in &self.ds {
            if d < 2 {
                return Err(CliError::usage(format!("dimension {d} must be at least 2")));
            }
            for &measure in &self.measures {
                if let MeasureSpec::Branch(n, m) | MeasureSpec::Cbranch(n, m) = measure {
                    ExtremumBranch::new(n, m, d)
                        .map_err(|_| CliError::usage(format!("branch ({n}, {m}) needs n >= 1 and n + m <= d = {d}")))?;
                }
                for &order in &self.derivatives {
                    if order > measure.max_derivative() {
                        return Err(CliError::usage(format!("measure `{}` has no derivative of order {order}", measure.name())));
                    }
                    let mut name = measure.name();
                    if order > 0 {
                        name.push_str(&format!("_d{order}"));
                    }
                    if self.ds.len() > 1 {
                        name.push_str(&format!("@d={d}"));
                    }
                    cols.push(Column { name, d, measure, order });
                }
            }
        }
        Ok(cols)
    }

    /// Evaluates every series on the grid. Rows come back in grid order
    /// whatever the evaluation schedule.
    pub fn tabulate(&self) -> CliResult<Table> {
        let cols = self.columns()?;
        let fidelity = self.grid.points()?;
        let mut curves = std::collections::BTreeMap::new();
        for &d in &self.ds {
            curves.insert(d, Curves { tangle: tangle_curve(d)?, concurrence: concurrence_curve(d)?, eof: eof_iso_curve(d)? });
        }
        let rows = fidelity
            .par_iter()
            .map(|&f| cols.iter().map(|c| evaluate(c, &curves[&c.d], f)).collect())
            .collect();
        Ok(Table { columns: cols.into_iter().map(|c| c.name).collect(), fidelity, rows })
    }
}

/// 17 significant digits, enough to recover every double exactly.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

impl Table {
    pub fn series(&self, j: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.fidelity.iter().zip(&self.rows).map(move |(&f, r)| (f, r[j]))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["F".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (f, row) in self.fidelity.iter().zip(&self.rows) {
            let mut rec = vec![format_value(*f)];
            rec.extend(row.iter().map(|&v| format_value(v)));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|source| CliError::Io { path: "<csv>".into(), source })?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ASCII"))
    }

    pub fn read_csv<R: Read>(input: R) -> CliResult<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        if header.len() < 2 || &header[0] != "F" {
            return Err(CliError::usage("csv header must start with F and name at least one series"));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut fidelity = Vec::new();
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("csv row {}: bad number `{s}`", i + 2)))
            };
            fidelity.push(parse(&rec[0])?);
            rows.push(rec.iter().skip(1).map(parse).collect::<CliResult<Vec<f64>>>()?);
        }
        if fidelity.is_empty() {
            return Err(CliError::usage("csv has no data rows"));
        }
        Ok(Table { columns, fidelity, rows })
    }
}
