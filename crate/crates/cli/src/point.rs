use std::fmt::Write;

use isotangle::iso::{concurrence_curve, eof_iso_curve, tangle_curve, PiecewiseCurve};
use isotangle::states::is_isotropic_separable;

use crate::error::{CliError, CliResult};

/// Value and active segment of one curve at one fidelity.
#[derive(Clone, Debug, PartialEq)]
pub struct PointValue {
    pub value: f64,
    pub segment: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointReport {
    pub d: usize,
    pub fidelity: f64,
    pub separable: bool,
    pub tangle: PointValue,
    pub concurrence: PointValue,
    pub eof: PointValue,
}

fn at(curve: &PiecewiseCurve, f: f64) -> CliResult<PointValue> {
    let segment = curve.segment_at(f).map(|s| s.label()).unwrap_or("none");
    Ok(PointValue { value: curve.eval(f)?, segment })
}

/// All three mixed-state measures of the isotropic state `ρ_F`.
pub fn point(d: usize, fidelity: f64) -> CliResult<PointReport> {
    if d < 2 {
        return Err(CliError::usage(format!("dimension {d} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(CliError::usage(format!("fidelity {fidelity} outside [0, 1]")));
    }
    Ok(PointReport {
        d,
        fidelity,
        separable: is_isotropic_separable(d, fidelity)?,
        tangle: at(&tangle_curve(d)?, fidelity)?,
        concurrence: at(&concurrence_curve(d)?, fidelity)?,
        eof: at(&eof_iso_curve(d)?, fidelity)?,
    })
}

impl PointReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "d           = {}", self.d).unwrap();
        writeln!(s, "F           = {}", self.fidelity).unwrap();
        writeln!(s, "separable   = {}", self.separable).unwrap();
        for (name, v) in [("tangle", &self.tangle), ("concurrence", &self.concurrence), ("eof", &self.eof)] {
            writeln!(s, "{name:<11} = {} ({})", v.value, v.segment).unwrap();
        }
        s
    }
}
