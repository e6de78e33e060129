//! Piecewise curves for the isotropic-state measures and for lower convex
//! envelopes of sampled data.

use crate::error::{domain_err, Error, Result};
use crate::pure_measures::Measure;

use super::{csquared, eof_curve_point, max_tangle, tangent_point, tangent_slope};

/// How a segment is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentKind {
    Zero,
    /// `C²(F)` on the `(1, d−1)` branch.
    Csquared,
    /// `E(F)` on the `(1, d−1)` branch.
    IsoEof,
    /// `anchor_value + slope·(F − anchor_f)`.
    Linear { slope: f64, anchor_f: f64, anchor_value: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn linear_through(start: (f64, f64), end: (f64, f64)) -> Self {
        let slope = (end.1 - start.1) / (end.0 - start.0);
        Segment {
            start: start.0,
            end: end.0,
            kind: SegmentKind::Linear { slope, anchor_f: start.0, anchor_value: start.1 },
        }
    }

    /// Intercept at `F = 0` of a linear segment.
    pub fn intercept(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Linear { slope, anchor_f, anchor_value } => Some(anchor_value - slope * anchor_f),
            _ => None,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        match self.kind {
            SegmentKind::Linear { slope, .. } => Some(slope),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            SegmentKind::Zero => "zero",
            SegmentKind::Csquared | SegmentKind::IsoEof => "closed-form",
            SegmentKind::Linear { .. } => "linear",
        }
    }
}

/// Contiguous segments covering `[segments[0].start, segments.last().end]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseCurve {
    d: Option<usize>,
    measure: Option<Measure>,
    segments: Vec<Segment>,
}

impl PiecewiseCurve {
    /// Closed-form segments need `d`; segments must be contiguous and ordered.
    pub fn new(d: Option<usize>, measure: Option<Measure>, segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Input("a curve needs at least one segment".into()));
        }
        for s in &segments {
            if s.start.is_nan() || s.end.is_nan() || s.start > s.end {
                return Err(Error::Input(format!("segment [{}, {}] is reversed", s.start, s.end)));
            }
            if matches!(s.kind, SegmentKind::Csquared | SegmentKind::IsoEof) && d.is_none() {
                return Err(Error::Input("closed-form segments need a dimension".into()));
            }
        }
        for w in segments.windows(2) {
            if w[0].end != w[1].start {
                return Err(Error::Input(format!("gap between {} and {}", w[0].end, w[1].start)));
            }
        }
        Ok(Self { d, measure, segments })
    }

    pub fn d(&self) -> Option<usize> {
        self.d
    }

    pub fn measure(&self) -> Option<Measure> {
        self.measure
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.segments[0].start, self.segments[self.segments.len() - 1].end)
    }

    /// Interior segment boundaries.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.windows(2).map(|w| w[0].end).collect()
    }

    /// Index of the segment used at `f`; boundaries belong to the left segment.
    pub fn segment_index(&self, f: f64) -> Option<usize> {
        let (lo, hi) = self.domain();
        if !(f >= lo && f <= hi) {
            return None;
        }
        self.segments.iter().position(|s| f <= s.end)
    }

    pub fn segment_at(&self, f: f64) -> Option<&Segment> {
        self.segment_index(f).map(|i| &self.segments[i])
    }

    fn eval_segment(&self, seg: &Segment, f: f64) -> Result<f64> {
        let d = self.d.unwrap_or(0);
        match seg.kind {
            SegmentKind::Zero => Ok(0.0),
            SegmentKind::Csquared => csquared(f, d),
            SegmentKind::IsoEof => eof_curve_point(f, d),
            SegmentKind::Linear { slope, anchor_f, anchor_value } => Ok(anchor_value + slope * (f - anchor_f)),
        }
    }

    pub fn eval(&self, f: f64) -> Result<f64> {
        match self.segment_index(f) {
            Some(i) => self.eval_segment(&self.segments[i], f),
            None => {
                let (lo, hi) = self.domain();
                domain_err(format!("F = {f} outside the curve domain [{lo}, {hi}]"))
            }
        }
    }

    /// Largest jump between the two one-sided values at any breakpoint.
    pub fn max_continuity_gap(&self) -> f64 {
        self.segments
            .windows(2)
            .map(|w| {
                let f = w[0].end;
                let left = self.eval_segment(&w[0], f).unwrap_or(f64::NAN);
                let right = self.eval_segment(&w[1], f).unwrap_or(f64::NAN);
                (left - right).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest violation of the midpoint inequality `g(x) ≤ (g(x−h) + g(x+h))/2`
    /// on a grid of step `h` over the domain.
    pub fn max_convexity_violation(&self, h: f64) -> f64 {
        let (lo, hi) = self.domain();
        let n = ((hi - lo) / h).floor() as usize;
        let mut worst: f64 = 0.0;
        for i in 1..n {
            let x = lo + h * i as f64;
            let (a, b) = (x - h, (x + h).min(hi));
            if let (Ok(ga), Ok(gx), Ok(gb)) = (self.eval(a), self.eval(x), self.eval(b)) {
                let t = (x - a) / (b - a);
                worst = worst.max(gx - ((1.0 - t) * ga + t * gb));
            }
        }
        worst
    }
}

/// `τ(ρ_F)`: zero up to `1/d`, `C²(F)` up to the tangent point, then the
/// tangent line through `(1, 2(d−1)/d)`.
pub fn tangle_curve(d: usize) -> Result<PiecewiseCurve> {
    super::check_iso_domain(1.0, d)?;
    let lo = 1.0 / d as f64;
    let zero = Segment { start: 0.0, end: lo, kind: SegmentKind::Zero };
    if d == 2 {
        let cs = Segment { start: lo, end: 1.0, kind: SegmentKind::Csquared };
        return PiecewiseCurve::new(Some(d), Some(Measure::Tangle), vec![zero, cs]);
    }
    let ft = tangent_point(d);
    let segments = vec![
        zero,
        Segment { start: lo, end: ft, kind: SegmentKind::Csquared },
        Segment {
            start: ft,
            end: 1.0,
            kind: SegmentKind::Linear { slope: tangent_slope(d), anchor_f: 1.0, anchor_value: max_tangle(d) },
        },
    ];
    PiecewiseCurve::new(Some(d), Some(Measure::Tangle), segments)
}

/// `C(ρ_F)`: zero up to `1/d`, then the line `√(2d/(d−1))·(F − 1/d)`.
pub fn concurrence_curve(d: usize) -> Result<PiecewiseCurve> {
    super::check_iso_domain(1.0, d)?;
    let df = d as f64;
    let lo = 1.0 / df;
    let segments = vec![
        Segment { start: 0.0, end: lo, kind: SegmentKind::Zero },
        Segment {
            start: lo,
            end: 1.0,
            kind: SegmentKind::Linear {
                slope: (2.0 * df / (df - 1.0)).sqrt(),
                anchor_f: 1.0,
                anchor_value: (2.0 * (df - 1.0) / df).sqrt(),
            },
        },
    ];
    PiecewiseCurve::new(Some(d), Some(Measure::Concurrence), segments)
}

/// `E_f(ρ_F)`: zero up to `1/d`, `E(F)` up to the tangent point `4(d−1)/d²`,
/// then the line through `(1, log₂ d)` with slope `d log₂(d−1)/(d−2)`. For
/// `d = 2` there is no linear piece.
pub fn eof_iso_curve(d: usize) -> Result<PiecewiseCurve> {
    super::check_iso_domain(1.0, d)?;
    let df = d as f64;
    let lo = 1.0 / df;
    let zero = Segment { start: 0.0, end: lo, kind: SegmentKind::Zero };
    if d == 2 {
        let e = Segment { start: lo, end: 1.0, kind: SegmentKind::IsoEof };
        return PiecewiseCurve::new(Some(d), Some(Measure::Eof), vec![zero, e]);
    }
    let ft = tangent_point(d);
    let segments = vec![
        zero,
        Segment { start: lo, end: ft, kind: SegmentKind::IsoEof },
        Segment {
            start: ft,
            end: 1.0,
            kind: SegmentKind::Linear {
                slope: df * (df - 1.0).log2() / (df - 2.0),
                anchor_f: 1.0,
                anchor_value: df.log2(),
            },
        },
    ];
    PiecewiseCurve::new(Some(d), Some(Measure::Eof), segments)
}
