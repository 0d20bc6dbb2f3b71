use crate::error::{Error, Result};

use super::{AgingMode, MeasurementRecord};

/// Piecewise-linear fraction of initial luminance remaining at a given age.
#[derive(Debug, Clone, PartialEq)]
pub struct LuminanceDecayCurve {
    anchors: Vec<(f64, f64)>,
}

impl Default for LuminanceDecayCurve {
    /// 100% at 0 h, 67% at 10,000 h, 40% at 18,000 h.
    fn default() -> Self {
        Self {
            anchors: vec![(0.0, 1.0), (10_000.0, 0.67), (18_000.0, 0.40)],
        }
    }
}

impl LuminanceDecayCurve {
    /// Anchors must start at `(0, 1.0)`, with strictly increasing hours and
    /// non-increasing fractions in `(0, 1]`.
    pub fn new(anchors: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidDecayCurve(m));
        match anchors.first() {
            None => return bad("no anchors".into()),
            Some(&(h, f)) if h != 0.0 || f != 1.0 => {
                return bad(format!("first anchor must be (0, 1.0), got ({h}, {f})"))
            }
            _ => {}
        }
        for w in anchors.windows(2) {
            let ((h0, f0), (h1, f1)) = (w[0], w[1]);
            if !(h1 > h0) || !h1.is_finite() {
                return bad(format!("hours must strictly increase ({h0} then {h1})"));
            }
            if !(f1 > 0.0 && f1 <= 1.0) {
                return bad(format!("fraction {f1} at {h1} h is outside (0, 1]"));
            }
            if f1 > f0 {
                return bad(format!("fraction increases from {f0} to {f1} at {h1} h"));
            }
        }
        Ok(Self { anchors })
    }

    /// Parses `hours fraction` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut anchors = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                source_name: source_name.to_owned(),
                line: i as u64 + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [h, f] = fields.as_slice() else {
                return Err(parse_err(format!(
                    "expected `hours fraction`, found {} fields",
                    fields.len()
                )));
            };
            let num = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(format!("cannot parse `{s}` as a number")))
            };
            anchors.push((num(h)?, num(f)?));
        }
        Self::new(anchors).map_err(|e| match e {
            Error::InvalidDecayCurve(m) => Error::InvalidDecayCurve(format!("{source_name}: {m}")),
            other => other,
        })
    }

    pub fn anchors(&self) -> &[(f64, f64)] {
        &self.anchors
    }

    /// Remaining fraction at `hours`; holds the last anchor beyond its time.
    pub fn fraction_at(&self, hours: f64) -> f64 {
        let a = &self.anchors;
        if hours <= a[0].0 {
            return a[0].1;
        }
        let upper = a.partition_point(|&(h, _)| h <= hours);
        if upper == a.len() {
            return a[a.len() - 1].1;
        }
        let (h0, f0) = a[upper - 1];
        let (h1, f1) = a[upper];
        if h0 == hours {
            return f0;
        }
        f0 + (f1 - f0) * (hours - h0) / (h1 - h0)
    }
}

/// Applies luminance loss for [`AgingMode::ChromaPlusLuma`]; other modes keep
/// the record unchanged.
pub fn apply_decay(
    record: &MeasurementRecord,
    curve: &LuminanceDecayCurve,
    hours: f64,
    mode: AgingMode,
) -> MeasurementRecord {
    match mode {
        AgingMode::ChromaPlusLuma => record.scaled(curve.fraction_at(hours)),
        AgingMode::ChromaOnly | AgingMode::None => *record,
    }
}
