use std::fmt;

use rayon::prelude::*;

use crate::aging::{age_pixel_u8, build_operator, AgingMode, LuminanceDecayCurve, MeasurementSeries};
use crate::colorimetry::delta_e_2000;
use crate::error::{Error, Result};
use crate::raster::{run_with_workers, SrgbImage};

use super::{delta_e_stats, pixel_lab, DeltaEMap, DeltaEStats};

/// ΔE statistics of one image sampled at increasing display ages.
#[derive(Debug, Clone, PartialEq)]
pub struct AgingCurve {
    samples: Vec<(f64, DeltaEStats)>,
}

impl AgingCurve {
    /// Needs at least two samples with strictly increasing hours.
    pub fn new(samples: Vec<(f64, DeltaEStats)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "an aging curve needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(w) = samples.windows(2).find(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidArgument(format!(
                "sample hours must strictly increase ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, DeltaEStats)] {
        &self.samples
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("hours,{}\n", DeltaEStats::CSV_HEADER);
        for (h, s) in &self.samples {
            out.push_str(&format!("{h},{}\n", s.to_csv_row()));
        }
        out
    }
}

/// Ages `original` at each sample time and summarizes its ΔE map.
///
/// Equivalent to `age_image`, `delta_e_map` and `delta_e_stats` per sample,
/// with the original's CIELAB values computed once.
pub fn aging_curve(
    original: &SrgbImage,
    series: &MeasurementSeries,
    curve: &LuminanceDecayCurve,
    mode: AgingMode,
    sample_hours: &[f64],
    workers: Option<usize>,
) -> Result<AgingCurve> {
    let pixels: Vec<[u8; 3]> = original.rgb_pixels().collect();
    run_with_workers(workers, || {
        let labs: Vec<_> = pixels.par_iter().map(|&p| pixel_lab(p)).collect();
        let mut samples = Vec::with_capacity(sample_hours.len());
        for &h in sample_hours {
            let op = build_operator(series, h, curve, mode)?;
            let values: Vec<f64> = pixels
                .par_iter()
                .zip(labs.par_iter())
                .map(|(&p, &lab)| {
                    let aged = age_pixel_u8(p, &op);
                    if aged == p {
                        0.0
                    } else {
                        delta_e_2000(lab, pixel_lab(aged))
                    }
                })
                .collect();
            let map = DeltaEMap::new(original.width(), original.height(), values)?;
            samples.push((h, delta_e_stats(&map)?));
        }
        AgingCurve::new(samples)
    })?
}

/// Statistic compared against a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Max,
    Mean,
}

impl Statistic {
    pub const fn as_str(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Mean => "mean",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First time a statistic reaches its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    Reached(f64),
    NotReached,
}

impl Lifetime {
    /// Hours, with `NotReached` as infinity so lifetimes order naturally.
    pub fn hours_or_infinity(self) -> f64 {
        match self {
            Self::Reached(h) => h,
            Self::NotReached => f64::INFINITY,
        }
    }
}

impl fmt::Display for Lifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Reached(h) => write!(f, "{h}"),
            Self::NotReached => f.write_str("not_reached"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeEntry {
    pub statistic: Statistic,
    pub tolerance: f64,
    pub lifetime: Lifetime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeReport {
    pub entries: Vec<LifetimeEntry>,
}

impl LifetimeReport {
    pub fn get(&self, statistic: Statistic, tolerance: f64) -> Option<Lifetime> {
        self.entries
            .iter()
            .find(|e| e.statistic == statistic && e.tolerance == tolerance)
            .map(|e| e.lifetime)
    }
}

/// For every statistic and tolerance, the first time the piecewise-linear
/// curve through the samples reaches the tolerance.
pub fn lifetime(curve: &AgingCurve, tolerances: &[f64]) -> LifetimeReport {
    let mut entries = Vec::with_capacity(2 * tolerances.len());
    for statistic in [Statistic::Max, Statistic::Mean] {
        for &tolerance in tolerances {
            entries.push(LifetimeEntry {
                statistic,
                tolerance,
                lifetime: first_crossing(curve.samples(), statistic, tolerance),
            });
        }
    }
    LifetimeReport { entries }
}

fn first_crossing(samples: &[(f64, DeltaEStats)], statistic: Statistic, tolerance: f64) -> Lifetime {
    let Some(k) = samples.iter().position(|(_, s)| s.get(statistic) >= tolerance) else {
        return Lifetime::NotReached;
    };
    let (h1, s1) = samples[k];
    if k == 0 {
        return Lifetime::Reached(h1);
    }
    let (h0, s0) = samples[k - 1];
    let (v0, v1) = (s0.get(statistic), s1.get(statistic));
    let frac = (tolerance - v0) / (v1 - v0);
    Lifetime::Reached(h0 + frac * (h1 - h0))
}
