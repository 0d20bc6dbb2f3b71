//! Deterministic synthetic inputs: a drifting display measurement series and
//! a stained-tissue-like test image.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aging::{ColorPoint, MeasurementRecord, MeasurementSeries};
use crate::colorimetry::{srgb_xyz_matrix, Xyy, D65_XY, SRGB_PRIMARIES_XY};
use crate::error::{Error, Result};
use crate::raster::SrgbImage;

/// Linear chromaticity drift of a display with stabilized luminance.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    /// Number of measurement sessions, at least 2.
    pub count: usize,
    /// Age at the last session; sessions are evenly spaced from 0.
    pub duration_hours: f64,
    /// White luminance in cd/m². Primaries get the sRGB share of it.
    pub white_luminance: f64,
    /// Chromaticity of white, red, green, blue at 0 h.
    pub initial_xy: [(f64, f64); 4],
    /// Change of (x, y) per 1000 h for white, red, green, blue.
    pub drift_per_khour: [(f64, f64); 4],
    /// Half-width of uniform jitter added to every x and y after 0 h.
    pub jitter: f64,
    pub seed: u64,
}

impl Default for DriftSpec {
    /// 31 sessions over 18,000 h, starting at exact sRGB chromaticities. White
    /// yellows, blue loses saturation and green drifts toward yellow.
    fn default() -> Self {
        Self {
            count: 31,
            duration_hours: 18_000.0,
            white_luminance: 350.0,
            initial_xy: [D65_XY, SRGB_PRIMARIES_XY[0], SRGB_PRIMARIES_XY[1], SRGB_PRIMARIES_XY[2]],
            drift_per_khour: [
                (0.000_45, 0.000_60),
                (-0.000_30, 0.000_15),
                (0.000_55, -0.000_40),
                (0.000_25, 0.000_70),
            ],
            jitter: 0.0,
            seed: 0,
        }
    }
}

impl DriftSpec {
    /// Default spec with every drift rate set to zero.
    pub fn zero_drift() -> Self {
        Self {
            drift_per_khour: [(0.0, 0.0); 4],
            ..Self::default()
        }
    }

    /// Raw records with luminance in cd/m².
    pub fn records(&self) -> Result<Vec<MeasurementRecord>> {
        if self.count < 2 {
            return Err(Error::InvalidArgument(format!("count must be at least 2, got {}", self.count)));
        }
        if !(self.duration_hours > 0.0 && self.duration_hours.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "duration must be positive, got {}",
                self.duration_hours
            )));
        }
        if !(self.white_luminance > 0.0) {
            return Err(Error::InvalidArgument("white luminance must be positive".into()));
        }
        if !(self.jitter >= 0.0) {
            return Err(Error::InvalidArgument("jitter must be non-negative".into()));
        }
        let m = srgb_xyz_matrix();
        let share = [1.0, m[(1, 0)], m[(1, 1)], m[(1, 2)]];
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        for k in 0..self.count {
            let hours = self.duration_hours * k as f64 / (self.count - 1) as f64;
            let mut points = [Xyy::new(0.0, 0.0, 0.0); 4];
            for p in ColorPoint::ALL {
                let i = p.index();
                let (x0, y0) = self.initial_xy[i];
                let (dx, dy) = self.drift_per_khour[i];
                let mut x = x0 + dx * hours / 1000.0;
                let mut y = y0 + dy * hours / 1000.0;
                if k > 0 && self.jitter > 0.0 {
                    x += rng.random_range(-self.jitter..=self.jitter);
                    y += rng.random_range(-self.jitter..=self.jitter);
                }
                points[i] = Xyy::new(x, y, self.white_luminance * share[i]);
            }
            out.push(MeasurementRecord { hours, points });
        }
        Ok(out)
    }

    pub fn generate(&self) -> Result<MeasurementSeries> {
        MeasurementSeries::new(self.records()?)
    }
}

/// A pseudo H&E slide: pale background, pink stroma, purple nuclei.
pub fn synthetic_slide(width: u32, height: u32, seed: u64) -> SrgbImage {
    const BACKGROUND: [f64; 3] = [242.0, 236.0, 244.0];
    const STROMA: [f64; 3] = [228.0, 150.0, 196.0];
    const EOSIN: [f64; 3] = [196.0, 92.0, 152.0];
    const NUCLEUS: [f64; 3] = [86.0, 48.0, 138.0];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);
    let scale = w.min(h).max(1.0);
    let blobs = |rng: &mut ChaCha8Rng, n: usize, r0: f64, r1: f64| -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|_| {
                (
                    rng.random_range(0.0..=w),
                    rng.random_range(0.0..=h),
                    scale * rng.random_range(r0..=r1),
                )
            })
            .collect()
    };
    let tissue = blobs(&mut rng, 12, 0.12, 0.30);
    let fibers = blobs(&mut rng, 30, 0.02, 0.07);
    let nuclei = blobs(&mut rng, 80, 0.008, 0.025);
    let inside = |set: &[(f64, f64, f64)], x: f64, y: f64| {
        set.iter().any(|&(cx, cy, r)| (x - cx).powi(2) + (y - cy).powi(2) <= r * r)
    };

    let mut data = Vec::with_capacity(width as usize * height as usize * 3);
    for py in 0..height {
        for px in 0..width {
            let (x, y) = (px as f64 + 0.5, py as f64 + 0.5);
            let base = if inside(&nuclei, x, y) {
                NUCLEUS
            } else if inside(&fibers, x, y) {
                EOSIN
            } else if inside(&tissue, x, y) {
                STROMA
            } else {
                BACKGROUND
            };
            for c in base {
                let v = c + rng.random_range(-10.0..=10.0);
                data.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    SrgbImage::from_rgb(width, height, data).expect("buffer sized for width x height x 3")
}
