//! Per-pixel CIEDE2000 maps between an original and an aged rendering, their
//! summary statistics, aging curves and lifetime estimation.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::colorimetry::{delta_e_2000, linear_to_lab, srgb_decode_table, Lab, LinearRgb};
use crate::error::{Error, Result};
use crate::raster::{run_with_workers, SrgbImage};

mod heatmap;
mod lifetime;

pub use heatmap::{colormap, heatmap_index, render_heatmap, HEATMAP_MAX, HEATMAP_MIN};
pub use lifetime::{aging_curve, lifetime, AgingCurve, Lifetime, LifetimeEntry, LifetimeReport, Statistic};

/// Magic bytes of the binary map format.
pub const DEM1_MAGIC: &[u8; 4] = b"DEM1";

/// Row-major ΔE2000 value per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaEMap {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl DeltaEMap {
    pub fn new(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != width as usize * height as usize {
            return Err(Error::InvalidArgument(format!(
                "{width}x{height} map needs {} values, got {}",
                width as usize * height as usize,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("ΔE values must be finite and non-negative, got {v}")));
        }
        Ok(Self { width, height, values })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    /// Values rounded to `f32`, i.e. exactly what the binary format stores.
    pub fn to_f32_precision(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|&v| f64::from(v as f32)).collect(),
        }
    }

    /// Writes `DEM1`, width and height as u32 LE, then f32 LE values.
    pub fn write_dem1<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut buf = Vec::with_capacity(12 + 4 * self.values.len());
        buf.extend_from_slice(DEM1_MAGIC);
        buf.extend_from_slice(&self.width.to_le_bytes());
        buf.extend_from_slice(&self.height.to_le_bytes());
        for &v in &self.values {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn to_dem1_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_dem1(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn read_dem1<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::DeltaEFormat(e.to_string()))?;
        Self::from_dem1_bytes(&bytes)
    }

    pub fn from_dem1_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != DEM1_MAGIC {
            return Err(Error::DeltaEFormat("missing DEM1 header".into()));
        }
        let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let body = &bytes[12..];
        let expected = width as usize * height as usize * 4;
        if body.len() != expected {
            return Err(Error::DeltaEFormat(format!(
                "{width}x{height} map needs {expected} payload bytes, found {}",
                body.len()
            )));
        }
        let values = body
            .chunks_exact(4)
            .map(|c| f64::from(f32::from_le_bytes(c.try_into().unwrap())))
            .collect();
        Self::new(width, height, values).map_err(|e| Error::DeltaEFormat(e.to_string()))
    }
}

fn pixel_lab(px: [u8; 3]) -> Lab {
    let t = srgb_decode_table();
    linear_to_lab(LinearRgb::new(t[px[0] as usize], t[px[1] as usize], t[px[2] as usize]))
}

/// ΔE2000 between two 8-bit sRGB pixels, evaluated in CIELAB under D65.
pub fn pixel_delta_e(a: [u8; 3], b: [u8; 3]) -> f64 {
    if a == b {
        return 0.0;
    }
    delta_e_2000(pixel_lab(a), pixel_lab(b))
}

/// Per-pixel ΔE2000 between two images of equal size. Alpha is ignored.
pub fn delta_e_map(original: &SrgbImage, aged: &SrgbImage, workers: Option<usize>) -> Result<DeltaEMap> {
    original.same_dimensions(aged)?;
    let width = original.width() as usize;
    let mut values = vec![0.0; original.pixel_count()];
    if width > 0 {
        let (ca, cb) = (original.channels(), aged.channels());
        run_with_workers(workers, || {
            values
                .par_chunks_mut(width)
                .zip(original.data().par_chunks(width * ca))
                .zip(aged.data().par_chunks(width * cb))
                .for_each(|((out, ra), rb)| {
                    for ((v, pa), pb) in out.iter_mut().zip(ra.chunks_exact(ca)).zip(rb.chunks_exact(cb)) {
                        *v = pixel_delta_e([pa[0], pa[1], pa[2]], [pb[0], pb[1], pb[2]]);
                    }
                });
        })?;
    }
    DeltaEMap::new(original.width(), original.height(), values)
}

/// Pixel-population summary of a ΔE map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEStats {
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub max: f64,
    pub min: f64,
    /// `mean - 2 std`; may be negative.
    pub ci_low: f64,
    /// `mean + 2 std`.
    pub ci_high: f64,
}

impl DeltaEStats {
    pub const CSV_HEADER: &'static str = "mean,std,max,min,ci_low,ci_high";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.mean, self.std, self.max, self.min, self.ci_low, self.ci_high
        )
    }

    pub fn get(&self, s: Statistic) -> f64 {
        match s {
            Statistic::Mean => self.mean,
            Statistic::Max => self.max,
        }
    }
}

/// Neumaier-compensated sum in slice order.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn delta_e_stats(map: &DeltaEMap) -> Result<DeltaEStats> {
    let v = map.values();
    if v.is_empty() {
        return Err(Error::Empty("ΔE map has no pixels"));
    }
    let n = v.len() as f64;
    let mean = compensated_sum(v.iter().copied()) / n;
    let var = compensated_sum(v.iter().map(|x| (x - mean) * (x - mean))) / n;
    let std = var.sqrt();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    // Guard the documented ordering against last-ulp rounding of the mean.
    let mean = mean.clamp(min, max);
    Ok(DeltaEStats {
        mean,
        std,
        max,
        min,
        ci_low: mean - 2.0 * std,
        ci_high: mean + 2.0 * std,
    })
}
