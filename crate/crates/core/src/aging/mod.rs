//! Display aging simulation.
//!
//! A display is characterized by xyY measurements of its white point and its
//! red, green and blue primary tips over its lifetime. At a target age the
//! measurements are interpolated in time, optionally scaled by a luminance
//! decay curve, and turned into four RGB to XYZ transforms, one per color
//! point. Each pixel is linearized, assigned to its nearest color point,
//! transformed to XYZ with that point's matrix and re-encoded as standard
//! sRGB, so the aged rendering can be viewed next to the original on an
//! ordinary sRGB display.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;

mod decay;
mod measurements;
mod operator;
mod pipeline;

pub use decay::{apply_decay, LuminanceDecayCurve};
pub use measurements::{load_measurements, MeasurementRecord, MeasurementSeries, CSV_HEADER};
pub use operator::{
    average_primed, build_operator, build_primed, classify, ideal_srgb_targets, AgingOperator,
};
pub use pipeline::{age_image, age_pixel, age_pixel_u8};

use crate::error::Error;

/// White point or one of the three primary tips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorPoint {
    White,
    Red,
    Green,
    Blue,
}

impl ColorPoint {
    pub const ALL: [ColorPoint; 4] = [Self::White, Self::Red, Self::Green, Self::Blue];

    pub const fn index(self) -> usize {
        self as usize
    }

    /// Linear RGB coordinate of the point: (1,1,1), (1,0,0), (0,1,0), (0,0,1).
    pub fn canonical(self) -> Vector3<f64> {
        operator::canonical_vector(self)
    }

    /// Column-name suffix in the measurement CSV.
    pub const fn suffix(self) -> &'static str {
        match self {
            Self::White => "w",
            Self::Red => "r",
            Self::Green => "g",
            Self::Blue => "b",
        }
    }
}

/// Which parts of the display age.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgingMode {
    /// Stable luminance and chrominance.
    None,
    /// Stabilized luminance, drifting chrominance.
    ChromaOnly,
    /// Decaying luminance and drifting chrominance.
    ChromaPlusLuma,
}

impl AgingMode {
    pub const ALL: [AgingMode; 3] = [Self::None, Self::ChromaOnly, Self::ChromaPlusLuma];

    /// Name used on the command line and in CSV files.
    pub const fn as_str(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::ChromaOnly => "chroma",
            Self::ChromaPlusLuma => "chroma_luma",
        }
    }
}

impl fmt::Display for AgingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "none" => Ok(Self::None),
            "chroma" => Ok(Self::ChromaOnly),
            "chroma_luma" => Ok(Self::ChromaPlusLuma),
            other => Err(Error::InvalidArgument(format!(
                "unknown aging mode `{other}` (expected none, chroma or chroma_luma)"
            ))),
        }
    }
}
