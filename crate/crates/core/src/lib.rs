//! Simulation of display aging on sRGB images.
//!
//! * [`colorimetry`]: xyY, XYZ, sRGB and CIELAB conversions and CIEDE2000.
//! * [`aging`]: measurement series, luminance decay and the per-pixel aging
//!   transform.
//! * [`analysis`]: ΔE2000 maps, statistics, aging curves, lifetimes and
//!   heatmaps.
//! * [`readerstats`]: percent agreement, Wilson intervals, t- and F-tests for
//!   reader studies.
//! * [`synthetic`]: deterministic measurement series and test images.

pub mod aging;
pub mod analysis;
pub mod colorimetry;
pub mod error;
pub mod raster;
pub mod readerstats;
pub mod synthetic;

pub use aging::{
    age_image, age_pixel, build_operator, classify, load_measurements, AgingMode, AgingOperator,
    ColorPoint, LuminanceDecayCurve, MeasurementRecord, MeasurementSeries,
};
pub use analysis::{
    aging_curve, delta_e_map, delta_e_stats, lifetime, render_heatmap, AgingCurve, DeltaEMap,
    DeltaEStats, Lifetime, LifetimeReport, Statistic,
};
pub use colorimetry::{delta_e_2000, EncodedRgb, Lab, LinearRgb, Xyy, Xyz};
pub use error::{Error, Result};
pub use raster::SrgbImage;
pub use synthetic::{synthetic_slide, DriftSpec};
