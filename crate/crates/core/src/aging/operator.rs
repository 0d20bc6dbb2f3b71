//! Construction of the per-color-point RGB to XYZ transforms for a display at
//! a given age.

use nalgebra::{Matrix3, Vector3};

use crate::colorimetry::{self, xyy_to_xyz, LinearRgb, Xyz};
use crate::error::{Error, Result};

use super::{apply_decay, AgingMode, ColorPoint, LuminanceDecayCurve, MeasurementSeries};

/// The four transforms `T_w, T_r, T_g, T_b` frozen at one display age.
#[derive(Debug, Clone, PartialEq)]
pub struct AgingOperator {
    /// Indexed by [`ColorPoint::index`].
    pub transforms: [Matrix3<f64>; 4],
    pub age_hours: f64,
    pub mode: AgingMode,
    /// Interpolated, decay-scaled tristimulus value of each color point.
    pub targets: [Xyz; 4],
}

impl AgingOperator {
    /// Operator of a display that renders exactly as standard sRGB.
    pub fn identity() -> Self {
        let m = colorimetry::srgb_xyz_matrix();
        Self {
            transforms: [m; 4],
            age_hours: 0.0,
            mode: AgingMode::None,
            targets: ideal_srgb_targets(),
        }
    }

    pub fn transform(&self, p: ColorPoint) -> &Matrix3<f64> {
        &self.transforms[p.index()]
    }

    /// XYZ of a linear RGB value under the transform its color point selects.
    pub fn to_xyz(&self, l: LinearRgb) -> Xyz {
        let m = self.transform(classify(l));
        Xyz::from_vector(m * l.to_vector())
    }
}

/// Tristimulus values of D65 white and the sRGB primaries at full drive.
pub fn ideal_srgb_targets() -> [Xyz; 4] {
    let m = colorimetry::srgb_xyz_matrix();
    ColorPoint::ALL.map(|p| Xyz::from_vector(m * p.canonical()))
}

/// `T'_i`: the matrix taking the canonical RGB of the three color points
/// other than `i` onto their measured XYZ.
pub fn build_primed(targets: &[Xyz; 4]) -> Result<[Matrix3<f64>; 4]> {
    for t in targets {
        if !(t.x.is_finite() && t.y.is_finite() && t.z.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite XYZ target ({}, {}, {})",
                t.x, t.y, t.z
            )));
        }
    }
    let mut out = [Matrix3::zeros(); 4];
    for excluded in ColorPoint::ALL {
        let mut xyz = Matrix3::zeros();
        let mut basis = Matrix3::zeros();
        for (col, p) in ColorPoint::ALL.into_iter().filter(|&p| p != excluded).enumerate() {
            xyz.set_column(col, &targets[p.index()].to_vector());
            basis.set_column(col, &p.canonical());
        }
        let basis_inv = basis
            .try_inverse()
            .ok_or(Error::SingularMatrix("canonical color point basis"))?;
        let primed = xyz * basis_inv;
        if is_singular(&primed) {
            return Err(Error::SingularMatrix(match excluded {
                ColorPoint::White => "T'_w (targets are linearly dependent)",
                ColorPoint::Red => "T'_r (targets are linearly dependent)",
                ColorPoint::Green => "T'_g (targets are linearly dependent)",
                ColorPoint::Blue => "T'_b (targets are linearly dependent)",
            }));
        }
        out[excluded.index()] = primed;
    }
    Ok(out)
}

fn is_singular(m: &Matrix3<f64>) -> bool {
    let scale = m.column_iter().map(|c| c.norm()).product::<f64>();
    scale == 0.0 || m.determinant().abs() <= 1e-12 * scale
}

/// `T_i = (1/3) sum_{j != i} T'_j`.
pub fn average_primed(primed: &[Matrix3<f64>; 4]) -> [Matrix3<f64>; 4] {
    ColorPoint::ALL.map(|i| {
        let sum = ColorPoint::ALL
            .into_iter()
            .filter(|&j| j != i)
            .fold(Matrix3::zeros(), |acc, j| acc + primed[j.index()]);
        sum / 3.0
    })
}

/// Builds the operator for a display of age `hours`.
///
/// [`AgingMode::None`] yields [`AgingOperator::identity`] regardless of the
/// series.
pub fn build_operator(
    series: &MeasurementSeries,
    hours: f64,
    curve: &LuminanceDecayCurve,
    mode: AgingMode,
) -> Result<AgingOperator> {
    if !hours.is_finite() || hours < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "hours must be finite and non-negative, got {hours}"
        )));
    }
    if mode == AgingMode::None {
        return Ok(AgingOperator {
            age_hours: hours,
            ..AgingOperator::identity()
        });
    }
    let record = apply_decay(&series.interpolate_at(hours), curve, hours, mode);
    let mut targets = [Xyz::new(0.0, 0.0, 0.0); 4];
    for p in ColorPoint::ALL {
        targets[p.index()] = xyy_to_xyz(record.point(p))?;
    }
    let transforms = average_primed(&build_primed(&targets)?);
    for t in &transforms {
        if is_singular(t) {
            return Err(Error::SingularMatrix("averaged transform"));
        }
    }
    Ok(AgingOperator {
        transforms,
        age_hours: hours,
        mode,
        targets,
    })
}

/// Nearest color point to `l` by Euclidean distance in linear RGB; ties go
/// to the earlier of white, red, green, blue.
pub fn classify(l: LinearRgb) -> ColorPoint {
    let v = l.to_vector();
    let mut best = ColorPoint::White;
    let mut best_d = f64::INFINITY;
    for p in ColorPoint::ALL {
        let d = (v - p.canonical()).norm_squared();
        if d < best_d {
            best = p;
            best_d = d;
        }
    }
    best
}

pub(crate) fn canonical_vector(p: ColorPoint) -> Vector3<f64> {
    match p {
        ColorPoint::White => Vector3::new(1.0, 1.0, 1.0),
        ColorPoint::Red => Vector3::new(1.0, 0.0, 0.0),
        ColorPoint::Green => Vector3::new(0.0, 1.0, 0.0),
        ColorPoint::Blue => Vector3::new(0.0, 0.0, 1.0),
    }
}
