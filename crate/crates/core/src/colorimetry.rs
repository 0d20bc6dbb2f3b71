//! Color-space conversions (xyY, XYZ, linear and encoded sRGB, CIELAB) and
//! the CIEDE2000 color difference.
//!
//! Everything here is a pure function over `f64`. Tristimulus values are
//! relative: the reference white has `Y = 1`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Offset constant of the sRGB transfer function.
pub const SRGB_ALPHA: f64 = 0.055;
/// Encoded-domain breakpoint between the linear and power segments.
pub const SRGB_DECODE_BREAK: f64 = 0.04045;
/// Linear-domain breakpoint, the image of [`SRGB_DECODE_BREAK`].
pub const SRGB_ENCODE_BREAK: f64 = 0.0031308;

/// D65 white chromaticity as used by sRGB.
pub const D65_XY: (f64, f64) = (0.3127, 0.3290);
/// sRGB red, green and blue primary chromaticities.
pub const SRGB_PRIMARIES_XY: [(f64, f64); 3] = [(0.64, 0.33), (0.30, 0.60), (0.15, 0.06)];

/// CIE chromaticity plus luminance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Xyy {
    pub x: f64,
    pub y: f64,
    /// Luminance `Y`.
    pub luminance: f64,
}

impl Xyy {
    pub const fn new(x: f64, y: f64, luminance: f64) -> Self {
        Self { x, y, luminance }
    }

    /// Same chromaticity with luminance multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            luminance: self.luminance * factor,
            ..self
        }
    }

    /// Checks the chromaticity is usable for conversion: finite, `y > 0`,
    /// `x >= 0` and `x + y <= 1`.
    pub fn validate(&self) -> Result<()> {
        let ok = self.x.is_finite()
            && self.y.is_finite()
            && self.luminance.is_finite()
            && self.y > 0.0
            && self.x >= 0.0
            && self.x + self.y <= 1.0
            && self.luminance >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidChromaticity {
                x: self.x,
                y: self.y,
                luminance: self.luminance,
            })
        }
    }
}

/// CIE 1931 tristimulus values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Xyz {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Xyz {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::new(self.x * factor, self.y * factor, self.z * factor)
    }
}

/// Linear-light RGB. Values may transiently leave `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl LinearRgb {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        Self { r, g, b }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.r, self.g, self.b)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn clamped(self) -> Self {
        Self::new(
            self.r.clamp(0.0, 1.0),
            self.g.clamp(0.0, 1.0),
            self.b.clamp(0.0, 1.0),
        )
    }
}

/// Gamma-encoded sRGB with channels in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodedRgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl EncodedRgb {
    pub const fn new(r: f64, g: f64, b: f64) -> Self {
        Self { r, g, b }
    }

    pub fn from_u8(px: [u8; 3]) -> Self {
        Self::new(
            f64::from(px[0]) / 255.0,
            f64::from(px[1]) / 255.0,
            f64::from(px[2]) / 255.0,
        )
    }

    /// Quantizes to 8-bit codes, rounding half away from zero.
    pub fn to_u8(self) -> [u8; 3] {
        [quantize(self.r), quantize(self.g), quantize(self.b)]
    }
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// CIE L*a*b*.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }
}

pub fn xyy_to_xyz(c: Xyy) -> Result<Xyz> {
    if !(c.y > 0.0) || !c.x.is_finite() || !c.luminance.is_finite() {
        return Err(Error::InvalidChromaticity {
            x: c.x,
            y: c.y,
            luminance: c.luminance,
        });
    }
    let Xyy { x, y, luminance } = c;
    Ok(Xyz::new(
        x * luminance / y,
        luminance,
        (1.0 - x - y) * luminance / y,
    ))
}

pub fn xyz_to_xyy(t: Xyz) -> Result<Xyy> {
    let sum = t.x + t.y + t.z;
    if !(sum > 0.0) || !sum.is_finite() {
        return Err(Error::DegenerateTristimulus {
            x: t.x,
            y: t.y,
            z: t.z,
        });
    }
    Ok(Xyy::new(t.x / sum, t.y / sum, t.y))
}

/// Encoded to linear for a single channel.
#[inline]
pub fn srgb_decode_channel(v: f64) -> f64 {
    if v <= SRGB_DECODE_BREAK {
        v / 12.92
    } else {
        ((SRGB_ALPHA + v) / (SRGB_ALPHA + 1.0)).powf(2.4)
    }
}

/// Linear to encoded for a single channel.
#[inline]
pub fn srgb_encode_channel(v: f64) -> f64 {
    if v <= SRGB_ENCODE_BREAK {
        v * 12.92
    } else {
        (SRGB_ALPHA + 1.0) * v.powf(1.0 / 2.4) - SRGB_ALPHA
    }
}

pub fn srgb_decode(e: EncodedRgb) -> LinearRgb {
    LinearRgb::new(
        srgb_decode_channel(e.r),
        srgb_decode_channel(e.g),
        srgb_decode_channel(e.b),
    )
}

/// Caller must clamp to `[0, 1]` first.
pub fn srgb_encode(l: LinearRgb) -> EncodedRgb {
    EncodedRgb::new(
        srgb_encode_channel(l.r),
        srgb_encode_channel(l.g),
        srgb_encode_channel(l.b),
    )
}

/// Linear value of every 8-bit code.
pub fn srgb_decode_table() -> &'static [f64; 256] {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; 256];
        for (k, v) in t.iter_mut().enumerate() {
            *v = srgb_decode_channel(k as f64 / 255.0);
        }
        t
    })
}

/// Builds the linear-RGB to XYZ matrix whose columns are the primaries'
/// tristimulus values, scaled so that RGB (1,1,1) lands on `white`.
pub fn rgb_to_xyz_from_primaries(primaries: [(f64, f64); 3], white: Xyz) -> Result<Matrix3<f64>> {
    let mut chroma = Matrix3::zeros();
    for (j, &(x, y)) in primaries.iter().enumerate() {
        let p = xyy_to_xyz(Xyy::new(x, y, 1.0))?;
        chroma.set_column(j, &p.to_vector());
    }
    let inv = chroma.try_inverse().ok_or(Error::SingularMatrix("primary chromaticities"))?;
    let scale = inv * white.to_vector();
    let mut m = chroma;
    for j in 0..3 {
        m.set_column(j, &(chroma.column(j) * scale[j]));
    }
    Ok(m)
}

/// D65 white with `Y = 1`.
pub fn d65_white() -> Xyz {
    xyy_to_xyz(Xyy::new(D65_XY.0, D65_XY.1, 1.0)).expect("D65 chromaticity is valid")
}

/// The sRGB pair of matrices: linear RGB to XYZ and its inverse.
#[derive(Debug, Clone, Copy)]
pub struct SrgbMatrices {
    pub to_xyz: Matrix3<f64>,
    pub from_xyz: Matrix3<f64>,
}

pub fn srgb_matrices() -> &'static SrgbMatrices {
    static M: OnceLock<SrgbMatrices> = OnceLock::new();
    M.get_or_init(|| {
        let to_xyz = rgb_to_xyz_from_primaries(SRGB_PRIMARIES_XY, d65_white())
            .expect("sRGB primaries are non-degenerate");
        let from_xyz = to_xyz.try_inverse().expect("sRGB matrix is invertible");
        SrgbMatrices { to_xyz, from_xyz }
    })
}

/// Standard sRGB linear RGB to XYZ (D65) matrix.
pub fn srgb_xyz_matrix() -> Matrix3<f64> {
    srgb_matrices().to_xyz
}

/// Inverse of [`srgb_xyz_matrix`].
pub fn srgb_xyz_matrix_inverse() -> Matrix3<f64> {
    srgb_matrices().from_xyz
}

const LAB_EPSILON: f64 = 216.0 / 24389.0;
const LAB_KAPPA: f64 = 24389.0 / 27.0;

fn lab_f(t: f64) -> f64 {
    if t > LAB_EPSILON {
        t.cbrt()
    } else {
        (LAB_KAPPA * t + 16.0) / 116.0
    }
}

pub fn xyz_to_lab(t: Xyz, white: Xyz) -> Result<Lab> {
    if !(white.x > 0.0 && white.y > 0.0 && white.z > 0.0) {
        return Err(Error::InvalidWhite {
            x: white.x,
            y: white.y,
            z: white.z,
        });
    }
    let fx = lab_f(t.x / white.x);
    let fy = lab_f(t.y / white.y);
    let fz = lab_f(t.z / white.z);
    Ok(Lab::new(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)))
}

/// Encoded sRGB straight to CIELAB under D65.
pub fn srgb_to_lab(e: EncodedRgb) -> Lab {
    linear_to_lab(srgb_decode(e))
}

pub(crate) fn linear_to_lab(l: LinearRgb) -> Lab {
    let xyz = Xyz::from_vector(srgb_xyz_matrix() * l.to_vector());
    xyz_to_lab(xyz, d65_white()).expect("D65 white is positive")
}

/// CIEDE2000 with `k_L = k_C = k_H = 1`.
pub fn delta_e_2000(lab1: Lab, lab2: Lab) -> f64 {
    const POW25_7: f64 = 6_103_515_625.0; // 25^7

    let c1 = lab1.a.hypot(lab1.b);
    let c2 = lab2.a.hypot(lab2.b);
    let c_bar = 0.5 * (c1 + c2);
    let c_bar7 = c_bar.powi(7);
    let g = 0.5 * (1.0 - (c_bar7 / (c_bar7 + POW25_7)).sqrt());

    let a1p = (1.0 + g) * lab1.a;
    let a2p = (1.0 + g) * lab2.a;
    let c1p = a1p.hypot(lab1.b);
    let c2p = a2p.hypot(lab2.b);
    let h1p = hue_degrees(lab1.b, a1p);
    let h2p = hue_degrees(lab2.b, a2p);

    let dl = lab2.l - lab1.l;
    let dc = c2p - c1p;
    let chroma_product = c1p * c2p;
    let dh_angle = if chroma_product == 0.0 {
        0.0
    } else {
        let d = h2p - h1p;
        if d > 180.0 {
            d - 360.0
        } else if d < -180.0 {
            d + 360.0
        } else {
            d
        }
    };
    let dh = 2.0 * chroma_product.sqrt() * (0.5 * dh_angle).to_radians().sin();

    let l_bar = 0.5 * (lab1.l + lab2.l);
    let c_bar_p = 0.5 * (c1p + c2p);
    let h_bar_p = if chroma_product == 0.0 {
        h1p + h2p
    } else if (h1p - h2p).abs() <= 180.0 {
        0.5 * (h1p + h2p)
    } else if h1p + h2p < 360.0 {
        0.5 * (h1p + h2p + 360.0)
    } else {
        0.5 * (h1p + h2p - 360.0)
    };

    let t = 1.0 - 0.17 * (h_bar_p - 30.0).to_radians().cos()
        + 0.24 * (2.0 * h_bar_p).to_radians().cos()
        + 0.32 * (3.0 * h_bar_p + 6.0).to_radians().cos()
        - 0.20 * (4.0 * h_bar_p - 63.0).to_radians().cos();
    let d_theta = 30.0 * (-((h_bar_p - 275.0) / 25.0).powi(2)).exp();
    let c_bar_p7 = c_bar_p.powi(7);
    let r_c = 2.0 * (c_bar_p7 / (c_bar_p7 + POW25_7)).sqrt();
    let l50 = (l_bar - 50.0).powi(2);
    let s_l = 1.0 + 0.015 * l50 / (20.0 + l50).sqrt();
    let s_c = 1.0 + 0.045 * c_bar_p;
    let s_h = 1.0 + 0.015 * c_bar_p * t;
    let r_t = -(2.0 * d_theta * PI / 180.0).sin() * r_c;

    let tl = dl / s_l;
    let tc = dc / s_c;
    let th = dh / s_h;
    (tl * tl + tc * tc + th * th + r_t * tc * th).max(0.0).sqrt()
}

fn hue_degrees(b: f64, a: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        return 0.0;
    }
    let h = b.atan2(a).to_degrees();
    if h < 0.0 {
        h + 360.0
    } else {
        h
    }
}
