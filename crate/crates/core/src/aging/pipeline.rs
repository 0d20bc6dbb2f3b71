use rayon::prelude::*;

use crate::colorimetry::{
    self, srgb_decode, srgb_decode_table, srgb_encode, EncodedRgb, LinearRgb,
};
use crate::error::Result;
use crate::raster::{run_with_workers, SrgbImage};

use super::{AgingMode, AgingOperator};

/// Renders one encoded pixel as the aged display would show it, re-expressed
/// in standard sRGB. Linear values are clamped to `[0, 1]` right before
/// encoding.
pub fn age_pixel(e: EncodedRgb, op: &AgingOperator) -> EncodedRgb {
    if op.mode == AgingMode::None {
        return e;
    }
    age_linear(srgb_decode(e), op)
}

/// 8-bit variant of [`age_pixel`].
pub fn age_pixel_u8(px: [u8; 3], op: &AgingOperator) -> [u8; 3] {
    if op.mode == AgingMode::None {
        return px;
    }
    let table = srgb_decode_table();
    let lin = LinearRgb::new(
        table[px[0] as usize],
        table[px[1] as usize],
        table[px[2] as usize],
    );
    age_linear(lin, op).to_u8()
}

fn age_linear(lin: LinearRgb, op: &AgingOperator) -> EncodedRgb {
    let xyz = op.to_xyz(lin);
    let out = LinearRgb::from_vector(colorimetry::srgb_xyz_matrix_inverse() * xyz.to_vector());
    srgb_encode(out.clamped())
}

/// Applies [`age_pixel_u8`] to every pixel. Alpha is copied unchanged.
///
/// `workers` selects the thread count (`None` uses the global pool); the
/// output does not depend on it.
pub fn age_image(img: &SrgbImage, op: &AgingOperator, workers: Option<usize>) -> Result<SrgbImage> {
    if op.mode == AgingMode::None {
        return Ok(img.clone());
    }
    let mut out = img.clone();
    let ch = img.channels();
    let row_len = img.width() as usize * ch;
    if row_len == 0 {
        return Ok(out);
    }
    run_with_workers(workers, || {
        out.data_mut().par_chunks_mut(row_len).for_each(|row| {
            for px in row.chunks_exact_mut(ch) {
                let aged = age_pixel_u8([px[0], px[1], px[2]], op);
                px[..3].copy_from_slice(&aged);
            }
        });
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aging::{build_operator, ideal_srgb_targets, LuminanceDecayCurve};
    use crate::synthetic::DriftSpec;

    #[test]
    fn black_stays_black() {
        let series = DriftSpec::default().generate().unwrap();
        let curve = LuminanceDecayCurve::default();
        for mode in [AgingMode::ChromaOnly, AgingMode::ChromaPlusLuma] {
            let op = build_operator(&series, 12_345.0, &curve, mode).unwrap();
            assert_eq!(age_pixel_u8([0, 0, 0], &op), [0, 0, 0]);
        }
    }

    #[test]
    fn none_mode_copies() {
        let op = AgingOperator::identity();
        assert_eq!(age_pixel_u8([1, 2, 3], &op), [1, 2, 3]);
        let img = SrgbImage::from_rgba(2, 1, vec![10, 20, 30, 40, 50, 60, 70, 80]).unwrap();
        assert_eq!(age_image(&img, &op, Some(2)).unwrap(), img);
    }

    #[test]
    fn alpha_is_preserved() {
        let series = DriftSpec::default().generate().unwrap();
        let op = build_operator(&series, 18_000.0, &LuminanceDecayCurve::default(), AgingMode::ChromaPlusLuma)
            .unwrap();
        let img = SrgbImage::from_rgba(2, 1, vec![200, 120, 180, 7, 250, 250, 250, 255]).unwrap();
        let aged = age_image(&img, &op, None).unwrap();
        assert_eq!(aged.data()[3], 7);
        assert_eq!(aged.data()[7], 255);
        assert_ne!(&aged.data()[..3], &img.data()[..3]);
    }

    #[test]
    fn targets_match_ideal_on_fresh_default_series() {
        let series = DriftSpec::default().generate().unwrap();
        let op = build_operator(&series, 0.0, &LuminanceDecayCurve::default(), AgingMode::ChromaOnly).unwrap();
        for (a, b) in op.targets.iter().zip(ideal_srgb_targets().iter()) {
            assert!((a.to_vector() - b.to_vector()).abs().max() < 1e-12);
        }
    }
}
