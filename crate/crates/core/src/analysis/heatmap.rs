use std::sync::OnceLock;

use crate::raster::SrgbImage;

use super::DeltaEMap;

/// ΔE at the bottom of the heatmap scale.
pub const HEATMAP_MIN: f64 = 1.0;
/// ΔE at the top of the heatmap scale.
pub const HEATMAP_MAX: f64 = 8.0;

/// Control points of the colormap: (index, sRGB). Entries between points are
/// linear interpolations in encoded sRGB, rounded half up. The resulting ramp
/// has non-decreasing relative luminance from black-violet to pale yellow.
const CONTROL_POINTS: [(usize, [u8; 3]); 5] = [
    (0, [0, 0, 4]),
    (64, [87, 16, 110]),
    (128, [188, 55, 84]),
    (192, [249, 142, 9]),
    (255, [252, 255, 164]),
];

/// The 256-entry heatmap colormap.
pub fn colormap() -> &'static [[u8; 3]; 256] {
    static TABLE: OnceLock<[[u8; 3]; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[0u8; 3]; 256];
        for seg in CONTROL_POINTS.windows(2) {
            let (i0, c0) = seg[0];
            let (i1, c1) = seg[1];
            for (i, entry) in table.iter_mut().enumerate().take(i1 + 1).skip(i0) {
                let t = (i - i0) as f64 / (i1 - i0) as f64;
                for ch in 0..3 {
                    let v = f64::from(c0[ch]) + (f64::from(c1[ch]) - f64::from(c0[ch])) * t;
                    entry[ch] = (v + 0.5).floor() as u8;
                }
            }
        }
        table
    })
}

/// Colormap index of a ΔE value on the fixed 1 to 8 scale.
pub fn heatmap_index(delta_e: f64) -> u8 {
    let t = (delta_e.clamp(HEATMAP_MIN, HEATMAP_MAX) - HEATMAP_MIN) / (HEATMAP_MAX - HEATMAP_MIN);
    (t * 255.0).round() as u8
}

pub fn render_heatmap(map: &DeltaEMap) -> SrgbImage {
    let cm = colormap();
    let data = map
        .values()
        .iter()
        .flat_map(|&v| cm[heatmap_index(v) as usize])
        .collect();
    SrgbImage::from_rgb(map.width(), map.height(), data).expect("one RGB triple per map value")
}
