use std::path::PathBuf;

use display_aging::aging::{load_measurements, AgingMode, LuminanceDecayCurve};
use display_aging::analysis::{
    aging_curve, delta_e_map, delta_e_stats, heatmap_index, lifetime, pixel_delta_e, render_heatmap,
    AgingCurve, DeltaEMap, DeltaEStats, Lifetime, Statistic,
};
use display_aging::{synthetic_slide, DriftSpec, SrgbImage};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// CIE L* of an sRGB gray, straight from the standard formulas.
fn gray_lightness(code: u8) -> f64 {
    let v = code as f64 / 255.0;
    let y = if v <= 0.04045 { v / 12.92 } else { ((v + 0.055) / 1.055).powf(2.4) };
    let f = if y > 216.0 / 24389.0 { y.cbrt() } else { (24389.0 / 27.0 * y + 16.0) / 116.0 };
    116.0 * f - 16.0
}

/// CIEDE2000 for two neutral colors reduces to a lightness term.
fn neutral_delta_e(l1: f64, l2: f64) -> f64 {
    let lm = (l1 + l2) / 2.0 - 50.0;
    let sl = 1.0 + 0.015 * lm * lm / (20.0 + lm * lm).sqrt();
    (l2 - l1).abs() / sl
}

#[test]
fn map_of_gray_pairs_matches_lightness_oracle() {
    let codes: [u8; 9] = [0, 17, 40, 64, 100, 128, 200, 254, 255];
    let a: Vec<[u8; 3]> = codes.iter().map(|&c| [c, c, c]).collect();
    let b: Vec<[u8; 3]> = codes.iter().rev().map(|&c| [c, c, c]).collect();
    let map = delta_e_map(
        &SrgbImage::from_pixels(3, 3, &a).unwrap(),
        &SrgbImage::from_pixels(3, 3, &b).unwrap(),
        Some(2),
    )
    .unwrap();
    for (i, v) in map.values().iter().enumerate() {
        let want = neutral_delta_e(gray_lightness(codes[i]), gray_lightness(codes[8 - i]));
        assert!((v - want).abs() < 1e-6, "pixel {i}: {v} vs {want}");
    }
    assert!((map.get(0, 0) - 100.0).abs() < 1e-6);
}

#[test]
fn map_equals_per_pixel_delta_e() {
    let a = synthetic_slide(33, 21, 4);
    let b = synthetic_slide(33, 21, 5);
    let map = delta_e_map(&a, &b, None).unwrap();
    for y in 0..21 {
        for x in 0..33 {
            let want = pixel_delta_e(a.pixel(x, y), b.pixel(x, y));
            assert_eq!(map.get(x, y), want);
        }
    }
    assert!(delta_e_map(&a, &synthetic_slide(33, 20, 5), None).is_err());
}

fn brute_stats(v: &[f64]) -> (f64, f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let max = v.iter().cloned().fold(f64::MIN, f64::max);
    let min = v.iter().cloned().fold(f64::MAX, f64::min);
    (mean, var.sqrt(), max, min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stats_match_two_pass_computation(seed in any::<u64>(), w in 1u32..40, h in 1u32..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..w * h).map(|_| rng.random_range(0.0..12.0)).collect();
        let map = DeltaEMap::new(w, h, values.clone()).unwrap();
        let s = delta_e_stats(&map).unwrap();
        let (mean, std, max, min) = brute_stats(&values);
        prop_assert!((s.mean - mean).abs() <= 1e-12 * mean.max(1.0));
        prop_assert!((s.std - std).abs() <= 1e-12 * std.max(1.0));
        prop_assert_eq!(s.max, max);
        prop_assert_eq!(s.min, min);
        prop_assert_eq!(s.ci_low, s.mean - 2.0 * s.std);
        prop_assert_eq!(s.ci_high, s.mean + 2.0 * s.std);
    }

    #[test]
    fn dem1_round_trip(seed in any::<u64>(), w in 1u32..20, h in 1u32..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..w * h).map(|_| rng.random_range(0.0..50.0)).collect();
        let map = DeltaEMap::new(w, h, values).unwrap().to_f32_precision();
        let back = DeltaEMap::from_dem1_bytes(&map.to_dem1_bytes()).unwrap();
        prop_assert_eq!(&back, &map);
        prop_assert_eq!(delta_e_stats(&back).unwrap(), delta_e_stats(&map).unwrap());
    }
}

#[test]
fn dem1_rejects_bad_input() {
    let map = DeltaEMap::new(2, 2, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let bytes = map.to_dem1_bytes();
    assert_eq!(bytes.len(), 4 + 8 + 16);
    assert!(DeltaEMap::from_dem1_bytes(&bytes[..bytes.len() - 1]).is_err());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(DeltaEMap::from_dem1_bytes(&bad).is_err());
}

#[test]
fn heatmap_uses_the_clamped_scale() {
    let map = DeltaEMap::new(4, 1, vec![0.0, 1.0, 4.5, 100.0]).unwrap();
    let img = render_heatmap(&map);
    let cm = display_aging::analysis::colormap();
    assert_eq!(img.pixel(0, 0), cm[0]);
    assert_eq!(img.pixel(1, 0), cm[0]);
    assert_eq!(img.pixel(2, 0), cm[heatmap_index(4.5) as usize]);
    assert_eq!(heatmap_index(4.5), 128);
    assert_eq!(img.pixel(3, 0), cm[255]);
}

fn flat(mean: f64, max: f64) -> DeltaEStats {
    DeltaEStats { mean, std: 0.0, max, min: 0.0, ci_low: mean, ci_high: mean }
}

/// Random non-decreasing curve with max >= mean at every sample.
fn random_curve(rng: &mut ChaCha8Rng) -> AgingCurve {
    let n = rng.random_range(2..30);
    let (mut h, mut mean, mut extra) = (rng.random_range(0.0..100.0), 0.0, 0.0);
    let samples = (0..n)
        .map(|_| {
            let s = (h, flat(mean, mean + extra));
            h += rng.random_range(1.0..1000.0);
            mean += rng.random_range(0.0..1.0);
            extra += rng.random_range(0.0..0.5);
            s
        })
        .collect();
    AgingCurve::new(samples).unwrap()
}

fn value_at(curve: &AgingCurve, stat: Statistic, hours: f64) -> f64 {
    let s = curve.samples();
    let k = s.iter().position(|(h, _)| *h >= hours).unwrap();
    if k == 0 {
        return s[0].1.get(stat);
    }
    let (h0, a) = (s[k - 1].0, s[k - 1].1.get(stat));
    let (h1, b) = (s[k].0, s[k].1.get(stat));
    a + (b - a) * (hours - h0) / (h1 - h0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lifetime_properties(seed in any::<u64>(), t1 in 0.1..10.0f64, dt in 0.0..5.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let curve = random_curve(&mut rng);
        let t2 = t1 + dt;
        let r = lifetime(&curve, &[t1, t2]);
        for stat in [Statistic::Max, Statistic::Mean] {
            let l1 = r.get(stat, t1).unwrap();
            let l2 = r.get(stat, t2).unwrap();
            // Larger tolerance never shortens the lifetime.
            prop_assert!(l2.hours_or_infinity() >= l1.hours_or_infinity());
            match l1 {
                Lifetime::Reached(h) => {
                    let first = curve.samples()[0];
                    if first.1.get(stat) < t1 {
                        prop_assert!((value_at(&curve, stat, h) - t1).abs() < 1e-9);
                    } else {
                        prop_assert_eq!(h, first.0);
                    }
                }
                Lifetime::NotReached => {
                    prop_assert!(curve.samples().iter().all(|(_, s)| s.get(stat) < t1));
                }
            }
        }
        // Max dominates mean, so it crosses first.
        prop_assert!(
            r.get(Statistic::Max, t1).unwrap().hours_or_infinity()
                <= r.get(Statistic::Mean, t1).unwrap().hours_or_infinity()
        );
    }
}

#[test]
fn none_mode_curve_is_zero() {
    let img = synthetic_slide(32, 32, 3);
    let series = DriftSpec::default().generate().unwrap();
    let c = aging_curve(&img, &series, &LuminanceDecayCurve::default(), AgingMode::None, &[0.0, 9000.0, 18000.0], None)
        .unwrap();
    for (_, s) in c.samples() {
        assert_eq!((s.mean, s.max, s.std), (0.0, 0.0, 0.0));
    }
}

#[test]
fn ideal_series_chroma_curve_stays_near_zero() {
    let img = synthetic_slide(48, 48, 3);
    let series = DriftSpec::zero_drift().generate().unwrap();
    let c = aging_curve(&img, &series, &LuminanceDecayCurve::default(), AgingMode::ChromaOnly, &[0.0, 18000.0], None)
        .unwrap();
    for (_, s) in c.samples() {
        assert!(s.max < 0.5, "{s:?}");
    }
}

#[test]
fn luminance_decay_alone_raises_mean_delta_e() {
    let img = synthetic_slide(48, 48, 3);
    let series = DriftSpec::zero_drift().generate().unwrap();
    let c = aging_curve(
        &img,
        &series,
        &LuminanceDecayCurve::default(),
        AgingMode::ChromaPlusLuma,
        &[0.0, 10_000.0, 18_000.0],
        Some(1),
    )
    .unwrap();
    let means: Vec<f64> = c.samples().iter().map(|(_, s)| s.mean).collect();
    assert!(means[0] < 0.5 && means[0] < means[1] && means[1] < means[2], "{means:?}");
}

#[test]
fn curve_matches_explicit_age_and_diff() {
    let img = synthetic_slide(24, 24, 8);
    let series = DriftSpec::default().generate().unwrap();
    let curve = LuminanceDecayCurve::default();
    let c = aging_curve(&img, &series, &curve, AgingMode::ChromaPlusLuma, &[3000.0, 16000.0], None).unwrap();
    for (h, s) in c.samples() {
        let op = display_aging::build_operator(&series, *h, &curve, AgingMode::ChromaPlusLuma).unwrap();
        let aged = display_aging::age_image(&img, &op, None).unwrap();
        let want = delta_e_stats(&delta_e_map(&img, &aged, None).unwrap()).unwrap();
        assert_eq!(*s, want);
    }
}

#[test]
fn fixture_series_luma_lifetimes_not_longer_than_chroma() {
    let file = std::fs::File::open(data_file("synthetic_measurements.csv")).unwrap();
    let series = load_measurements(file, "synthetic_measurements.csv").unwrap();
    assert_eq!(series.len(), 31);
    let img = synthetic_slide(64, 64, 1);
    let hours: Vec<f64> = (0..=36).map(|k| k as f64 * 500.0).collect();
    let curve = LuminanceDecayCurve::default();
    let tol = [3.0, 5.0];
    let chroma = lifetime(&aging_curve(&img, &series, &curve, AgingMode::ChromaOnly, &hours, None).unwrap(), &tol);
    let luma = lifetime(&aging_curve(&img, &series, &curve, AgingMode::ChromaPlusLuma, &hours, None).unwrap(), &tol);
    for (a, b) in luma.entries.iter().zip(chroma.entries.iter()) {
        assert!(a.lifetime.hours_or_infinity() <= b.lifetime.hours_or_infinity(), "{a:?} vs {b:?}");
    }
}
