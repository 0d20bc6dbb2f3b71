use display_aging::colorimetry::{
    delta_e_2000, srgb_decode, srgb_encode, xyy_to_xyz, xyz_to_xyy, EncodedRgb, Lab, LinearRgb, Xyy,
    Xyz,
};
use proptest::prelude::*;

/// The 34 CIEDE2000 reference pairs: L1,a1,b1,L2,a2,b2,ΔE00.
fn reference_pairs() -> Vec<(Lab, Lab, f64)> {
    include_str!("data/ciede2000_pairs.csv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.trim().parse().unwrap()).collect();
            (Lab::new(v[0], v[1], v[2]), Lab::new(v[3], v[4], v[5]), v[6])
        })
        .collect()
}

#[test]
fn ciede2000_reference_pairs() {
    let pairs = reference_pairs();
    assert_eq!(pairs.len(), 34);
    for (i, (a, b, expected)) in pairs.into_iter().enumerate() {
        let got = delta_e_2000(a, b);
        assert!((got - expected).abs() < 1e-4, "pair {}: {got} vs {expected}", i + 1);
        assert_eq!(got, delta_e_2000(b, a), "pair {} not symmetric", i + 1);
    }
}

fn lab() -> impl Strategy<Value = Lab> {
    (0.0..100.0f64, -128.0..128.0f64, -128.0..128.0f64).prop_map(|(l, a, b)| Lab::new(l, a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn delta_e_is_a_symmetric_non_negative_dissimilarity(a in lab(), b in lab()) {
        let d = delta_e_2000(a, b);
        prop_assert!(d >= 0.0 && d.is_finite());
        prop_assert_eq!(d, delta_e_2000(b, a));
        prop_assert_eq!(delta_e_2000(a, a), 0.0);
        if a != b {
            prop_assert!(d > 0.0);
        }
    }
}

proptest! {
    #[test]
    fn xyy_round_trip(x in 0.01..0.7f64, y in 0.01..0.8f64, big_y in 1e-3..500.0f64) {
        prop_assume!(x + y <= 1.0);
        let c = Xyy::new(x, y, big_y);
        let back = xyz_to_xyy(xyy_to_xyz(c).unwrap()).unwrap();
        prop_assert!((back.x - x).abs() <= 1e-12 * x);
        prop_assert!((back.y - y).abs() <= 1e-12 * y);
        prop_assert!((back.luminance - big_y).abs() <= 1e-12 * big_y);

        let t = xyy_to_xyz(c).unwrap();
        let t2 = xyy_to_xyz(back).unwrap();
        for (p, q) in [(t.x, t2.x), (t.y, t2.y), (t.z, t2.z)] {
            prop_assert!((p - q).abs() <= 1e-12 * p.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn transfer_functions_are_inverse(r in 0.0..=1.0f64, g in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let e = EncodedRgb::new(r, g, b);
        let back = srgb_encode(srgb_decode(e));
        prop_assert!((back.r - r).abs() < 1e-9 && (back.g - g).abs() < 1e-9 && (back.b - b).abs() < 1e-9);
        let l = LinearRgb::new(r, g, b);
        let back = srgb_decode(srgb_encode(l));
        prop_assert!((back.r - r).abs() < 1e-9 && (back.g - g).abs() < 1e-9 && (back.b - b).abs() < 1e-9);
    }
}

#[test]
fn degenerate_inputs_error() {
    assert!(xyy_to_xyz(Xyy::new(0.3, 0.0, 1.0)).is_err());
    assert!(xyz_to_xyy(Xyz::new(0.0, 0.0, 0.0)).is_err());
}
