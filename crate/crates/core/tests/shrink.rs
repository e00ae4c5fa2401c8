use haarcorner::bayes_shrink::{
    band_sigma_w, denoise, estimate_noise_sigma, hard, hard_threshold, soft, soft_threshold,
    ThresholdMode,
};
use haarcorner::image::{load_image, Image, RangeTag};
use haarcorner::matrix::Matrix;
use haarcorner::metrics::psnr;
use haarcorner::noise::{NoiseModel, NoiseRng};
use haarcorner::wavelet::decompose;
use proptest::prelude::*;

fn camera() -> Image<f64> {
    load_image(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../assets/camera.pgm"
    ))
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Matrix<f64>> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        prop::collection::vec(-50.0f64..50.0, r * c)
            .prop_map(move |d| Matrix::new(r, c, d).unwrap())
    })
}

proptest! {
    #[test]
    fn soft_is_one_lipschitz(u in -1e3f64..1e3, v in -1e3f64..1e3, l in 0.0f64..100.0) {
        prop_assert!((soft(u, l) - soft(v, l)).abs() <= (u - v).abs() + 1e-12);
    }

    #[test]
    fn soft_shrinks_and_keeps_sign(u in -1e3f64..1e3, l in 0.0f64..100.0) {
        let s = soft(u, l);
        prop_assert!(s == 0.0 || s.signum() == u.signum());
        prop_assert!(s.abs() <= (u.abs() - l).max(0.0) + 1e-15);
    }

    #[test]
    fn hard_keeps_or_kills(u in -1e3f64..1e3, l in 0.0f64..100.0) {
        let h = hard(u, l);
        prop_assert!(h == 0.0 || h == u);
    }

    #[test]
    fn zeroed_count_matches_brute_force(m in coeffs(), l in 0.0f64..60.0) {
        let brute = m.as_slice().iter().filter(|u| u.abs() <= l).count();
        for out in [soft_threshold(&m, l).unwrap(), hard_threshold(&m, l).unwrap()] {
            let zeros = out.as_slice().iter().zip(m.as_slice())
                .filter(|(o, i)| **o == 0.0 && **i != 0.0 || **i == 0.0).count();
            prop_assert_eq!(zeros, brute);
        }
    }

    #[test]
    fn zeroed_count_monotone_in_lambda(m in coeffs(), a in 0.0f64..30.0, d in 0.0f64..30.0) {
        let count = |l: f64| soft_threshold(&m, l).unwrap().as_slice().iter().filter(|v| **v == 0.0).count();
        prop_assert!(count(a + d) >= count(a));
    }

    #[test]
    fn sigma_w_matches_direct_formula(m in coeffs()) {
        let direct = (m.as_slice().iter().map(|v| v * v).sum::<f64>() / m.len() as f64).sqrt();
        prop_assert!((band_sigma_w(&m).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn soft_is_continuous_at_the_threshold() {
    let l = 2.5f64;
    for side in [-1.0, 1.0] {
        let at = side * l;
        assert_eq!(soft(at, l), 0.0);
        assert!(soft(at + side * 1e-9, l).abs() < 2e-9);
    }
}

#[test]
fn noise_sigma_recovered_from_pure_noise() {
    let mut rng = NoiseRng::new(42);
    let sigma = 0.1;
    let x = Matrix::from_fn(512, 512, |_, _| sigma * rng.standard_normal());
    let p = decompose(&x, 1).unwrap();
    let est = estimate_noise_sigma(p.finest_hh()).unwrap();
    assert!((0.09..=0.11).contains(&est), "sigma estimate {est}");
}

#[test]
fn diagnostics_are_self_consistent() {
    let clean = camera().to_unit_scale();
    let noisy = NoiseModel::gaussian().apply(&clean, 3).unwrap();
    let pyr = decompose(noisy.matrix(), 2).unwrap();
    let (_, diag) = denoise(&noisy, 2, ThresholdMode::Soft).unwrap();
    assert_eq!(diag.bands.len(), 6);
    for ((level, name, band), rec) in pyr.detail_bands().zip(&diag.bands) {
        assert_eq!((rec.level, rec.name), (level, name));
        assert_eq!(rec.total, band.len());
        let sigma_w = band_sigma_w(band).unwrap();
        assert!((rec.sigma_w - sigma_w).abs() < 1e-12);
        let sigma_s = (sigma_w.powi(2) - diag.sigma_noise.powi(2)).max(0.0).sqrt();
        assert!((rec.sigma_s - sigma_s).abs() < 1e-12);
        let lambda = match rec.t_b {
            Some(t) => {
                assert!(rec.sigma_s > 0.0);
                assert!((t - diag.sigma_noise.powi(2) / rec.sigma_s).abs() < 1e-12);
                t
            }
            None => {
                assert_eq!(rec.sigma_s, 0.0);
                f64::INFINITY
            }
        };
        let brute = band.as_slice().iter().filter(|u| u.abs() <= lambda).count();
        assert_eq!(rec.zeroed, brute, "level {level} {name}");
    }
}

#[test]
fn denoising_raises_psnr_on_a_natural_image() {
    let clean = camera();
    let noisy = NoiseModel::gaussian()
        .apply(&clean.to_unit_scale(), 1)
        .unwrap();
    let (restored, _) = denoise(&noisy, 2, ThresholdMode::Soft).unwrap();
    let before = psnr(&clean, &noisy.from_unit_scale()).unwrap();
    let after = psnr(&clean, &restored.from_unit_scale()).unwrap();
    assert!(after > before, "{after} <= {before}");
}

#[test]
fn noiseless_denoise_is_identity() {
    let flat = Image::filled(40, 24, 0.3, RangeTag::Unit);
    let (out, diag) = denoise(&flat, 3, ThresholdMode::Hard).unwrap();
    assert_eq!(diag.sigma_noise, 0.0);
    assert!(out.matrix().max_abs_diff(flat.matrix()) < 1e-9);
}

#[test]
fn diagnostics_serialize_with_null_for_killed_bands() {
    let mut rng = NoiseRng::new(1);
    let noise = Image::from_fn(32, 32, RangeTag::Unit, |_, _| {
        0.5 + 0.05 * rng.standard_normal()
    });
    let (_, diag) = denoise(&noise, 2, ThresholdMode::Soft).unwrap();
    let json = serde_json::to_value(&diag).unwrap();
    let bands = json["bands"].as_array().unwrap();
    assert_eq!(bands[0]["name"], "LH");
    assert_eq!(bands[2]["name"], "HH");
    for (b, rec) in bands.iter().zip(&diag.bands) {
        assert_eq!(b["t_b"].is_null(), rec.t_b.is_none());
        for key in ["level", "sigma_w", "sigma_s", "zeroed", "total"] {
            assert!(b.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn too_many_levels_propagates() {
    let img = Image::filled(8, 8, 0.5, RangeTag::Unit);
    assert!(denoise(&img, 4, ThresholdMode::Soft).is_err());
}
