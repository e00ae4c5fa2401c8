use haarcorner::matrix::Matrix;
use haarcorner::wavelet::{decompose, dwt2_haar, reconstruct};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<f64>> {
    prop::collection::vec(-300.0f64..300.0, rows * cols)
        .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
}

fn sized_matrix(max_side: usize) -> impl Strategy<Value = Matrix<f64>> {
    (8usize..=max_side, 8usize..=max_side).prop_flat_map(|(r, c)| matrix(r, c))
}

proptest! {
    #[test]
    fn perfect_reconstruction(x in sized_matrix(40), levels in 1usize..=3) {
        let back = reconstruct(&decompose(&x, levels).unwrap()).unwrap();
        prop_assert_eq!(back.dims(), x.dims());
        prop_assert!(back.max_abs_diff(&x) < 1e-9);
    }

    #[test]
    fn parseval_on_even_sizes(half_r in 1usize..20, half_c in 1usize..20, seed in any::<u64>()) {
        let (r, c) = (2 * half_r, 2 * half_c);
        let mut s = seed;
        let x = Matrix::from_fn(r, c, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 * 255.0
        });
        let bands = dwt2_haar(&x).unwrap();
        let rel = (bands.energy() - x.energy()).abs() / x.energy().max(1e-300);
        prop_assert!(rel < 1e-9, "relative error {}", rel);
    }

    #[test]
    fn linearity((x, y) in (8usize..24, 8usize..24).prop_flat_map(|(r, c)| (matrix(r, c), matrix(r, c))),
                 a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let combo = x.scale_add(a, &y, b).unwrap();
        let pc = decompose(&combo, 2).unwrap();
        let px = decompose(&x, 2).unwrap();
        let py = decompose(&y, 2).unwrap();
        let expect_ll = px.ll_top.scale_add(a, &py.ll_top, b).unwrap();
        prop_assert!(pc.ll_top.max_abs_diff(&expect_ll) < 1e-9);
        let bands = pc.detail_bands().zip(px.detail_bands()).zip(py.detail_bands());
        for (((_, _, bc), (_, _, bx)), (_, _, by)) in bands {
            prop_assert!(bc.max_abs_diff(&bx.scale_add(a, by, b).unwrap()) < 1e-9);
        }
    }
}

#[test]
fn odd_five_by_seven_round_trip() {
    let x = Matrix::from_fn(5, 7, |r, c| ((r * 13 + c * 29) % 17) as f64 * 1.7);
    for levels in 1..=2 {
        let back = reconstruct(&decompose(&x, levels).unwrap()).unwrap();
        assert_eq!(back.dims(), (5, 7));
        assert!(back.max_abs_diff(&x) < 1e-9);
    }
}

#[test]
fn parseval_per_level_of_pyramid() {
    let x = Matrix::from_fn(64, 64, |r, c| ((r * 7 + c * 3) % 23) as f64 - 11.0);
    let p = decompose(&x, 3).unwrap();
    let detail: f64 = p.detail_bands().map(|(_, _, b)| b.energy()).sum();
    let rel = (detail + p.ll_top.energy() - x.energy()).abs() / x.energy();
    assert!(rel < 1e-9);
}

#[test]
fn single_precision_round_trip() {
    let x = Matrix::<f32>::from_fn(31, 17, |r, c| ((r * 5 + c) % 9) as f32 / 9.0);
    let back = reconstruct(&decompose(&x, 3).unwrap()).unwrap();
    assert!(back.max_abs_diff(&x) < 1e-5);
}
