//! Harris corner detector.
//!
//! Gradients come from the `[-1, 0, 1]` filters. The structure tensor is the
//! windowed sum of `Ix²`, `IxIy` and `Iy²`. The response is
//! `H = det - k·trace² = (AC - B²) - k(A + C)²`. Corners are positive local
//! maxima of `H` above a fraction of its maximum.

use crate::error::{Error, Result};
use crate::image::{CornerSet, Detector, Image, ResponseMap};
use crate::matrix::Matrix;
use crate::nms::local_maxima;
use crate::scalar::Scalar;

pub const DEFAULT_K: f64 = 0.04;
pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 0.01;

/// Weighting of the summation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowKind<T> {
    /// Plain sum over the square window.
    Box,
    /// Weights `exp(-(a² + b²) / 2σ²)` over the square window.
    Gaussian { sigma: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarrisParams<T> {
    pub k: T,
    pub window_radius: usize,
    pub window: WindowKind<T>,
    pub rel_threshold: T,
    pub nms_radius: usize,
}

impl<T: Scalar> Default for HarrisParams<T> {
    fn default() -> Self {
        HarrisParams {
            k: T::of(DEFAULT_K),
            window_radius: 2,
            window: WindowKind::Gaussian { sigma: T::one() },
            rel_threshold: T::of(DEFAULT_RELATIVE_THRESHOLD),
            nms_radius: 1,
        }
    }
}

impl<T: Scalar> HarrisParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > T::zero()) {
            return Err(Error::Parameter(format!("harris k {} must be > 0", self.k)));
        }
        if !(self.rel_threshold > T::zero() && self.rel_threshold <= T::one()) {
            return Err(Error::Parameter(format!(
                "relative threshold {} outside (0, 1]",
                self.rel_threshold
            )));
        }
        if self.window_radius < 1 || self.nms_radius < 1 {
            return Err(Error::Parameter(
                "harris window and nms radius must be >= 1".into(),
            ));
        }
        if let WindowKind::Gaussian { sigma } = self.window {
            if !(sigma > T::zero()) {
                return Err(Error::Parameter(format!(
                    "window sigma {sigma} must be > 0"
                )));
            }
        }
        Ok(())
    }

    /// `(2r+1)²` weights, row-major over `b` then `a`.
    fn weights(&self) -> Vec<T> {
        let r = self.window_radius as isize;
        let mut w = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
        for b in -r..=r {
            for a in -r..=r {
                w.push(match self.window {
                    WindowKind::Box => T::one(),
                    WindowKind::Gaussian { sigma } => {
                        let d2 = T::of((a * a + b * b) as f64);
                        (-d2 / (T::of(2.0) * sigma * sigma)).exp()
                    }
                });
            }
        }
        w
    }
}

/// Windowed gradient products per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensorField<T> {
    /// `Σ Ix²`
    pub a: Matrix<T>,
    /// `Σ Ix·Iy`
    pub b: Matrix<T>,
    /// `Σ Iy²`
    pub c: Matrix<T>,
}

/// Central differences on the byte scale, zero on the one-pixel border.
pub fn gradients<T: Scalar>(img: &Image<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::Size(format!(
            "gradients need at least 3x3, got {w}x{h}"
        )));
    }
    let img = img.from_unit_scale();
    let px = img.matrix();
    let mut ix = Matrix::zeros(h, w);
    let mut iy = Matrix::zeros(h, w);
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            ix[(y, x)] = px[(y, x + 1)] - px[(y, x - 1)];
            iy[(y, x)] = px[(y + 1, x)] - px[(y - 1, x)];
        }
    }
    Ok((ix, iy))
}

/// Windowed sums of gradient products; gradients outside the image count as zero.
pub fn structure_tensor<T: Scalar>(
    ix: &Matrix<T>,
    iy: &Matrix<T>,
    params: &HarrisParams<T>,
) -> Result<StructureTensorField<T>> {
    ix.same_dims(iy)?;
    params.validate()?;
    let (h, w) = ix.dims();
    let xx = Matrix::from_fn(h, w, |r, c| ix[(r, c)] * ix[(r, c)]);
    let xy = Matrix::from_fn(h, w, |r, c| ix[(r, c)] * iy[(r, c)]);
    let yy = Matrix::from_fn(h, w, |r, c| iy[(r, c)] * iy[(r, c)]);
    let weights = params.weights();
    let rad = params.window_radius as isize;
    let side = 2 * params.window_radius + 1;
    let windowed = |src: &Matrix<T>| {
        Matrix::from_fn(h, w, |y, x| {
            let mut sum = T::zero();
            for b in -rad..=rad {
                let sy = y as isize + b;
                if sy < 0 || sy >= h as isize {
                    continue;
                }
                for a in -rad..=rad {
                    let sx = x as isize + a;
                    if sx < 0 || sx >= w as isize {
                        continue;
                    }
                    let wgt = weights[(b + rad) as usize * side + (a + rad) as usize];
                    sum = sum + wgt * src[(sy as usize, sx as usize)];
                }
            }
            sum
        })
    };
    Ok(StructureTensorField {
        a: windowed(&xx),
        b: windowed(&xy),
        c: windowed(&yy),
    })
}

/// `H = (AC - B²) - k(A + C)²` per pixel.
pub fn harris_response<T: Scalar>(field: &StructureTensorField<T>, k: T) -> ResponseMap<T> {
    let (h, w) = field.a.dims();
    let values = Matrix::from_fn(h, w, |r, c| {
        let (a, b, cc) = (field.a[(r, c)], field.b[(r, c)], field.c[(r, c)]);
        let det = a * cc - b * b;
        let trace = a + cc;
        det - k * trace * trace
    });
    ResponseMap {
        values,
        detector: Detector::Harris,
    }
}

/// Full detector: gradients, tensor, response, relative threshold, suppression.
pub fn detect_harris<T: Scalar>(
    img: &Image<T>,
    params: &HarrisParams<T>,
) -> Result<(CornerSet, ResponseMap<T>)> {
    params.validate()?;
    let min_side = 2 * params.window_radius + 3;
    if img.width() < min_side || img.height() < min_side {
        return Err(Error::Size(format!(
            "harris radius {} needs at least {min_side}x{min_side}, image is {}x{}",
            params.window_radius,
            img.width(),
            img.height()
        )));
    }
    let (ix, iy) = gradients(img)?;
    let field = structure_tensor(&ix, &iy, params)?;
    let map = harris_response(&field, params.k);
    let peak = map.max();
    if !(peak > T::zero()) {
        return Ok((CornerSet::new(Vec::new(), Detector::Harris), map));
    }
    let cut = params.rel_threshold * peak;
    let kept = map.values.map(|v| if v < cut { T::zero() } else { v });
    let points = local_maxima(&kept, params.nms_radius);
    Ok((CornerSet::new(points, Detector::Harris), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::RangeTag;

    fn byte(w: usize, h: usize, f: impl FnMut(usize, usize) -> f64) -> Image<f64> {
        Image::from_fn(w, h, RangeTag::Byte, f)
    }

    fn field(a: f64, b: f64, c: f64) -> StructureTensorField<f64> {
        StructureTensorField {
            a: Matrix::filled(1, 1, a),
            b: Matrix::filled(1, 1, b),
            c: Matrix::filled(1, 1, c),
        }
    }

    #[test]
    fn constant_image_gradients_vanish() {
        let (ix, iy) = gradients(&byte(6, 5, |_, _| 12.0)).unwrap();
        assert!(ix.as_slice().iter().chain(iy.as_slice()).all(|&v| v == 0.0));
    }

    #[test]
    fn ramp_gradient() {
        let (ix, iy) = gradients(&byte(6, 5, |x, _| x as f64)).unwrap();
        for y in 1..4 {
            for x in 1..5 {
                assert_eq!(ix[(y, x)], 2.0);
                assert_eq!(iy[(y, x)], 0.0);
            }
        }
        assert_eq!(ix[(0, 2)], 0.0);
        assert_eq!(ix[(2, 0)], 0.0);
    }

    #[test]
    fn tiny_image_rejected() {
        assert!(matches!(
            gradients(&byte(2, 5, |_, _| 0.0)),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            detect_harris(&byte(6, 6, |_, _| 0.0), &HarrisParams::default()),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn zero_gradients_give_zero_tensor() {
        let z = Matrix::<f64>::zeros(7, 7);
        let f = structure_tensor(&z, &z, &HarrisParams::default()).unwrap();
        assert!(f
            .a
            .as_slice()
            .iter()
            .chain(f.b.as_slice())
            .chain(f.c.as_slice())
            .all(|&v| v == 0.0));
    }

    #[test]
    fn vertical_edge_has_one_large_eigenvalue() {
        let img = byte(12, 12, |x, _| if x < 6 { 0.0 } else { 200.0 });
        let (ix, iy) = gradients(&img).unwrap();
        let f = structure_tensor(&ix, &iy, &HarrisParams::default()).unwrap();
        assert!(f.a[(6, 6)] > 0.0);
        assert_eq!(f.b[(6, 6)], 0.0);
        assert_eq!(f.c[(6, 6)], 0.0);
    }

    #[test]
    fn shape_mismatch() {
        let a = Matrix::<f64>::zeros(4, 4);
        let b = Matrix::<f64>::zeros(4, 5);
        assert!(matches!(
            structure_tensor(&a, &b, &HarrisParams::default()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn response_arithmetic() {
        let h = harris_response(&field(2.0, 0.0, 2.0), 0.04);
        assert!((h.values[(0, 0)] - 3.36).abs() < 1e-12);
        let e = harris_response(&field(10.0, 0.0, 0.0), 0.04);
        assert!((e.values[(0, 0)] + 4.0).abs() < 1e-12);
    }

    #[test]
    fn constant_image_has_no_corners() {
        let (set, _) = detect_harris(&byte(16, 16, |_, _| 90.0), &HarrisParams::default()).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn invalid_params_rejected() {
        let img = byte(16, 16, |_, _| 0.0);
        for p in [
            HarrisParams {
                k: 0.0,
                ..HarrisParams::default()
            },
            HarrisParams {
                rel_threshold: 0.0,
                ..HarrisParams::default()
            },
            HarrisParams {
                rel_threshold: 1.5,
                ..HarrisParams::default()
            },
            HarrisParams {
                window: WindowKind::Gaussian { sigma: 0.0 },
                ..HarrisParams::default()
            },
            HarrisParams {
                nms_radius: 0,
                ..HarrisParams::default()
            },
        ] {
            assert!(
                matches!(detect_harris(&img, &p), Err(Error::Parameter(_))),
                "{p:?}"
            );
        }
    }

    #[test]
    fn box_window_weights_are_ones() {
        let p = HarrisParams::<f64> {
            window: WindowKind::Box,
            window_radius: 1,
            ..HarrisParams::default()
        };
        assert_eq!(p.weights(), vec![1.0; 9]);
        let g = HarrisParams::<f64>::default().weights();
        assert_eq!(g.len(), 25);
        assert_eq!(g[12], 1.0);
        assert!((g[13] - (-0.5f64).exp()).abs() < 1e-15);
    }
}
