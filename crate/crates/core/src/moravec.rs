//! Moravec interest operator.
//!
//! `V_{u,v}(x, y) = Σ_{a,b ∈ [-r, r]} (I(x+u+a, y+v+b) - I(x+a, y+b))²` over
//! the eight unit shifts, cornerness `C = min V`, then thresholding and
//! non-maximum suppression. Intensities are read on the byte scale.

use crate::error::{Error, Result};
use crate::image::{CornerSet, Detector, Image, Point, ResponseMap};
use crate::matrix::Matrix;
use crate::nms::local_maxima;
use crate::scalar::Scalar;

/// The eight unit shifts, as `(u, v)` = `(dx, dy)`.
pub const SHIFTS: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 0.05;

/// Cut-off applied to the cornerness map before suppression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CornerThreshold<T> {
    /// Fraction of the map maximum.
    Relative(T),
    /// Absolute value on the byte-scale squared-difference scale.
    Absolute(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoravecParams<T> {
    pub window_radius: usize,
    pub threshold: CornerThreshold<T>,
    pub nms_radius: usize,
}

impl<T: Scalar> Default for MoravecParams<T> {
    fn default() -> Self {
        MoravecParams {
            window_radius: 1,
            threshold: CornerThreshold::Relative(T::of(DEFAULT_RELATIVE_THRESHOLD)),
            nms_radius: 1,
        }
    }
}

impl<T: Scalar> MoravecParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.window_radius < 1 || self.nms_radius < 1 {
            return Err(Error::Parameter(
                "moravec window and nms radius must be >= 1".into(),
            ));
        }
        match self.threshold {
            CornerThreshold::Relative(t) | CornerThreshold::Absolute(t) if t >= T::zero() => Ok(()),
            _ => Err(Error::Parameter("moravec threshold must be >= 0".into())),
        }
    }
}

fn offset(p: usize, d: isize, limit: usize) -> Option<usize> {
    let q = p as isize + d;
    (0..limit as isize).contains(&q).then_some(q as usize)
}

/// Sum of squared differences between the window at `(x, y)` and the window
/// shifted by `shift`. Both windows must lie inside the image.
pub fn intensity_variation<T: Scalar>(
    img: &Image<T>,
    x: usize,
    y: usize,
    shift: (isize, isize),
    r: usize,
) -> Result<T> {
    let (u, v) = shift;
    let ri = r as isize;
    let (w, h) = (img.width(), img.height());
    let in_range = |p: usize, d: isize, lim: usize| {
        offset(p, d - ri, lim).is_some() && offset(p, d + ri, lim).is_some()
    };
    if !(in_range(x, 0, w) && in_range(y, 0, h) && in_range(x, u, w) && in_range(y, v, h)) {
        return Err(Error::Range(format!(
            "window of radius {r} at ({x}, {y}) shifted by ({u}, {v}) leaves the {w}x{h} image"
        )));
    }
    let mut sum = T::zero();
    for b in -ri..=ri {
        for a in -ri..=ri {
            let xa = (x as isize + a) as usize;
            let yb = (y as isize + b) as usize;
            let shifted = img.get((xa as isize + u) as usize, (yb as isize + v) as usize);
            let d = shifted - img.get(xa, yb);
            sum = sum + d * d;
        }
    }
    Ok(sum)
}

/// `C(x, y) = min over shifts of V`, zero wherever a window would leave the image.
pub fn cornerness_map<T: Scalar>(
    img: &Image<T>,
    params: &MoravecParams<T>,
) -> Result<ResponseMap<T>> {
    params.validate()?;
    let r = params.window_radius;
    let (w, h) = (img.width(), img.height());
    let margin = r + 1;
    if w < 2 * margin + 1 || h < 2 * margin + 1 {
        return Err(Error::Size(format!(
            "moravec radius {r} needs at least {0}x{0}, image is {w}x{h}",
            2 * margin + 1
        )));
    }
    let img = img.from_unit_scale();
    let px = img.matrix();

    // Squared differences for each shift, valid where both samples exist.
    let diffs: Vec<Matrix<T>> = SHIFTS
        .iter()
        .map(|&(u, v)| {
            Matrix::from_fn(h, w, |y, x| match (offset(x, u, w), offset(y, v, h)) {
                (Some(sx), Some(sy)) => {
                    let d = px[(sy, sx)] - px[(y, x)];
                    d * d
                }
                _ => T::zero(),
            })
        })
        .collect();

    let ri = r as isize;
    let mut values = Matrix::zeros(h, w);
    for y in margin..h - margin {
        for x in margin..w - margin {
            let mut best = T::infinity();
            for d in &diffs {
                let mut sum = T::zero();
                for b in -ri..=ri {
                    let row = d.row((y as isize + b) as usize);
                    for a in -ri..=ri {
                        sum = sum + row[(x as isize + a) as usize];
                    }
                }
                best = best.min(sum);
            }
            values[(y, x)] = best;
        }
    }
    Ok(ResponseMap {
        values,
        detector: Detector::Moravec,
    })
}

/// Threshold, suppress, and collect Moravec corners.
pub fn detect_moravec<T: Scalar>(
    img: &Image<T>,
    params: &MoravecParams<T>,
) -> Result<(CornerSet, ResponseMap<T>)> {
    let map = cornerness_map(img, params)?;
    let cut = match params.threshold {
        CornerThreshold::Relative(f) => f * map.max().max(T::zero()),
        CornerThreshold::Absolute(t) => t,
    };
    let kept = map.values.map(|c| if c < cut { T::zero() } else { c });
    let points: Vec<Point> = local_maxima(&kept, params.nms_radius);
    Ok((CornerSet::new(points, Detector::Moravec), map))
}
