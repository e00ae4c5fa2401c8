//! Grayscale raster, intensity-scale conversion and corner overlays.

mod io;

use std::fmt;

pub use io::{load_image, read_pgm, read_png, save_image, write_pgm, write_png};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Which intensity convention an [`Image`]'s pixels follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeTag {
    /// Intensities in `[0, 255]`.
    Byte,
    /// Intensities in `[0, 1]`.
    Unit,
}

impl RangeTag {
    pub fn max<T: Scalar>(self) -> T {
        match self {
            RangeTag::Byte => T::of(255.0),
            RangeTag::Unit => T::one(),
        }
    }
}

/// Grayscale image with real-valued pixels stored row-major.
///
/// Pixels are addressed `(x, y)` with `x` the column and `y` the row.
/// Values may leave the nominal range during intermediate math; only
/// [`Image::clamped`] and the scale conversions enforce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    pixels: Matrix<T>,
    range: RangeTag,
}

impl<T: Scalar> Image<T> {
    pub fn new(width: usize, height: usize, pixels: Vec<T>, range: RangeTag) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Size(format!("empty image {width}x{height}")));
        }
        Ok(Image {
            pixels: Matrix::new(height, width, pixels)?,
            range,
        })
    }

    pub fn from_matrix(pixels: Matrix<T>, range: RangeTag) -> Result<Self> {
        if pixels.is_empty() {
            return Err(Error::Size("empty image".into()));
        }
        Ok(Image { pixels, range })
    }

    pub fn filled(width: usize, height: usize, value: T, range: RangeTag) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Image {
            pixels: Matrix::filled(height, width, value),
            range,
        }
    }

    /// Builds an image from `f(x, y)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        range: RangeTag,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Image {
            pixels: Matrix::from_fn(height, width, |y, x| f(x, y)),
            range,
        }
    }

    pub fn width(&self) -> usize {
        self.pixels.cols()
    }

    pub fn height(&self) -> usize {
        self.pixels.rows()
    }

    pub fn range(&self) -> RangeTag {
        self.range
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.pixels[(y, x)]
    }

    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.pixels[(y, x)] = value;
    }

    pub fn pixels(&self) -> &[T] {
        self.pixels.as_slice()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.pixels
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.pixels
    }

    pub fn in_bounds(&self, x: usize, y: usize) -> bool {
        x < self.width() && y < self.height()
    }

    /// Copy with every pixel clamped to the nominal range of its tag.
    pub fn clamped(&self) -> Self {
        let hi = self.range.max::<T>();
        Image {
            pixels: self.pixels.map(|v| v.max(T::zero()).min(hi)),
            range: self.range,
        }
    }

    /// Byte scale to unit scale (divide by 255). Unit-scale input is returned unchanged.
    pub fn to_unit_scale(&self) -> Self {
        match self.range {
            RangeTag::Unit => self.clone(),
            RangeTag::Byte => {
                let s = T::of(255.0);
                Image {
                    pixels: self.pixels.map(|v| v / s),
                    range: RangeTag::Unit,
                }
            }
        }
    }

    /// Unit scale to byte scale (multiply by 255, clamp to `[0, 255]`, no rounding).
    /// Byte-scale input is returned unchanged.
    pub fn from_unit_scale(&self) -> Self {
        match self.range {
            RangeTag::Byte => self.clone(),
            RangeTag::Unit => {
                let s = T::of(255.0);
                Image {
                    pixels: self.pixels.map(|v| (v * s).max(T::zero()).min(s)),
                    range: RangeTag::Byte,
                }
            }
        }
    }

    /// Rounds each pixel to the nearest integer level of its scale, the way
    /// [`save_image`] quantizes byte images.
    pub fn quantized(&self) -> Self {
        let levels = T::of(255.0);
        let clamped = self.clamped();
        let pixels = match self.range {
            RangeTag::Byte => clamped.pixels.map(|v| v.round()),
            RangeTag::Unit => clamped.pixels.map(|v| (v * levels).round() / levels),
        };
        Image {
            pixels,
            range: self.range,
        }
    }

    /// Same image with the values reinterpreted in another scalar type.
    pub fn cast<U: Scalar>(&self) -> Image<U> {
        let data = self
            .pixels()
            .iter()
            .map(|&v| U::of(v.to_f64_lossy()))
            .collect();
        Image {
            pixels: Matrix::new(self.height(), self.width(), data).expect("same shape"),
            range: self.range,
        }
    }
}

/// Corner detector that produced a [`CornerSet`] or response map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Moravec,
    Harris,
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::Moravec => "moravec",
            Detector::Harris => "harris",
        })
    }
}

/// Integer pixel location: `x` is the column, `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: usize,
    pub y: usize,
}

impl Point {
    pub fn new(x: usize, y: usize) -> Self {
        Point { x, y }
    }
}

/// Detected corners, sorted row-major (by `y`, then `x`) with no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerSet {
    points: Vec<Point>,
    source: Detector,
}

impl CornerSet {
    /// Sorts and deduplicates `points`. Bounds are the caller's contract.
    pub fn new(mut points: Vec<Point>, source: Detector) -> Self {
        points.sort_by_key(|p| (p.y, p.x));
        points.dedup();
        CornerSet { points, source }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn source(&self) -> Detector {
        self.source
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// One `x,y` line per corner.
    pub fn to_csv(&self) -> String {
        self.points
            .iter()
            .map(|p| format!("{},{}\n", p.x, p.y))
            .collect()
    }
}

/// Per-pixel detector response, same dimensions as the source image.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap<T> {
    pub values: Matrix<T>,
    pub detector: Detector,
}

impl<T: Scalar> ResponseMap<T> {
    pub fn max(&self) -> T {
        self.values
            .as_slice()
            .iter()
            .fold(T::neg_infinity(), |m, &v| m.max(v))
    }
}

/// Linearly stretches a matrix onto `[0, 255]` for viewing; a flat matrix maps to 0.
pub fn normalized_view<T: Scalar>(m: &Matrix<T>) -> Result<Image<T>> {
    let (lo, hi) = m
        .as_slice()
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    let scale = T::of(255.0);
    let view = m.map(|v| {
        if span > T::zero() {
            (v - lo) / span * scale
        } else {
            T::zero()
        }
    });
    Image::from_matrix(view, RangeTag::Byte)
}

/// Stamps a 3x3 marker at maximum intensity on each corner, cropped at borders.
pub fn overlay_corners<T: Scalar>(img: &Image<T>, corners: &CornerSet) -> Image<T> {
    let mut out = img.clone();
    let hi = img.range().max::<T>();
    let (w, h) = (img.width() as isize, img.height() as isize);
    for p in corners.points() {
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (x, y) = (p.x as isize + dx, p.y as isize + dy);
                if (0..w).contains(&x) && (0..h).contains(&y) {
                    out.set(x as usize, y as usize, hi);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn changed(a: &Image<f64>, b: &Image<f64>) -> usize {
        a.pixels()
            .iter()
            .zip(b.pixels())
            .filter(|(x, y)| x != y)
            .count()
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(Image::<f64>::new(0, 3, vec![], RangeTag::Byte).is_err());
        assert!(Image::<f64>::new(2, 2, vec![0.0; 3], RangeTag::Byte).is_err());
    }

    #[test]
    fn unit_scale_conversions() {
        let img = Image::new(2, 1, vec![255.0, 0.0], RangeTag::Byte).unwrap();
        let unit = img.to_unit_scale();
        assert_eq!(unit.range(), RangeTag::Unit);
        assert_eq!(unit.get(0, 0), 1.0);

        let half = Image::new(1, 1, vec![0.5], RangeTag::Unit).unwrap();
        assert_eq!(half.from_unit_scale().get(0, 0), 127.5);

        let over = Image::new(1, 1, vec![1.3], RangeTag::Unit).unwrap();
        assert_eq!(over.from_unit_scale().get(0, 0), 255.0);
    }

    #[test]
    fn overlay_empty_set_is_identity() {
        let img = Image::filled(4, 4, 10.0, RangeTag::Byte);
        let out = overlay_corners(&img, &CornerSet::new(vec![], Detector::Harris));
        assert_eq!(out, img);
    }

    #[test]
    fn overlay_crops_at_border() {
        let img = Image::filled(2, 2, 0.0, RangeTag::Byte);
        let set = CornerSet::new(vec![Point::new(0, 0)], Detector::Moravec);
        let out = overlay_corners(&img, &set);
        assert_eq!(out.width(), 2);
        assert_eq!(changed(&img, &out), 4);
        assert!(out.pixels().iter().all(|&v| v == 255.0));
    }

    #[test]
    fn overlay_interior_marks_nine_pixels() {
        let img = Image::filled(7, 7, 3.0, RangeTag::Byte);
        let set = CornerSet::new(vec![Point::new(3, 3)], Detector::Harris);
        let out = overlay_corners(&img, &set);
        assert_eq!(changed(&img, &out), 9);
        assert_eq!(out.pixels().iter().filter(|&&v| v == 255.0).count(), 9);
    }

    #[test]
    fn overlay_uses_unit_maximum_on_unit_images() {
        let img = Image::filled(3, 3, 0.2, RangeTag::Unit);
        let out = overlay_corners(
            &img,
            &CornerSet::new(vec![Point::new(1, 1)], Detector::Harris),
        );
        assert!(out.pixels().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn corner_set_sorted_and_deduplicated() {
        let set = CornerSet::new(
            vec![
                Point::new(5, 1),
                Point::new(0, 2),
                Point::new(2, 1),
                Point::new(5, 1),
            ],
            Detector::Moravec,
        );
        assert_eq!(
            set.points(),
            &[Point::new(2, 1), Point::new(5, 1), Point::new(0, 2)]
        );
        assert_eq!(set.to_csv(), "2,1\n5,1\n0,2\n");
    }

    #[test]
    fn normalized_view_stretches() {
        let m = Matrix::from_rows(&[vec![-1.0, 0.0, 3.0]]).unwrap();
        assert_eq!(normalized_view(&m).unwrap().pixels(), &[0.0, 63.75, 255.0]);
        let flat = Matrix::filled(2, 2, 4.0);
        assert!(normalized_view(&flat)
            .unwrap()
            .pixels()
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn quantized_rounds_to_levels() {
        let img = Image::new(3, 1, vec![1.4, 254.6, 300.0], RangeTag::Byte).unwrap();
        assert_eq!(img.quantized().pixels(), &[1.0, 255.0, 255.0]);
    }
}
