//! Non-maximum suppression over a response map.

use crate::image::Point;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Positive local maxima of `map` within a `(2r+1)²` neighborhood.
///
/// A pixel survives if it is strictly greater than every neighbor that
/// precedes it in row-major order and no smaller than every neighbor that
/// follows it, so on a plateau only the row-major-first pixel is kept.
/// Neighborhoods are clipped at the border. Output is row-major.
pub fn local_maxima<T: Scalar>(map: &Matrix<T>, radius: usize) -> Vec<Point> {
    let (h, w) = map.dims();
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = map[(y, x)];
            if v > T::zero() && dominates(map, x, y, v, radius) {
                out.push(Point::new(x, y));
            }
        }
    }
    out
}

fn dominates<T: Scalar>(map: &Matrix<T>, x: usize, y: usize, v: T, radius: usize) -> bool {
    let (h, w) = map.dims();
    for ny in y.saturating_sub(radius)..(y + radius + 1).min(h) {
        for nx in x.saturating_sub(radius)..(x + radius + 1).min(w) {
            let q = map[(ny, nx)];
            let earlier = (ny, nx) < (y, x);
            if (earlier && q >= v) || (!earlier && q > v) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_peak() {
        let mut m = Matrix::<f64>::zeros(5, 5);
        m[(2, 3)] = 4.0;
        m[(2, 2)] = 1.0;
        assert_eq!(local_maxima(&m, 1), vec![Point::new(3, 2)]);
    }

    #[test]
    fn plateau_keeps_row_major_first() {
        let mut m = Matrix::<f64>::zeros(4, 4);
        for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            m[(r, c)] = 7.0;
        }
        assert_eq!(local_maxima(&m, 1), vec![Point::new(1, 1)]);
    }

    #[test]
    fn separated_peaks_both_survive() {
        let mut m = Matrix::<f64>::zeros(3, 7);
        m[(1, 1)] = 2.0;
        m[(1, 5)] = 3.0;
        assert_eq!(
            local_maxima(&m, 1),
            vec![Point::new(1, 1), Point::new(5, 1)]
        );
        assert_eq!(local_maxima(&m, 4), vec![Point::new(5, 1)]);
    }

    #[test]
    fn non_positive_values_never_survive() {
        let mut m = Matrix::filled(3, 3, -1.0);
        m[(1, 1)] = 0.0;
        assert!(local_maxima(&m, 1).is_empty());
    }
}
