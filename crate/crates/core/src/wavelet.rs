//! Orthonormal 2-D Haar transform and multi-level pyramid.
//!
//! One level maps each 2x2 block
//!
//! ```text
//! a b
//! c d
//! ```
//!
//! to four coefficients, which is the 1-D step `(p, q) -> ((p+q)/√2, (p-q)/√2)`
//! applied along rows and then along columns:
//!
//! * `LL = (a + b + c + d) / 2` approximation
//! * `LH = (a + b - c - d) / 2` low-pass along x, high-pass along y (vertical details)
//! * `HL = (a - b + c - d) / 2` high-pass along x, low-pass along y (horizontal details)
//! * `HH = (a - b - c + d) / 2` high-pass along both axes (diagonal details)
//!
//! Odd sides are padded by replicating the last row or column before each
//! level; the unpadded size is kept so reconstruction crops back exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Detail orientation within one decomposition level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Orientation {
    #[serde(rename = "LH")]
    Lh,
    #[serde(rename = "HL")]
    Hl,
    #[serde(rename = "HH")]
    Hh,
}

impl Orientation {
    /// Band order used for diagnostics and iteration.
    pub const ALL: [Orientation; 3] = [Orientation::Lh, Orientation::Hl, Orientation::Hh];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Lh => "LH",
            Orientation::Hl => "HL",
            Orientation::Hh => "HH",
        })
    }
}

/// One-level transform output; all four bands share dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet<T> {
    pub ll: Matrix<T>,
    pub lh: Matrix<T>,
    pub hl: Matrix<T>,
    pub hh: Matrix<T>,
}

impl<T: Scalar> SubbandSet<T> {
    pub fn detail(&self, o: Orientation) -> &Matrix<T> {
        match o {
            Orientation::Lh => &self.lh,
            Orientation::Hl => &self.hl,
            Orientation::Hh => &self.hh,
        }
    }

    pub fn energy(&self) -> T {
        self.ll.energy() + self.lh.energy() + self.hl.energy() + self.hh.energy()
    }

    fn check_dims(&self) -> Result<(usize, usize)> {
        let d = self.ll.dims();
        for band in [&self.lh, &self.hl, &self.hh] {
            if band.dims() != d {
                return Err(Error::Shape(format!(
                    "subband {:?} does not match LL {:?}",
                    band.dims(),
                    d
                )));
            }
        }
        Ok(d)
    }
}

/// Edge-replicated sample: indices past the end read the last row/column.
fn replicated<T: Scalar>(m: &Matrix<T>, r: usize, c: usize) -> T {
    m[(r.min(m.rows() - 1), c.min(m.cols() - 1))]
}

/// Single-level forward Haar transform.
pub fn dwt2_haar<T: Scalar>(m: &Matrix<T>) -> Result<SubbandSet<T>> {
    let (h, w) = m.dims();
    if h < 2 || w < 2 {
        return Err(Error::Size(format!(
            "haar transform needs at least 2x2, got {h}x{w}"
        )));
    }
    let (bh, bw) = (h.div_ceil(2), w.div_ceil(2));
    let half = T::of(0.5);
    let mut ll = Matrix::zeros(bh, bw);
    let mut lh = Matrix::zeros(bh, bw);
    let mut hl = Matrix::zeros(bh, bw);
    let mut hh = Matrix::zeros(bh, bw);
    for i in 0..bh {
        for j in 0..bw {
            let a = replicated(m, 2 * i, 2 * j);
            let b = replicated(m, 2 * i, 2 * j + 1);
            let c = replicated(m, 2 * i + 1, 2 * j);
            let d = replicated(m, 2 * i + 1, 2 * j + 1);
            ll[(i, j)] = (a + b + c + d) * half;
            lh[(i, j)] = (a + b - c - d) * half;
            hl[(i, j)] = (a - b + c - d) * half;
            hh[(i, j)] = (a - b - c + d) * half;
        }
    }
    Ok(SubbandSet { ll, lh, hl, hh })
}

/// Single-level inverse, cropped to `target` = `(rows, cols)`.
pub fn idwt2_haar<T: Scalar>(bands: &SubbandSet<T>, target: (usize, usize)) -> Result<Matrix<T>> {
    let (bh, bw) = bands.check_dims()?;
    let (h, w) = target;
    let fits = |side: usize, half: usize| side <= 2 * half && side + 1 >= 2 * half && side >= 1;
    if !fits(h, bh) || !fits(w, bw) {
        return Err(Error::Shape(format!(
            "{bh}x{bw} subbands cannot reconstruct a {h}x{w} matrix"
        )));
    }
    let half = T::of(0.5);
    let mut out = Matrix::zeros(h, w);
    let mut put = |r: usize, c: usize, v: T| {
        if r < h && c < w {
            out[(r, c)] = v;
        }
    };
    for i in 0..bh {
        for j in 0..bw {
            let ll = bands.ll[(i, j)];
            let lh = bands.lh[(i, j)];
            let hl = bands.hl[(i, j)];
            let hh = bands.hh[(i, j)];
            put(2 * i, 2 * j, (ll + lh + hl + hh) * half);
            put(2 * i, 2 * j + 1, (ll + lh - hl - hh) * half);
            put(2 * i + 1, 2 * j, (ll - lh + hl - hh) * half);
            put(2 * i + 1, 2 * j + 1, (ll - lh - hl + hh) * half);
        }
    }
    Ok(out)
}

/// Detail bands of one level plus the size of the matrix that level transformed.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailLevel<T> {
    pub lh: Matrix<T>,
    pub hl: Matrix<T>,
    pub hh: Matrix<T>,
    pub input_dims: (usize, usize),
}

impl<T: Scalar> DetailLevel<T> {
    pub fn band(&self, o: Orientation) -> &Matrix<T> {
        match o {
            Orientation::Lh => &self.lh,
            Orientation::Hl => &self.hl,
            Orientation::Hh => &self.hh,
        }
    }

    pub fn band_mut(&mut self, o: Orientation) -> &mut Matrix<T> {
        match o {
            Orientation::Lh => &mut self.lh,
            Orientation::Hl => &mut self.hl,
            Orientation::Hh => &mut self.hh,
        }
    }
}

/// N-level decomposition: `ll_top` is `LL_N`, `details[k-1]` holds level `k`
/// (finest first).
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid<T> {
    pub ll_top: Matrix<T>,
    pub details: Vec<DetailLevel<T>>,
}

impl<T: Scalar> Pyramid<T> {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// `3N + 1`.
    pub fn band_count(&self) -> usize {
        3 * self.levels() + 1
    }

    pub fn original_dims(&self) -> (usize, usize) {
        self.details
            .first()
            .map_or(self.ll_top.dims(), |d| d.input_dims)
    }

    /// Level-1 diagonal band, the one the noise estimator reads.
    pub fn finest_hh(&self) -> &Matrix<T> {
        &self.details[0].hh
    }

    /// Every detail band as `(level, orientation, band)`, level 1 first and
    /// LH, HL, HH within a level.
    pub fn detail_bands(&self) -> impl Iterator<Item = (usize, Orientation, &Matrix<T>)> {
        self.details.iter().enumerate().flat_map(|(k, lvl)| {
            Orientation::ALL
                .into_iter()
                .map(move |o| (k + 1, o, lvl.band(o)))
        })
    }

    /// Sets every detail coefficient to zero, leaving `LL_N`.
    pub fn zero_details(&mut self) {
        for lvl in &mut self.details {
            for o in Orientation::ALL {
                let band = lvl.band_mut(o);
                *band = Matrix::zeros(band.rows(), band.cols());
            }
        }
    }
}

/// Recursively transforms the approximation band `levels` times.
pub fn decompose<T: Scalar>(m: &Matrix<T>, levels: usize) -> Result<Pyramid<T>> {
    if levels == 0 {
        return Err(Error::Parameter(
            "decomposition needs at least one level".into(),
        ));
    }
    let mut details = Vec::with_capacity(levels);
    let mut current = m.clone();
    for level in 1..=levels {
        let (h, w) = current.dims();
        if h < 2 || w < 2 {
            return Err(Error::Size(format!(
                "{levels} levels too many for a {}x{} input: level {level} would see {h}x{w}",
                m.rows(),
                m.cols()
            )));
        }
        let SubbandSet { ll, lh, hl, hh } = dwt2_haar(&current)?;
        details.push(DetailLevel {
            lh,
            hl,
            hh,
            input_dims: (h, w),
        });
        current = ll;
    }
    Ok(Pyramid {
        ll_top: current,
        details,
    })
}

/// Inverts a pyramid deepest level first, cropping each level to its input size.
pub fn reconstruct<T: Scalar>(pyr: &Pyramid<T>) -> Result<Matrix<T>> {
    let mut ll = pyr.ll_top.clone();
    for lvl in pyr.details.iter().rev() {
        let bands = SubbandSet {
            ll,
            lh: lvl.lh.clone(),
            hl: lvl.hl.clone(),
            hh: lvl.hh.clone(),
        };
        ll = idwt2_haar(&bands, lvl.input_dims)?;
    }
    Ok(ll)
}
