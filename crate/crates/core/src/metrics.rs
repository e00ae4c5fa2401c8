//! Mean squared error and peak signal-to-noise ratio.

use crate::error::{Error, Result};
use crate::image::{Image, RangeTag};
use crate::scalar::Scalar;

pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport<T> {
    pub mse: T,
    /// `+inf` when the images are identical.
    pub psnr_db: T,
}

fn check_pair<T: Scalar>(f: &Image<T>, g: &Image<T>) -> Result<()> {
    if (f.width(), f.height()) != (g.width(), g.height()) {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            f.width(),
            f.height(),
            g.width(),
            g.height()
        )));
    }
    if f.range() != g.range() {
        return Err(Error::Parameter(
            "images compared on different intensity scales".into(),
        ));
    }
    Ok(())
}

/// `(1/MN) ΣΣ (f - g)²`.
pub fn mse<T: Scalar>(f: &Image<T>, g: &Image<T>) -> Result<T> {
    check_pair(f, g)?;
    let sum: T = f
        .pixels()
        .iter()
        .zip(g.pixels())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    Ok(sum / T::of(f.pixels().len() as f64))
}

/// `10 log10(255² / MSE)` in dB, both images on the byte scale.
pub fn psnr_from_mse<T: Scalar>(mse: T) -> T {
    if mse == T::zero() {
        T::infinity()
    } else {
        T::of(10.0) * (T::of(PEAK * PEAK) / mse).log10()
    }
}

pub fn psnr<T: Scalar>(f: &Image<T>, g: &Image<T>) -> Result<T> {
    Ok(quality(f, g)?.psnr_db)
}

pub fn quality<T: Scalar>(f: &Image<T>, g: &Image<T>) -> Result<QualityReport<T>> {
    check_pair(f, g)?;
    if f.range() != RangeTag::Byte {
        return Err(Error::Parameter(
            "psnr uses a 255 peak; convert both images to byte scale".into(),
        ));
    }
    let mse = mse(f, g)?;
    Ok(QualityReport {
        mse,
        psnr_db: psnr_from_mse(mse),
    })
}
