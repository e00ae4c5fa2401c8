//! Hard/soft threshold operators and BayesShrink wavelet denoising.
//!
//! The noise level comes from the finest diagonal band,
//! `σ̂ = median(|HH₁|) / 0.6745`. Each detail band `w` then gets its own
//! threshold `T_B = σ̂² / σ_s` with `σ_w² = mean(w²)` and
//! `σ_s = sqrt(max(σ_w² - σ̂², 0))`. A band with `σ_s = 0` is treated as pure
//! noise and zeroed entirely. `LL_N` is never thresholded.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::wavelet::{decompose, reconstruct, Orientation};

/// Median absolute deviation scale for a Gaussian.
pub const MAD_SCALE: f64 = 0.6745;

pub const DEFAULT_LEVELS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    Hard,
    #[default]
    Soft,
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdMode::Hard => "hard",
            ThresholdMode::Soft => "soft",
        })
    }
}

impl FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hard" => Ok(ThresholdMode::Hard),
            "soft" => Ok(ThresholdMode::Soft),
            other => Err(Error::Parameter(format!(
                "threshold mode '{other}' is not hard or soft"
            ))),
        }
    }
}

/// A thresholding operator with its cut-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRule<T> {
    mode: ThresholdMode,
    lambda: T,
}

impl<T: Scalar> ThresholdRule<T> {
    pub fn new(mode: ThresholdMode, lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(ThresholdRule { mode, lambda })
    }

    pub fn mode(&self) -> ThresholdMode {
        self.mode
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn apply_scalar(&self, u: T) -> T {
        match self.mode {
            ThresholdMode::Hard => hard(u, self.lambda),
            ThresholdMode::Soft => soft(u, self.lambda),
        }
    }

    pub fn apply(&self, coeffs: &Matrix<T>) -> Matrix<T> {
        coeffs.map(|u| self.apply_scalar(u))
    }
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda >= T::zero() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("threshold {lambda} must be >= 0")))
    }
}

/// Keep-or-kill: `u` if `|u| > λ`, else 0.
pub fn hard<T: Scalar>(u: T, lambda: T) -> T {
    if u.abs() > lambda {
        u
    } else {
        T::zero()
    }
}

/// Shrinkage: `sgn(u) · max(0, |u| - λ)`.
pub fn soft<T: Scalar>(u: T, lambda: T) -> T {
    let mag = u.abs() - lambda;
    if mag > T::zero() {
        mag.copysign(u)
    } else {
        T::zero()
    }
}

pub fn hard_threshold<T: Scalar>(coeffs: &Matrix<T>, lambda: T) -> Result<Matrix<T>> {
    Ok(ThresholdRule::new(ThresholdMode::Hard, lambda)?.apply(coeffs))
}

pub fn soft_threshold<T: Scalar>(coeffs: &Matrix<T>, lambda: T) -> Result<Matrix<T>> {
    Ok(ThresholdRule::new(ThresholdMode::Soft, lambda)?.apply(coeffs))
}

/// Median of the values; even counts average the two central order statistics.
fn median<T: Scalar>(mut values: Vec<T>) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite coefficients"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) * T::of(0.5)
    }
}

/// Robust noise standard deviation from the level-1 diagonal band.
pub fn estimate_noise_sigma<T: Scalar>(hh1: &Matrix<T>) -> Result<T> {
    if hh1.is_empty() {
        return Err(Error::Size("noise estimate needs a nonempty band".into()));
    }
    let abs = hh1.as_slice().iter().map(|v| v.abs()).collect();
    Ok(median(abs) / T::of(MAD_SCALE))
}

/// Root of the raw second moment of a band (no mean subtraction).
pub fn band_sigma_w<T: Scalar>(band: &Matrix<T>) -> Result<T> {
    if band.is_empty() {
        return Err(Error::Size("sigma_w needs a nonempty band".into()));
    }
    Ok((band.energy() / T::of(band.len() as f64)).sqrt())
}

/// Result of the Bayes threshold rule for one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BayesThreshold<T> {
    Finite(T),
    /// `σ_s = 0` with nonzero noise: the band is all noise.
    KillBand,
}

impl<T: Scalar> BayesThreshold<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            BayesThreshold::Finite(t) => Some(t),
            BayesThreshold::KillBand => None,
        }
    }

    /// Concrete cut-off for `band`: the kill sentinel becomes `max|coef| + 1`.
    pub fn effective(&self, band: &Matrix<T>) -> T {
        match *self {
            BayesThreshold::Finite(t) => t,
            BayesThreshold::KillBand => band.max_abs() + T::one(),
        }
    }
}

/// Per-band quantities behind `T_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEstimate<T> {
    pub sigma_w: T,
    pub sigma_s: T,
    pub threshold: BayesThreshold<T>,
}

pub fn band_estimate<T: Scalar>(sigma_noise: T, band: &Matrix<T>) -> Result<BandEstimate<T>> {
    if !(sigma_noise >= T::zero()) {
        return Err(Error::Parameter(format!(
            "noise sigma {sigma_noise} must be >= 0"
        )));
    }
    let sigma_w = band_sigma_w(band)?;
    let noise_var = sigma_noise * sigma_noise;
    let sigma_s = (sigma_w * sigma_w - noise_var).max(T::zero()).sqrt();
    let threshold = if sigma_noise == T::zero() {
        BayesThreshold::Finite(T::zero())
    } else if sigma_s == T::zero() {
        BayesThreshold::KillBand
    } else {
        BayesThreshold::Finite(noise_var / sigma_s)
    };
    Ok(BandEstimate {
        sigma_w,
        sigma_s,
        threshold,
    })
}

/// `T_B = σ² / σ_s` for one band.
pub fn bayes_threshold<T: Scalar>(sigma_noise: T, band: &Matrix<T>) -> Result<BayesThreshold<T>> {
    Ok(band_estimate(sigma_noise, band)?.threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandRecord<T> {
    pub level: usize,
    pub name: Orientation,
    pub sigma_w: T,
    pub sigma_s: T,
    /// `None` for a killed band.
    pub t_b: Option<T>,
    pub zeroed: usize,
    pub total: usize,
}

/// Numbers behind one [`denoise`] call, bands in pyramid order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkDiagnostics<T> {
    pub sigma_noise: T,
    pub bands: Vec<BandRecord<T>>,
}

/// Decompose, threshold every detail band with its own `T_B`, reconstruct.
///
/// The output is clamped to the nominal range of the input's tag.
pub fn denoise<T: Scalar>(
    img: &Image<T>,
    levels: usize,
    mode: ThresholdMode,
) -> Result<(Image<T>, ShrinkDiagnostics<T>)> {
    let mut pyr = decompose(img.matrix(), levels)?;
    let sigma_noise = estimate_noise_sigma(pyr.finest_hh())?;
    let mut bands = Vec::with_capacity(3 * levels);
    for (k, lvl) in pyr.details.iter_mut().enumerate() {
        for o in Orientation::ALL {
            let band = lvl.band_mut(o);
            let est = band_estimate(sigma_noise, band)?;
            let lambda = est.threshold.effective(band);
            let zeroed = band.as_slice().iter().filter(|u| u.abs() <= lambda).count();
            *band = ThresholdRule::new(mode, lambda)?.apply(band);
            bands.push(BandRecord {
                level: k + 1,
                name: o,
                sigma_w: est.sigma_w,
                sigma_s: est.sigma_s,
                t_b: est.threshold.finite(),
                zeroed,
                total: band.len(),
            });
        }
    }
    let restored = Image::from_matrix(reconstruct(&pyr)?, img.range())?.clamped();
    Ok((restored, ShrinkDiagnostics { sigma_noise, bands }))
}
