//! Seeded additive and multiplicative noise on unit-scale images.
//!
//! Every model draws from `ChaCha8Rng::seed_from_u64(seed)`, one pixel at a
//! time in row-major order. Uniforms are `(next_u64 >> 11) * 2^-53` in
//! `[0, 1)`. Gaussian draws use the cosine branch of Box–Muller on two
//! consecutive uniforms `(u1, u2)`: `sqrt(-2 ln(1 - u1)) * cos(2π u2)`.
//! Results are clamped to `[0, 1]`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::image::{Image, RangeTag};
use crate::scalar::Scalar;

pub const DEFAULT_GAUSSIAN_VARIANCE: f64 = 0.01;
pub const DEFAULT_SALT_PEPPER_DENSITY: f64 = 0.05;
pub const DEFAULT_SPECKLE_VARIANCE: f64 = 0.04;

/// Portable uniform and normal source over ChaCha8.
pub struct NoiseRng {
    inner: ChaCha8Rng,
}

impl NoiseRng {
    pub fn new(seed: u64) -> Self {
        NoiseRng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller (cosine branch).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

/// Noise kind and parameters, without the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Gaussian { mean: f64, variance: f64 },
    SaltPepper { density: f64 },
    Speckle { variance: f64 },
}

impl NoiseModel {
    pub fn gaussian() -> Self {
        NoiseModel::Gaussian {
            mean: 0.0,
            variance: DEFAULT_GAUSSIAN_VARIANCE,
        }
    }

    pub fn salt_pepper() -> Self {
        NoiseModel::SaltPepper {
            density: DEFAULT_SALT_PEPPER_DENSITY,
        }
    }

    pub fn speckle() -> Self {
        NoiseModel::Speckle {
            variance: DEFAULT_SPECKLE_VARIANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Gaussian { mean, variance } => {
                check_variance(variance)?;
                if !mean.is_finite() {
                    return Err(Error::Parameter(format!("mean {mean} is not finite")));
                }
                Ok(())
            }
            NoiseModel::SaltPepper { density } => check_density(density),
            NoiseModel::Speckle { variance } => check_variance(variance),
        }
    }

    pub fn apply<T: Scalar>(&self, img: &Image<T>, seed: u64) -> Result<Image<T>> {
        match *self {
            NoiseModel::Gaussian { mean, variance } => add_gaussian(img, mean, variance, seed),
            NoiseModel::SaltPepper { density } => add_salt_pepper(img, density, seed),
            NoiseModel::Speckle { variance } => add_speckle(img, variance, seed),
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseModel::Gaussian { mean, variance } => {
                write!(f, "gaussian:mean={mean},var={variance}")
            }
            NoiseModel::SaltPepper { density } => write!(f, "saltpepper:density={density}"),
            NoiseModel::Speckle { variance } => write!(f, "speckle:var={variance}"),
        }
    }
}

/// Parses `gaussian:mean=0,var=0.01`, `saltpepper:density=0.05`,
/// `speckle:var=0.04`. Omitted parameters take their defaults.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut model = match kind.trim().to_ascii_lowercase().as_str() {
            "gaussian" => NoiseModel::gaussian(),
            "saltpepper" | "salt_pepper" | "salt-pepper" => NoiseModel::salt_pepper(),
            "speckle" => NoiseModel::speckle(),
            other => return Err(Error::Parameter(format!("unknown noise kind '{other}'"))),
        };
        for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got '{pair}'")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("'{value}' is not a number")))?;
            match (&mut model, key.trim()) {
                (NoiseModel::Gaussian { mean, .. }, "mean") => *mean = value,
                (NoiseModel::Gaussian { variance, .. }, "var")
                | (NoiseModel::Speckle { variance }, "var") => *variance = value,
                (NoiseModel::SaltPepper { density }, "density") => *density = value,
                (_, key) => {
                    return Err(Error::Parameter(format!(
                        "parameter '{key}' does not apply to {kind}"
                    )))
                }
            }
        }
        model.validate()?;
        Ok(model)
    }
}

/// A noise model together with the seed that pins its realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, seed: u64) -> Self {
        NoiseSpec { model, seed }
    }

    pub fn apply<T: Scalar>(&self, img: &Image<T>) -> Result<Image<T>> {
        self.model.apply(img, self.seed)
    }
}

fn check_variance(variance: f64) -> Result<()> {
    if variance >= 0.0 && variance.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "variance {variance} must be >= 0"
        )))
    }
}

fn check_density(density: f64) -> Result<()> {
    if (0.0..=1.0).contains(&density) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "density {density} outside [0, 1]"
        )))
    }
}

fn require_unit<T: Scalar>(img: &Image<T>) -> Result<()> {
    if img.range() == RangeTag::Unit {
        Ok(())
    } else {
        Err(Error::Parameter(
            "noise models operate on unit-scale images".into(),
        ))
    }
}

fn map_pixels<T: Scalar>(
    img: &Image<T>,
    seed: u64,
    mut f: impl FnMut(f64, &mut NoiseRng) -> f64,
) -> Image<T> {
    let mut rng = NoiseRng::new(seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| T::of(f(v.to_f64_lossy(), &mut rng).clamp(0.0, 1.0)))
        .collect();
    Image::new(img.width(), img.height(), pixels, RangeTag::Unit).expect("same shape")
}

/// Adds i.i.d. `N(mean, variance)` to every pixel.
pub fn add_gaussian<T: Scalar>(
    img: &Image<T>,
    mean: f64,
    variance: f64,
    seed: u64,
) -> Result<Image<T>> {
    require_unit(img)?;
    NoiseModel::Gaussian { mean, variance }.validate()?;
    let sd = variance.sqrt();
    Ok(map_pixels(img, seed, |v, rng| {
        v + mean + sd * rng.standard_normal()
    }))
}

/// Replaces each pixel with probability `density` by 0 or 1 (even odds).
pub fn add_salt_pepper<T: Scalar>(img: &Image<T>, density: f64, seed: u64) -> Result<Image<T>> {
    require_unit(img)?;
    check_density(density)?;
    Ok(map_pixels(img, seed, |v, rng| {
        if rng.uniform() < density {
            if rng.uniform() < 0.5 {
                0.0
            } else {
                1.0
            }
        } else {
            v
        }
    }))
}

/// `out = in + n * in` with `n` uniform on `[-sqrt(3v), sqrt(3v))`.
pub fn add_speckle<T: Scalar>(img: &Image<T>, variance: f64, seed: u64) -> Result<Image<T>> {
    require_unit(img)?;
    check_variance(variance)?;
    let half_width = (3.0 * variance).sqrt();
    Ok(map_pixels(img, seed, |v, rng| {
        let n = half_width * (2.0 * rng.uniform() - 1.0);
        v + n * v
    }))
}
