//! Haar-wavelet BayesShrink denoising and Moravec/Harris corner detection.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below pin the common `f64` and `f32` instantiations.

// `!(x > 0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes_shrink;
pub mod error;
pub mod harris;
pub mod image;
pub mod matrix;
pub mod metrics;
pub mod moravec;
pub mod nms;
pub mod noise;
pub mod scalar;
pub mod wavelet;

pub use bayes_shrink::{denoise, ShrinkDiagnostics, ThresholdMode, ThresholdRule};
pub use error::{Error, Result};
pub use harris::{detect_harris, HarrisParams, WindowKind};
pub use image::{load_image, overlay_corners, save_image, CornerSet, Detector, Point, RangeTag};
pub use metrics::{mse, psnr, QualityReport};
pub use moravec::{detect_moravec, CornerThreshold, MoravecParams};
pub use noise::{NoiseModel, NoiseSpec};
pub use scalar::Scalar;
pub use wavelet::{decompose, reconstruct, Orientation};

pub type Image = image::Image<f64>;
pub type Image32 = image::Image<f32>;
pub type Matrix = matrix::Matrix<f64>;
pub type Matrix32 = matrix::Matrix<f32>;
pub type Pyramid = wavelet::Pyramid<f64>;
pub type Pyramid32 = wavelet::Pyramid<f32>;
pub type SubbandSet = wavelet::SubbandSet<f64>;
pub type SubbandSet32 = wavelet::SubbandSet<f32>;
pub type ResponseMap = image::ResponseMap<f64>;
pub type ResponseMap32 = image::ResponseMap<f32>;
pub type StructureTensorField = harris::StructureTensorField<f64>;
pub type Diagnostics = ShrinkDiagnostics<f64>;
