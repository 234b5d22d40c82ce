//! Information rates of channels with additive white Cauchy noise.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which every tolerance in the
//! test suites assumes.

pub mod blahut;
pub mod bounds;
pub mod cauchy;
pub mod decoding;
pub mod error;
pub mod gmi;
pub mod optimize;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use rng::RandomStream;
pub use scalar::Real;

pub type CauchyParam = cauchy::CauchyParam<f64>;
pub type ChannelParams = bounds::ChannelParams<f64>;
pub type BoundsReport = bounds::BoundsReport<f64>;
pub type DiscretizedChannel = blahut::DiscretizedChannel<f64>;
pub type BaSolution = blahut::BaSolution<f64>;
pub type GridSpec = blahut::GridSpec<f64>;
pub type GmiProblem = gmi::GmiProblem<f64>;
pub type GmiControls = gmi::GmiControls<f64>;
pub type GmiEstimate = gmi::GmiEstimate<f64>;
pub type CodewordPair = decoding::CodewordPair<f64>;
pub type EnsembleSpec = decoding::EnsembleSpec<f64>;
pub type McEstimate = decoding::McEstimate<f64>;
pub type VectorChannel = vector::VectorChannel<f64>;
pub type Combiner = vector::Combiner<f64>;
