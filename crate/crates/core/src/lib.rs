//! Nonparametric estimation of the volatility function `sigma^2(x)` of a
//! one-lag heteroscedastic return process, with a local linear smoother, a
//! plug-in bandwidth built from a neural-network pilot, pointwise confidence
//! bands and a symmetry test. Also included: benchmark simulators, the
//! GARCH(1,1) to one-lag nonparametric ARCH representation, a GARCH(1,1)
//! likelihood baseline and a Monte Carlo harness.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the common choices.

pub mod bandwidth;
pub mod cli;
pub mod error;
pub mod garch_theory;
pub mod harness;
pub mod inference;
pub mod io;
pub mod mle;
pub mod pilot;
pub mod rng;
pub mod scalar;
pub mod simulate;
pub mod smoothing;

pub use error::{GasError, Result};

pub type Estimator = bandwidth::GasEstimator<f64>;
pub type Estimator32 = bandwidth::GasEstimator<f32>;
pub type Network = pilot::PilotNetwork<f64>;
pub type Network32 = pilot::PilotNetwork<f32>;
pub type Series = smoothing::ReturnSeries<f64>;
pub type Series32 = smoothing::ReturnSeries<f32>;
pub type Pairs = smoothing::DesignPairs<f64>;
pub type Pairs32 = smoothing::DesignPairs<f32>;
pub type Kernel = smoothing::KernelSpec<f64>;
pub type Kernel32 = smoothing::KernelSpec<f32>;
pub type Garch = garch_theory::GarchParams<f64>;
pub type Garch32 = garch_theory::GarchParams<f32>;
pub type Plan = bandwidth::BandwidthPlan<f64>;
pub type Plan32 = bandwidth::BandwidthPlan<f32>;
pub type Curve = inference::VolatilityCurve<f64>;
pub type Curve32 = inference::VolatilityCurve<f32>;
pub type SymmetryResult = inference::SymmetryTestResult<f64>;
pub type SymmetryResult32 = inference::SymmetryTestResult<f32>;
