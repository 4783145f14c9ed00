//! Pointwise confidence intervals and the symmetry test.
//!
//! At each point the studentized local linear estimate
//! `sqrt(n h) (sigma2_hat - bias - sigma2) / sqrt(V)` is asymptotically
//! standard normal, which gives intervals `center +- z sqrt(V / (n h))`.
//! Intervals are pointwise, not simultaneous.

mod band;
mod quantile;
mod symmetry;

pub use band::{
    confidence_band, interval_averaged_estimate, BandConfig, BandPoint, BiasCorrection, IntervalAverage,
    PointFailure, VolatilityCurve,
};
pub use quantile::normal_quantile;
pub use symmetry::{symmetry_test, test_points, SymmetryConfig, SymmetryPair, SymmetryTestResult};
