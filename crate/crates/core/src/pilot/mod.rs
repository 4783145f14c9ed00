//! Neural-network pilot for the volatility function.
//!
//! A single-hidden-layer logistic network `q(x) = b0 + sum_k c_k psi(a_k x + b_k)`
//! is fitted by least squares to the lagged design. Its analytic second
//! derivative feeds the curvature functional and its fitted values feed the
//! fourth-moment estimate of the innovations.

mod fit;
mod network;

pub use fit::{
    estimate_m4eps, fit_pilot, PilotConfig, PilotFitReport, DEFAULT_INPUT_WEIGHT_BOUND, DEFAULT_WEIGHT_BUDGET,
};
pub use network::{sigmoid, HiddenNode, PilotNetwork};
