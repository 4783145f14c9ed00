//! Bias and variance functionals and the plug-in bandwidth.
//!
//! On an interval `I_x = [x - a/2, x + a/2]` the pilot network gives
//!
//! * `B = C1^2 * mean over X_{t-1} in I_x of q''(X_{t-1})^2`
//! * `V = C2 * (a / n*) sum_i q(z_i)^2 (m4 - 1) / occupancy(I_x)`
//!
//! with `z_i` equally spaced inside `I_x`, and the bandwidth
//! `h = (V / (4 n B))^{1/5}` minimises the interval AMISE. A window spanning
//! the bulk of the data gives one global bandwidth; a narrow window centred at
//! each evaluation point gives a local one.

mod estimator;
mod functionals;

pub use estimator::{GasConfig, GasContext, GasEstimator, PointEstimate};
pub use functionals::{
    bandwidth_plan, estimate_b_functional, estimate_v_functional, global_window, local_default_width, plugin_bandwidth,
    BandwidthPlan, FunctionalEstimates, IntervalWindow, PlanFlags, Regime, VNormalization, WindowSpec,
    FLAT_CURVATURE_TOL, MAX_WIDENINGS, MIN_FUNCTIONAL_POINTS, WIDENING_FACTOR,
};
