//! Local linear estimation of the conditional variance function.
//!
//! The design is the lagged-return regression `(X_{t-1}, X_t^2)`: the
//! regressor is the previous return and the response the squared return, so
//! the smoother estimates `sigma^2(x) = E[X_t^2 | X_{t-1} = x]`.

mod data;
mod kernel;
mod local_linear;

pub use data::{DesignPairs, ReturnSeries, MIN_SERIES_LEN};
pub use kernel::{kernel_constants, kernel_eval, KernelKind, KernelSpec};
pub use local_linear::{
    effective_weights, lle_fit, LocalFit, LocalWeights, MAX_INFLATIONS, MIN_WINDOW_POINTS,
    WINDOW_INFLATION,
};
