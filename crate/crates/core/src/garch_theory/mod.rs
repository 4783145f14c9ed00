//! GARCH(1,1) as a one-lag nonparametric ARCH model.
//!
//! With a symmetric innovation `e`, the transformed innovation
//! `e~ = sgn(e) sqrt((a1 e^2 + b) / (a1 + b))` and the factor
//! `C = 1 + (b / a1)(1 - 1 / e~^2)` rewrite a GARCH(1,1) path as
//! `X_t = C_t^{1/2} X~_t` where `X~` is an ARCH(1) path with coefficients
//! `(a0, a1 + b)` driven by `e~`. The conditional variance given the last
//! return is then `sigma^2(x) = A0 + (a1 + b) g~(x) x^2` with
//! `A0 = a0 + b a0 / (1 - a1 - b)`. The coefficient function `g~` has no
//! closed form; [`narch_sigma2_oracle`] tabulates `sigma^2(x)` by conditional
//! averaging on a long simulated path.

mod nic;
mod oracle;

pub use nic::{nic_compare, support_gap, NicComparison, NicConfig};

pub use oracle::{
    garch_lag_pairs, narch_sigma2_oracle, transform_moments, NarchRepresentation, OracleCell, OracleConfig,
    OracleTable, TransformMoments, MIN_ORACLE_PATH,
};

use crate::error::{GasError, Result};
use crate::scalar::{wide, Real};

/// GARCH(1,1) coefficients `sigma_t^2 = alpha0 + alpha1 X_{t-1}^2 + beta sigma_{t-1}^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams<T = f64> {
    alpha0: T,
    alpha1: T,
    beta: T,
}

impl<T: Real> GarchParams<T> {
    /// Requires `alpha0 > 0`, `alpha1 > 0`, `beta >= 0`, `alpha1 + beta < 1`.
    pub fn new(alpha0: T, alpha1: T, beta: T) -> Result<Self> {
        let ok = alpha0 > T::zero()
            && alpha1 > T::zero()
            && beta >= T::zero()
            && alpha1 + beta < T::one()
            && alpha0.is_finite()
            && alpha1.is_finite()
            && beta.is_finite();
        if !ok {
            return Err(GasError::Config(format!(
                "GARCH parameters ({alpha0}, {alpha1}, {beta}) violate positivity or stationarity"
            )));
        }
        Ok(Self { alpha0, alpha1, beta })
    }

    pub fn alpha0(&self) -> T {
        self.alpha0
    }

    pub fn alpha1(&self) -> T {
        self.alpha1
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn persistence(&self) -> T {
        self.alpha1 + self.beta
    }

    /// `alpha0 / (1 - alpha1 - beta)`.
    pub fn unconditional_variance(&self) -> T {
        self.alpha0 / (T::one() - self.persistence())
    }

    /// `B0 = beta alpha0 / (1 - alpha1 - beta)`.
    pub fn b0(&self) -> T {
        self.beta * self.unconditional_variance()
    }

    /// `A0 = alpha0 + B0`, the volatility at a zero lagged return.
    pub fn a0(&self) -> T {
        self.alpha0 + self.b0()
    }

    /// Conditional variance with the lagged variance fixed at its
    /// unconditional mean: `alpha0 + alpha1 x^2 + B0`.
    pub fn news_impact(&self, x: T) -> T {
        self.a0() + self.alpha1 * x * x
    }

    pub fn to_f64(&self) -> GarchParams<f64> {
        GarchParams { alpha0: wide(self.alpha0), alpha1: wide(self.alpha1), beta: wide(self.beta) }
    }
}

fn sgn<T: Real>(x: T) -> T {
    if x > T::zero() {
        T::one()
    } else if x < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Transformed innovation `sgn(e) sqrt((a1 e^2 + b) / (a1 + b))`, with
/// `sgn(0) = 0`.
pub fn epsilon_tilde<T: Real>(eps: T, params: &GarchParams<T>) -> T {
    let a1 = params.alpha1();
    let b = params.beta();
    sgn(eps) * ((a1 * eps * eps + b) / (a1 + b)).sqrt()
}

/// Correction factor `1 + (b / a1)(1 - 1 / e~^2)`.
pub fn c_eps_tilde<T: Real>(eps_tilde: T, params: &GarchParams<T>) -> Result<T> {
    if eps_tilde == T::zero() || eps_tilde.is_nan() {
        return Err(GasError::Domain(format!("C is undefined at e~ = {eps_tilde}")));
    }
    let ratio = params.beta() / params.alpha1();
    Ok(T::one() + ratio * (T::one() - T::one() / (eps_tilde * eps_tilde)))
}
