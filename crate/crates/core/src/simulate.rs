//! Benchmark return generators.
//!
//! | model          | conditional variance                               |
//! |----------------|----------------------------------------------------|
//! | ARCH(1)        | `a0 + a1 X_{t-1}^2`                                |
//! | GARCH(1,1)     | `a0 + a1 X_{t-1}^2 + b sigma_{t-1}^2`              |
//! | HT             | `[phi(X_{t-1} + 1.2) + 1.5 phi(X_{t-1} - 1.2)]^2`  |
//! | ARCH with e~   | `a0 + (a1 + b) X_{t-1}^2`, innovations `e~(e)`     |
//!
//! Innovations are standard normal. Paths start from a zero lagged return
//! (GARCH lagged variance at its unconditional level) and discard a burn-in.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GasError, Result};
use crate::garch_theory::{epsilon_tilde, GarchParams};
use crate::rng::stream_rng;
use crate::smoothing::{ReturnSeries, MIN_SERIES_LEN};

pub const DEFAULT_BURN_IN: usize = 500;
const MIN_BURN_IN: usize = 200;

/// Mean-shift and scale constants of the HT volatility.
const HT_SHIFT: f64 = 1.2;
const HT_RIGHT_WEIGHT: f64 = 1.5;

/// Data generating process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Arch1 { alpha0: f64, alpha1: f64 },
    Garch11(GarchParams<f64>),
    Ht,
    /// ARCH(1) with coefficients `(alpha0, alpha1 + beta)` driven by the
    /// transformed innovations of the given GARCH parameters.
    ArchEpsTilde(GarchParams<f64>),
}

impl ModelSpec {
    /// Model 1 of the benchmark set.
    pub fn model1() -> Self {
        ModelSpec::Arch1 { alpha0: 0.1, alpha1: 0.5 }
    }

    /// Model 2 of the benchmark set.
    pub fn model2() -> Self {
        ModelSpec::Garch11(GarchParams::new(0.1, 0.3, 0.2).expect("valid"))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::Arch1 { alpha0, alpha1 } => {
                if !(alpha0 > 0.0 && alpha1 > 0.0 && alpha1 < 1.0) {
                    return Err(GasError::Config(format!(
                        "ARCH(1) needs alpha0 > 0 and 0 < alpha1 < 1, got ({alpha0}, {alpha1})"
                    )));
                }
                Ok(())
            }
            ModelSpec::Garch11(p) | ModelSpec::ArchEpsTilde(p) => {
                GarchParams::new(p.alpha0(), p.alpha1(), p.beta()).map(|_| ())
            }
            ModelSpec::Ht => Ok(()),
        }
    }

    /// Short machine-friendly name.
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Arch1 { .. } => "arch",
            ModelSpec::Garch11(_) => "garch",
            ModelSpec::Ht => "ht",
            ModelSpec::ArchEpsTilde(_) => "arch-eps-tilde",
        }
    }

    /// Whether the volatility function is even in the lagged return.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, ModelSpec::Ht)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Arch1 { alpha0, alpha1 } => write!(f, "arch({alpha0},{alpha1})"),
            ModelSpec::Garch11(p) => write!(f, "garch({},{},{})", p.alpha0(), p.alpha1(), p.beta()),
            ModelSpec::Ht => f.write_str("ht"),
            ModelSpec::ArchEpsTilde(p) => {
                write!(f, "arch-eps-tilde({},{},{})", p.alpha0(), p.alpha1(), p.beta())
            }
        }
    }
}

/// Innovation law. Only the standard normal is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Innovation {
    #[default]
    StdNormal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub model: ModelSpec,
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub innovation: Innovation,
}

impl SimSpec {
    pub fn new(model: ModelSpec, n: usize, seed: u64) -> Self {
        Self { model, n, burn_in: DEFAULT_BURN_IN, seed, innovation: Innovation::StdNormal }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.n < MIN_SERIES_LEN {
            return Err(GasError::Config(format!("series length {} below {MIN_SERIES_LEN}", self.n)));
        }
        if self.burn_in < MIN_BURN_IN {
            return Err(GasError::Config(format!("burn-in {} below {MIN_BURN_IN}", self.burn_in)));
        }
        Ok(())
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

fn ht_sd(x: f64) -> f64 {
    normal_pdf(x + HT_SHIFT) + HT_RIGHT_WEIGHT * normal_pdf(x - HT_SHIFT)
}

/// Stateful one-step generator shared by [`simulate`] and the oracle.
pub(crate) struct Recursion {
    model: ModelSpec,
    prev_x: f64,
    prev_var: f64,
    started: bool,
}

impl Recursion {
    pub(crate) fn new(model: ModelSpec) -> Self {
        let prev_var = match model {
            ModelSpec::Garch11(p) => p.unconditional_variance(),
            _ => 0.0,
        };
        Self { model, prev_x: 0.0, prev_var, started: false }
    }

    /// Conditional variance of the next draw.
    #[inline]
    pub(crate) fn next_variance(&self) -> f64 {
        let x = self.prev_x;
        match self.model {
            ModelSpec::Arch1 { alpha0, alpha1 } => alpha0 + alpha1 * x * x,
            ModelSpec::Garch11(p) if !self.started => p.unconditional_variance(),
            ModelSpec::Garch11(p) => p.alpha0() + p.alpha1() * x * x + p.beta() * self.prev_var,
            ModelSpec::Ht => ht_sd(x).powi(2),
            ModelSpec::ArchEpsTilde(p) => p.alpha0() + p.persistence() * x * x,
        }
    }

    #[inline]
    pub(crate) fn step(&mut self, eps: f64) -> f64 {
        let var = self.next_variance();
        let shock = match self.model {
            ModelSpec::ArchEpsTilde(p) => epsilon_tilde(eps, &p),
            _ => eps,
        };
        let x = var.sqrt() * shock;
        self.prev_var = var;
        self.prev_x = x;
        self.started = true;
        x
    }
}

/// Simulates a return path of length `spec.n` after discarding the burn-in.
pub fn simulate(spec: &SimSpec) -> Result<ReturnSeries<f64>> {
    spec.validate()?;
    let mut rng = stream_rng(spec.seed, 0);
    let mut rec = Recursion::new(spec.model);
    let mut out = Vec::with_capacity(spec.n);
    for t in 0..spec.burn_in + spec.n {
        let eps: f64 = match spec.innovation {
            Innovation::StdNormal => rng.sample(StandardNormal),
        };
        let x = rec.step(eps);
        if t >= spec.burn_in {
            out.push(x);
        }
    }
    ReturnSeries::new(out)
}

/// Runs the recursion on a supplied innovation sequence (no burn-in).
pub fn simulate_with_innovations(model: ModelSpec, innovations: &[f64]) -> Result<Vec<f64>> {
    model.validate()?;
    let mut rec = Recursion::new(model);
    Ok(innovations.iter().map(|&e| rec.step(e)).collect())
}

/// Closed-form volatility function, where one exists.
///
/// GARCH(1,1) has none; use [`crate::garch_theory::narch_sigma2_oracle`].
pub fn true_sigma2(model: &ModelSpec, x: f64) -> Option<f64> {
    match *model {
        ModelSpec::Arch1 { alpha0, alpha1 } => Some(alpha0 + alpha1 * x * x),
        ModelSpec::Ht => Some(ht_sd(x).powi(2)),
        // E[e~^2] = 1, so the transformed-innovation ARCH keeps its ARCH form
        ModelSpec::ArchEpsTilde(p) => Some(p.alpha0() + p.persistence() * x * x),
        ModelSpec::Garch11(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_innovations_give_zero_path() {
        let x = simulate_with_innovations(ModelSpec::model1(), &[0.0; 20]).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ht_conditional_sd() {
        let sd = normal_pdf(0.0) + 1.5 * normal_pdf(-2.4);
        assert!((sd - 0.432_534_075_843_697).abs() < 1e-12);
        assert!((sd - 0.432535).abs() < 2e-6);
        let s2 = true_sigma2(&ModelSpec::Ht, -1.2).unwrap();
        assert!((s2 - 0.187_085_726_765_961).abs() < 1e-12);
        assert!((s2 - 0.187087).abs() < 2e-6);
        assert!((s2 - sd * sd).abs() < 1e-15);
    }

    #[test]
    fn ht_is_asymmetric() {
        let a = true_sigma2(&ModelSpec::Ht, 1.2).unwrap();
        let b = true_sigma2(&ModelSpec::Ht, -1.2).unwrap();
        assert!((a - b).abs() > 0.1);
    }

    #[test]
    fn closed_forms() {
        assert!((true_sigma2(&ModelSpec::model1(), 1.0).unwrap() - 0.6).abs() < 1e-15);
        assert!(true_sigma2(&ModelSpec::model2(), 1.0).is_none());
    }

    #[test]
    fn reproducible() {
        let s = SimSpec::new(ModelSpec::Ht, 300, 11);
        assert_eq!(simulate(&s).unwrap(), simulate(&s).unwrap());
        let t = SimSpec::new(ModelSpec::Ht, 300, 12);
        assert_ne!(simulate(&s).unwrap(), simulate(&t).unwrap());
    }

    #[test]
    fn invalid_specs() {
        assert!(simulate(&SimSpec::new(ModelSpec::Arch1 { alpha0: 0.1, alpha1: 1.0 }, 100, 1)).is_err());
        assert!(simulate(&SimSpec::new(ModelSpec::model1(), 10, 1)).is_err());
        let mut s = SimSpec::new(ModelSpec::model1(), 100, 1);
        s.burn_in = 10;
        assert!(simulate(&s).is_err());
    }

    #[test]
    fn garch_first_variance_is_unconditional() {
        let p = GarchParams::new(0.1, 0.3, 0.2).unwrap();
        let rec = Recursion::new(ModelSpec::Garch11(p));
        assert!((rec.next_variance() - 0.2).abs() < 1e-15);
        let x = simulate_with_innovations(ModelSpec::Garch11(p), &[1.0, 0.0]).unwrap();
        assert!((x[0] - 0.2f64.sqrt()).abs() < 1e-15);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn eps_tilde_arch_uses_transformed_shocks() {
        let p = GarchParams::new(0.1, 0.3, 0.2).unwrap();
        let x = simulate_with_innovations(ModelSpec::ArchEpsTilde(p), &[-2.0, 1.0]).unwrap();
        assert!((x[0] - 0.1f64.sqrt() * epsilon_tilde(-2.0, &p)).abs() < 1e-15);
        let v1 = 0.1 + 0.5 * x[0] * x[0];
        assert!((x[1] - v1.sqrt()).abs() < 1e-15);
    }
}
