use super::normal_quantile;
use crate::bandwidth::{GasContext, WindowSpec};
use crate::error::{GasError, Result};
use crate::scalar::{count, wide, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryConfig {
    /// Total number of test points; `n_x / 2` pairs `{-x_i, x_i}`.
    pub n_x: usize,
    pub alpha: f64,
    /// Interval used for the bandwidth, shared by both points of a pair.
    pub bandwidth: WindowSpec,
    /// Interval used for the variance functional at each point.
    pub variance: WindowSpec,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        Self { n_x: 20, alpha: 0.01, bandwidth: WindowSpec::Global, variance: WindowSpec::LocalDefault }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryPair<T = f64> {
    /// Positive member of the pair.
    pub x: T,
    pub statistic: T,
    pub sigma2_pos: T,
    pub sigma2_neg: T,
    pub h_pos: T,
    pub h_neg: T,
    pub v_pos: T,
    pub v_neg: T,
    pub exceeds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryTestResult<T = f64> {
    pub pairs: Vec<SymmetryPair<T>>,
    /// Requested pairs that could not be evaluated, with the reason.
    pub dropped: Vec<(f64, String)>,
    pub critical_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub n_x: usize,
}

impl<T: Real> SymmetryTestResult<T> {
    /// Decision recomputed from the stored statistics.
    pub fn decision(&self) -> bool {
        self.pairs.iter().any(|p| wide(p.statistic.abs()) >= self.critical_value)
    }

    pub fn max_abs_statistic(&self) -> f64 {
        self.pairs.iter().map(|p| wide(p.statistic.abs())).fold(0.0, f64::max)
    }
}

/// `n_x / 2` equally spaced positive points on `(0, q]`, with `q` the
/// smaller of `|1% quantile|` and the 99% quantile of the regressor.
pub fn test_points<T: Real>(ctx: &GasContext<'_, T>, n_x: usize) -> Result<Vec<T>> {
    let lo = ctx.pairs.regressor_quantile(0.01);
    let hi = ctx.pairs.regressor_quantile(0.99);
    if !(lo < T::zero() && hi > T::zero()) {
        return Err(GasError::Domain("regressor support does not cover both signs".into()));
    }
    let q = (-lo).min(hi);
    let m = n_x / 2;
    Ok((1..=m).map(|i| q * count(i) / count(m)).collect())
}

/// Bonferroni test of `sigma^2(x) = sigma^2(-x)` at `n_x / 2` pairs.
pub fn symmetry_test<T: Real>(ctx: &GasContext<'_, T>, cfg: &SymmetryConfig) -> Result<SymmetryTestResult<T>> {
    if cfg.n_x < 4 || cfg.n_x % 2 != 0 {
        return Err(GasError::Config(format!("n_x must be even and at least 4, got {}", cfg.n_x)));
    }
    if !(cfg.alpha >= 0.0 && cfg.alpha < 1.0) {
        return Err(GasError::Config(format!("alpha must lie in [0, 1), got {}", cfg.alpha)));
    }
    let critical_value = normal_quantile(1.0 - cfg.alpha / cfg.n_x as f64)?;
    let points = test_points(ctx, cfg.n_x)?;
    let root_n = count::<T>(ctx.pairs.len()).sqrt();
    let mut pairs = Vec::with_capacity(points.len());
    let mut dropped = Vec::new();
    for x in points {
        match pair_statistic(ctx, cfg, x, root_n) {
            Ok(mut p) => {
                p.exceeds = wide(p.statistic.abs()) >= critical_value;
                pairs.push(p);
            }
            Err(e) => dropped.push((wide(x), e.to_string())),
        }
    }
    if pairs.is_empty() {
        return Err(GasError::NoTestPairs);
    }
    let reject = pairs.iter().any(|p| p.exceeds);
    Ok(SymmetryTestResult { pairs, dropped, critical_value, reject, alpha: cfg.alpha, n_x: cfg.n_x })
}

fn pair_statistic<T: Real>(ctx: &GasContext<'_, T>, cfg: &SymmetryConfig, x: T, root_n: T) -> Result<SymmetryPair<T>> {
    let side = |at: T| -> Result<(T, T, T)> {
        let plan = ctx.plan(at, &cfg.bandwidth)?;
        let est = ctx.estimate_with_plan(at, plan)?;
        let v = if cfg.variance == cfg.bandwidth {
            plan.functionals.v_hat
        } else {
            ctx.plan(at, &cfg.variance)?.functionals.v_hat
        };
        Ok((est.sigma2, est.h, v))
    };
    let (s_pos, h_pos, v_pos) = side(x)?;
    let (s_neg, h_neg, v_neg) = side(-x)?;
    let denom = (v_pos + v_neg).sqrt();
    if !(denom > T::zero()) {
        return Err(GasError::Estimation { x: wide(x), reason: "zero variance functional".into() });
    }
    let statistic = root_n * (h_pos.sqrt() * s_pos - h_neg.sqrt() * s_neg) / denom;
    if !statistic.is_finite() {
        return Err(GasError::Estimation { x: wide(x), reason: "non-finite statistic".into() });
    }
    Ok(SymmetryPair {
        x,
        statistic,
        sigma2_pos: s_pos,
        sigma2_neg: s_neg,
        h_pos,
        h_neg,
        v_pos,
        v_neg,
        exceeds: false,
    })
}
