use super::functionals::{bandwidth_plan, BandwidthPlan, VNormalization, WindowSpec};
use crate::error::{GasError, Result};
use crate::pilot::{estimate_m4eps, fit_pilot, PilotConfig, PilotFitReport, PilotNetwork};
use crate::scalar::{wide, Real};
use crate::smoothing::{lle_fit, DesignPairs, KernelKind, KernelSpec, ReturnSeries};

/// Settings of the full estimation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct GasConfig {
    pub pilot: PilotConfig,
    pub kernel: KernelKind,
    pub window: WindowSpec,
    pub v_norm: VNormalization,
    /// Evaluation points of the variance functional; `max(50, ceil(n/4))` when unset.
    pub n_star: Option<usize>,
}

impl Default for GasConfig {
    fn default() -> Self {
        Self {
            pilot: PilotConfig::default(),
            kernel: KernelKind::Epanechnikov,
            window: WindowSpec::LocalDefault,
            v_norm: VNormalization::Integrated,
            n_star: None,
        }
    }
}

impl GasConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.pilot.seed = seed;
        self
    }

    pub fn with_window(mut self, window: WindowSpec) -> Self {
        self.window = window;
        self
    }
}

/// Borrowed inputs shared by the functionals and the inference routines.
#[derive(Debug, Clone, Copy)]
pub struct GasContext<'a, T = f64> {
    pub pairs: &'a DesignPairs<T>,
    pub net: &'a PilotNetwork<T>,
    pub m4eps: T,
    pub kernel: KernelSpec<T>,
    pub v_norm: VNormalization,
    pub n_star: Option<usize>,
}

impl<'a, T: Real> GasContext<'a, T> {
    pub fn new(pairs: &'a DesignPairs<T>, net: &'a PilotNetwork<T>, m4eps: T) -> Self {
        Self { pairs, net, m4eps, kernel: KernelSpec::epanechnikov(), v_norm: VNormalization::Integrated, n_star: None }
    }

    pub fn n_star(&self) -> usize {
        self.n_star.unwrap_or_else(|| 50.max(self.pairs.len().div_ceil(4)))
    }

    pub fn plan(&self, x: T, spec: &WindowSpec) -> Result<BandwidthPlan<T>> {
        bandwidth_plan(self, x, spec)
    }

    /// Local linear estimate at `x` with the plug-in bandwidth of `spec`.
    pub fn estimate(&self, x: T, spec: &WindowSpec) -> Result<PointEstimate<T>> {
        let plan = self.plan(x, spec)?;
        self.estimate_with_plan(x, plan)
    }

    pub fn estimate_with_plan(&self, x: T, plan: BandwidthPlan<T>) -> Result<PointEstimate<T>> {
        let fit = lle_fit(self.pairs, &self.kernel, x, plan.h_hat)?;
        if !fit.value.is_finite() {
            return Err(GasError::Estimation { x: wide(x), reason: "non-finite local linear estimate".into() });
        }
        Ok(PointEstimate { x, sigma2: fit.value, h: fit.h, count: fit.count, inflations: fit.inflations, plan })
    }
}

/// Volatility estimate at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimate<T = f64> {
    pub x: T,
    pub sigma2: T,
    /// Bandwidth used by the smoother, after any sparse-window inflation.
    pub h: T,
    pub count: usize,
    pub inflations: u32,
    pub plan: BandwidthPlan<T>,
}

/// Fitted pilot plus design, ready to produce plans and estimates.
#[derive(Debug, Clone)]
pub struct GasEstimator<T = f64> {
    pub pairs: DesignPairs<T>,
    pub net: PilotNetwork<T>,
    pub m4eps: T,
    pub report: Option<PilotFitReport>,
    pub config: GasConfig,
}

impl<T: Real> GasEstimator<T> {
    /// Builds the design from `series` and fits the pilot network.
    pub fn fit(series: &ReturnSeries<T>, config: &GasConfig) -> Result<Self> {
        Self::fit_pairs(series.design_pairs(), config)
    }

    pub fn fit_pairs(pairs: DesignPairs<T>, config: &GasConfig) -> Result<Self> {
        let (net, report) = fit_pilot(&pairs, &config.pilot)?;
        let m4eps = estimate_m4eps(&pairs, &net)?;
        let mut est = Self::from_parts(pairs, net, m4eps, config)?;
        est.report = Some(report);
        Ok(est)
    }

    /// Uses a given pilot instead of fitting one.
    pub fn from_parts(pairs: DesignPairs<T>, net: PilotNetwork<T>, m4eps: T, config: &GasConfig) -> Result<Self> {
        if !(m4eps > T::one()) {
            return Err(GasError::InconsistentPilot { m4eps: wide(m4eps) });
        }
        Ok(Self { pairs, net, m4eps, report: None, config: config.clone() })
    }

    pub fn context(&self) -> GasContext<'_, T> {
        GasContext {
            pairs: &self.pairs,
            net: &self.net,
            m4eps: self.m4eps,
            kernel: KernelSpec::new(self.config.kernel),
            v_norm: self.config.v_norm,
            n_star: self.config.n_star,
        }
    }

    pub fn plan(&self, x: T) -> Result<BandwidthPlan<T>> {
        self.context().plan(x, &self.config.window)
    }

    pub fn estimate(&self, x: T) -> Result<PointEstimate<T>> {
        self.context().estimate(x, &self.config.window)
    }

    /// Estimates on a grid; failures are kept per point.
    pub fn curve(&self, grid: &[T]) -> Vec<Result<PointEstimate<T>>> {
        let ctx = self.context();
        grid.iter().map(|&x| ctx.estimate(x, &self.config.window)).collect()
    }
}
