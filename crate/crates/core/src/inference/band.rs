use super::normal_quantile;
use crate::bandwidth::{BandwidthPlan, GasContext, IntervalWindow, WindowSpec};
use crate::error::{GasError, Result};
use crate::scalar::{count, lit, wide, Real};
use crate::smoothing::lle_fit;

/// Bias term subtracted from the estimate before forming the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BiasCorrection {
    /// No correction.
    None,
    /// `h^2 B / 2`, with `B` the curvature functional of the plan.
    #[default]
    Functional,
    /// `C1 h^2 q''(x)`, the signed leading bias of the local linear smoother
    /// evaluated with the pilot.
    Pilot,
}

impl std::str::FromStr for BiasCorrection {
    type Err = GasError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(BiasCorrection::None),
            "functional" => Ok(BiasCorrection::Functional),
            "pilot" => Ok(BiasCorrection::Pilot),
            _ => Err(GasError::Config(format!("unknown bias correction `{s}`"))),
        }
    }
}

impl std::fmt::Display for BiasCorrection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BiasCorrection::None => "none",
            BiasCorrection::Functional => "functional",
            BiasCorrection::Pilot => "pilot",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandConfig {
    pub alpha: f64,
    pub window: WindowSpec,
    pub bias: BiasCorrection,
    /// Replace the point estimate by its average over the plan interval.
    pub interval_mode: bool,
}

impl Default for BandConfig {
    fn default() -> Self {
        Self { alpha: 0.05, window: WindowSpec::LocalDefault, bias: BiasCorrection::Functional, interval_mode: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint<T = f64> {
    pub x: T,
    pub estimate: T,
    pub bias_correction: T,
    pub lower: T,
    pub upper: T,
    pub half_width: T,
    /// Bandwidth used by the smoother.
    pub h: T,
    pub plan: BandwidthPlan<T>,
}

impl<T: Real> BandPoint<T> {
    pub fn center(&self) -> T {
        self.estimate - self.bias_correction
    }

    pub fn covers(&self, value: T) -> bool {
        self.lower <= value && value <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub x: f64,
    pub reason: String,
}

/// Estimates and pointwise intervals on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VolatilityCurve<T = f64> {
    pub alpha: f64,
    pub z: f64,
    pub bias: BiasCorrection,
    pub interval_mode: bool,
    pub points: Vec<BandPoint<T>>,
    /// Grid points where estimation failed; they are absent from `points`.
    pub failures: Vec<PointFailure>,
}

/// Pointwise `1 - alpha` intervals on `grid`.
pub fn confidence_band<T: Real>(ctx: &GasContext<'_, T>, grid: &[T], cfg: &BandConfig) -> Result<VolatilityCurve<T>> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(GasError::Config(format!("alpha must lie in (0, 1), got {}", cfg.alpha)));
    }
    let z = normal_quantile(1.0 - cfg.alpha / 2.0)?;
    let mut points = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for &x in grid {
        match band_point(ctx, x, cfg, lit(z)) {
            Ok(p) => points.push(p),
            Err(e) => failures.push(PointFailure { x: wide(x), reason: e.to_string() }),
        }
    }
    Ok(VolatilityCurve { alpha: cfg.alpha, z, bias: cfg.bias, interval_mode: cfg.interval_mode, points, failures })
}

fn band_point<T: Real>(ctx: &GasContext<'_, T>, x: T, cfg: &BandConfig, z: T) -> Result<BandPoint<T>> {
    let plan = ctx.plan(x, &cfg.window)?;
    let point = ctx.estimate_with_plan(x, plan)?;
    let h = point.h;
    let estimate = if cfg.interval_mode {
        average_over(ctx, &plan.window, plan.h_hat)?.0
    } else {
        point.sigma2
    };
    let bias_correction = match cfg.bias {
        BiasCorrection::None => T::zero(),
        BiasCorrection::Functional => lit::<T>(0.5) * h * h * plan.functionals.b_hat,
        BiasCorrection::Pilot => ctx.kernel.c1() * h * h * ctx.net.second_derivative(x),
    };
    let half_width = z * (plan.functionals.v_hat / (count::<T>(ctx.pairs.len()) * h)).sqrt();
    let center = estimate - bias_correction;
    Ok(BandPoint {
        x,
        estimate,
        bias_correction,
        lower: center - half_width,
        upper: center + half_width,
        half_width,
        h,
        plan,
    })
}

/// Average of the volatility estimate over the design points of an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalAverage<T = f64> {
    pub value: T,
    /// Interval actually averaged over, after any widening.
    pub window: IntervalWindow<T>,
    pub count: usize,
    pub h: T,
}

fn average_over<T: Real>(ctx: &GasContext<'_, T>, window: &IntervalWindow<T>, h: T) -> Result<(T, usize)> {
    let range = ctx.pairs.window(window.lo(), window.hi());
    let n_in = range.len();
    if n_in == 0 {
        return Err(GasError::ThinWindow { x: wide(window.center), found: 0, needed: 1 });
    }
    let mut sum = T::zero();
    let mut last: Option<(T, T)> = None;
    for &xi in &ctx.pairs.regressor()[range] {
        let v = match last {
            Some((px, pv)) if px == xi => pv,
            _ => lle_fit(ctx.pairs, &ctx.kernel, xi, h)?.value,
        };
        last = Some((xi, v));
        sum += v;
    }
    Ok((sum / count(n_in), n_in))
}

/// Occupancy-weighted average of `sigma2_hat(X_{t-1}; h_I)` over the design
/// points inside `window`, with `h_I` the plug-in bandwidth of that interval.
pub fn interval_averaged_estimate<T: Real>(
    ctx: &GasContext<'_, T>,
    window: &IntervalWindow<T>,
) -> Result<IntervalAverage<T>> {
    let ctx = GasContext { n_star: Some(window.n_star), ..*ctx };
    let plan = ctx.plan(window.center, &WindowSpec::Width(wide(window.width)))?;
    let (value, n_in) = average_over(&ctx, &plan.window, plan.h_hat)?;
    Ok(IntervalAverage { value, window: plan.window, count: n_in, h: plan.h_hat })
}
