use super::GasContext;
use crate::error::{GasError, Result};
use crate::pilot::PilotNetwork;
use crate::scalar::{count, lit, wide, Real};
use crate::smoothing::{DesignPairs, KernelSpec, MIN_SERIES_LEN};

/// Design points an interval must hold before the functionals are formed.
pub const MIN_FUNCTIONAL_POINTS: usize = 10;
/// Factor applied to a thin interval's width.
pub const WIDENING_FACTOR: f64 = 1.5;
pub const MAX_WIDENINGS: u32 = 10;
/// Curvature functionals below this are treated as zero.
pub const FLAT_CURVATURE_TOL: f64 = 1e-10;
const MIN_N_STAR: usize = 10;
const GLOBAL_LOWER_Q: f64 = 0.01;
const GLOBAL_UPPER_Q: f64 = 0.99;
const LOCAL_WIDTH_FACTOR: f64 = 1.5;

/// Interval `[center - width/2, center + width/2]` with `n_star` evaluation
/// points for the variance functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalWindow<T = f64> {
    pub center: T,
    pub width: T,
    pub n_star: usize,
}

impl<T: Real> IntervalWindow<T> {
    pub fn new(center: T, width: T, n_star: usize) -> Result<Self> {
        if !(width > T::zero()) || !width.is_finite() || !center.is_finite() {
            return Err(GasError::Config(format!("interval width must be positive, got {width}")));
        }
        if n_star < MIN_N_STAR {
            return Err(GasError::Config(format!("n* = {n_star} below {MIN_N_STAR}")));
        }
        Ok(Self { center, width, n_star })
    }

    pub fn lo(&self) -> T {
        self.center - self.width / lit(2.0)
    }

    pub fn hi(&self) -> T {
        self.center + self.width / lit(2.0)
    }

    /// Midpoints of `n_star` equal sub-intervals.
    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        let step = self.width / count(self.n_star);
        let lo = self.lo();
        (0..self.n_star).map(move |i| lo + (count::<T>(i) + lit(0.5)) * step)
    }

    fn widened(&self) -> Self {
        Self { width: self.width * lit(WIDENING_FACTOR), ..*self }
    }
}

/// How the variance functional's average over `z_i` is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VNormalization {
    /// `(a / n*) sum_i V(z_i)`, a Riemann sum for the integral of `V` over
    /// the interval. Consistent with the occupancy denominator.
    #[default]
    Integrated,
    /// `(1 / n*) sum_i V(z_i)`, the plain average.
    AsPrinted,
}

/// Interval choice for a bandwidth plan.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WindowSpec {
    /// Interval spanning the 1% to 99% regressor quantiles, shared by all points.
    Global,
    /// Interval of the given width centred at the evaluation point.
    Width(f64),
    /// Width `1.5 * sd * n^{-1/5}` centred at the evaluation point.
    #[default]
    LocalDefault,
}

impl std::fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowSpec::Global => f.write_str("global"),
            WindowSpec::Width(a) => write!(f, "{a}"),
            WindowSpec::LocalDefault => f.write_str("local"),
        }
    }
}

impl std::str::FromStr for WindowSpec {
    type Err = GasError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(WindowSpec::Global),
            "local" => Ok(WindowSpec::LocalDefault),
            other => match other.parse::<f64>() {
                Ok(a) if a > 0.0 && a.is_finite() => Ok(WindowSpec::Width(a)),
                _ => Err(GasError::Config(format!("window must be `global`, `local` or a positive width, got `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalEstimates<T = f64> {
    pub b_hat: T,
    pub v_hat: T,
    pub m4eps: T,
    /// Fraction of design points inside the interval.
    pub occupancy: T,
    /// Number of design points inside the interval.
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanFlags {
    /// Curvature was numerically zero and `h` was capped at a quarter of the range.
    pub flat_capped: bool,
    /// Times the interval was widened for lack of points.
    pub widenings: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthPlan<T = f64> {
    pub window: IntervalWindow<T>,
    pub functionals: FunctionalEstimates<T>,
    pub h_hat: T,
    /// Design size entering the plug-in formula.
    pub n: usize,
    pub regime: Regime,
    pub flags: PlanFlags,
}

impl<T: Real> BandwidthPlan<T> {
    /// `h^5 * 4 n B / V - 1`; zero up to rounding unless the plan was capped.
    pub fn identity_residual(&self) -> T {
        let f = &self.functionals;
        self.h_hat.powi(5) * lit(4.0) * count(self.n) * f.b_hat / f.v_hat - T::one()
    }
}

fn check_window<T: Real>(pairs: &DesignPairs<T>, window: &IntervalWindow<T>) -> Result<usize> {
    let found = pairs.count_in(window.lo(), window.hi());
    if found < MIN_FUNCTIONAL_POINTS {
        return Err(GasError::ThinWindow { x: wide(window.center), found, needed: MIN_FUNCTIONAL_POINTS });
    }
    Ok(found)
}

/// Curvature functional `C1^2 * mean_{X in I} q''(X)^2`.
pub fn estimate_b_functional<T: Real>(
    pairs: &DesignPairs<T>,
    net: &PilotNetwork<T>,
    window: &IntervalWindow<T>,
    kernel: &KernelSpec<T>,
) -> Result<T> {
    let found = check_window(pairs, window)?;
    let range = pairs.window(window.lo(), window.hi());
    let sum = pairs.regressor()[range].iter().fold(T::zero(), |s, &x| {
        let q2 = net.second_derivative(x);
        s + q2 * q2
    });
    let c1 = kernel.c1();
    Ok(c1 * c1 * sum / count(found))
}

/// Variance functional `C2 * [norm * sum_i q(z_i)^2 (m4 - 1)] / occupancy`.
pub fn estimate_v_functional<T: Real>(
    pairs: &DesignPairs<T>,
    net: &PilotNetwork<T>,
    m4eps: T,
    window: &IntervalWindow<T>,
    kernel: &KernelSpec<T>,
    norm: VNormalization,
) -> Result<T> {
    if !(m4eps > T::one()) {
        return Err(GasError::InconsistentPilot { m4eps: wide(m4eps) });
    }
    let found = check_window(pairs, window)?;
    let sum = window.points().fold(T::zero(), |s, z| {
        let q = net.eval(z);
        s + q * q
    });
    let mut avg = sum * (m4eps - T::one()) / count(window.n_star);
    if norm == VNormalization::Integrated {
        avg *= window.width;
    }
    let occupancy = count::<T>(found) / count(pairs.len());
    Ok(kernel.c2() * avg / occupancy)
}

/// `(V / (4 n B))^{1/5}`.
pub fn plugin_bandwidth<T: Real>(b_hat: T, v_hat: T, n: usize) -> Result<T> {
    if n < MIN_SERIES_LEN {
        return Err(GasError::Config(format!("plug-in bandwidth needs n >= {MIN_SERIES_LEN}, got {n}")));
    }
    if !(v_hat >= T::zero()) || !v_hat.is_finite() {
        return Err(GasError::InvalidInput(format!("variance functional {v_hat} is not a finite non-negative value")));
    }
    if !(b_hat > T::zero()) || !b_hat.is_finite() {
        return Err(GasError::FlatCurvature);
    }
    Ok((v_hat / (lit::<T>(4.0) * count(n) * b_hat)).powf(lit(0.2)))
}

/// Interval between the 1% and 99% regressor quantiles.
pub fn global_window<T: Real>(pairs: &DesignPairs<T>, n_star: usize) -> Result<IntervalWindow<T>> {
    let (mut lo, mut hi) = (pairs.regressor_quantile(GLOBAL_LOWER_Q), pairs.regressor_quantile(GLOBAL_UPPER_Q));
    if !(hi > lo) {
        lo = pairs.min_regressor();
        hi = pairs.max_regressor();
    }
    if !(hi > lo) {
        return Err(GasError::InvalidInput("regressor has no spread".into()));
    }
    IntervalWindow::new((lo + hi) / lit(2.0), hi - lo, n_star)
}

/// Default local width `1.5 * sd * n^{-1/5}`.
pub fn local_default_width<T: Real>(pairs: &DesignPairs<T>) -> T {
    lit::<T>(LOCAL_WIDTH_FACTOR) * pairs.regressor_std() * count::<T>(pairs.len()).powf(lit(-0.2))
}

/// Window, functionals and plug-in bandwidth at `x`.
pub fn bandwidth_plan<T: Real>(ctx: &GasContext<'_, T>, x: T, spec: &WindowSpec) -> Result<BandwidthPlan<T>> {
    let pairs = ctx.pairs;
    let n = pairs.len();
    let n_star = ctx.n_star();
    let global = global_window(pairs, n_star)?;
    let mut window = match *spec {
        WindowSpec::Global => global,
        WindowSpec::Width(a) => IntervalWindow::new(x, lit(a), n_star)?,
        WindowSpec::LocalDefault => IntervalWindow::new(x, local_default_width(pairs), n_star)?,
    };
    let mut widenings = 0;
    loop {
        let found = pairs.count_in(window.lo(), window.hi());
        if found >= MIN_FUNCTIONAL_POINTS {
            break;
        }
        if widenings == MAX_WIDENINGS {
            return Err(GasError::ThinWindow { x: wide(x), found, needed: MIN_FUNCTIONAL_POINTS });
        }
        window = window.widened();
        widenings += 1;
    }
    let b_hat = estimate_b_functional(pairs, ctx.net, &window, &ctx.kernel)?;
    let v_hat = estimate_v_functional(pairs, ctx.net, ctx.m4eps, &window, &ctx.kernel, ctx.v_norm)?;
    if v_hat == T::zero() {
        return Err(GasError::DegeneratePilot);
    }
    let found = pairs.count_in(window.lo(), window.hi());
    let functionals = FunctionalEstimates {
        b_hat,
        v_hat,
        m4eps: ctx.m4eps,
        occupancy: count::<T>(found) / count(n),
        count: found,
    };
    let regime = if window.lo() <= global.lo() && window.hi() >= global.hi() {
        Regime::Global
    } else {
        Regime::Local
    };
    let mut flags = PlanFlags { flat_capped: false, widenings };
    let h_hat = if b_hat < lit(FLAT_CURVATURE_TOL) {
        flags.flat_capped = true;
        (pairs.max_regressor() - pairs.min_regressor()) / lit(4.0)
    } else {
        plugin_bandwidth(b_hat, v_hat, n)?
    };
    Ok(BandwidthPlan { window, functionals, h_hat, n, regime, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pilot::HiddenNode;

    fn grid_pairs(n: usize) -> DesignPairs<f64> {
        let xs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let ys = xs.iter().map(|x| 0.1 + 0.5 * x * x).collect();
        DesignPairs::new(xs, ys).unwrap()
    }

    fn constant_net(c: f64) -> PilotNetwork<f64> {
        PilotNetwork::new(c, vec![HiddenNode { c: 0.0, a: 1.0, b: 0.0 }], 1e3).unwrap()
    }

    #[test]
    fn window_points_are_inside_and_even() {
        let w = IntervalWindow::new(0.5, 0.2, 10).unwrap();
        let z: Vec<f64> = w.points().collect();
        assert_eq!(z.len(), 10);
        assert!(z.iter().all(|&v| v > w.lo() && v < w.hi()));
        for p in z.windows(2) {
            assert!((p[1] - p[0] - 0.02).abs() < 1e-12);
        }
        assert!(IntervalWindow::new(0.0, 0.0, 10).is_err());
        assert!(IntervalWindow::new(0.0, 1.0, 9).is_err());
    }

    #[test]
    fn plugin_examples() {
        let h = plugin_bandwidth(0.1, 0.6, 1000).unwrap();
        assert!((h - 0.0015f64.powf(0.2)).abs() < 1e-15);
        assert!((h - 0.272_406_992_742_666).abs() < 1e-12);
        assert_eq!(plugin_bandwidth(0.1, 0.0, 1000).unwrap(), 0.0);
        let h2 = plugin_bandwidth(0.1, 0.6, 2000).unwrap();
        assert!((h2 / h - 2f64.powf(-0.2)).abs() < 1e-12);
        assert!(matches!(plugin_bandwidth(0.0, 0.6, 1000), Err(GasError::FlatCurvature)));
        assert!(plugin_bandwidth(0.1, 0.6, 10).is_err());
    }

    #[test]
    fn b_functional_is_zero_for_affine_pilot() {
        let pairs = grid_pairs(200);
        let w = IntervalWindow::new(0.0, 1.0, 50).unwrap();
        let k = KernelSpec::epanechnikov();
        assert_eq!(estimate_b_functional(&pairs, &constant_net(0.3), &w, &k).unwrap(), 0.0);
    }

    #[test]
    fn b_functional_constant_curvature() {
        // q''(x) = 2 everywhere would give 0.01 * 4. A softplus-like pair of
        // nodes is not exactly quadratic, so check the arithmetic through the
        // average of q''^2 computed independently.
        let pairs = grid_pairs(101);
        let net = PilotNetwork::new(0.0, vec![HiddenNode { c: 4.0, a: 1.5, b: 0.0 }], 1e3).unwrap();
        let w = IntervalWindow::new(0.0, 1.0, 50).unwrap();
        let k = KernelSpec::epanechnikov();
        let b = estimate_b_functional(&pairs, &net, &w, &k).unwrap();
        let xs: Vec<f64> = pairs.regressor().iter().copied().filter(|x| x.abs() <= 0.5).collect();
        let oracle = 0.01 * xs.iter().map(|&x| {
            let s = 1.0 / (1.0 + (-1.5 * x).exp());
            let q2 = 4.0 * 2.25 * s * (1.0 - s) * (1.0 - 2.0 * s);
            q2 * q2
        }).sum::<f64>() / xs.len() as f64;
        assert!((b - oracle).abs() < 1e-14);
        assert!(b >= 0.0);
    }

    #[test]
    fn v_functional_constant_pilot() {
        // 100 of 200 points inside, q = 1, m4 = 3: 0.6 * 2 / 0.5 = 2.4 per unit width
        let xs: Vec<f64> = (0..200).map(|i| if i < 100 { 0.1 + i as f64 * 1e-3 } else { 5.0 + i as f64 }).collect();
        let ys = vec![1.0; 200];
        let pairs = DesignPairs::new(xs, ys).unwrap();
        let k = KernelSpec::epanechnikov();
        let w = IntervalWindow::new(0.15, 1.0, 20).unwrap();
        let printed = estimate_v_functional(&pairs, &constant_net(1.0), 3.0, &w, &k, VNormalization::AsPrinted).unwrap();
        assert!((printed - 2.4).abs() < 1e-12);
        let integ = estimate_v_functional(&pairs, &constant_net(1.0), 3.0, &w, &k, VNormalization::Integrated).unwrap();
        assert!((integ - 2.4).abs() < 1e-12);
        let w2 = IntervalWindow::new(0.15, 0.5, 20).unwrap();
        let integ2 = estimate_v_functional(&pairs, &constant_net(1.0), 3.0, &w2, &k, VNormalization::Integrated).unwrap();
        assert!((integ2 - 1.2).abs() < 1e-12);
    }

    #[test]
    fn v_functional_guards() {
        let pairs = grid_pairs(200);
        let k = KernelSpec::epanechnikov();
        let w = IntervalWindow::new(0.0, 1.0, 20).unwrap();
        assert!(matches!(
            estimate_v_functional(&pairs, &constant_net(1.0), 1.0, &w, &k, VNormalization::Integrated),
            Err(GasError::InconsistentPilot { .. })
        ));
        let thin = IntervalWindow::new(0.0, 0.01, 20).unwrap();
        assert!(matches!(
            estimate_v_functional(&pairs, &constant_net(1.0), 3.0, &thin, &k, VNormalization::Integrated),
            Err(GasError::ThinWindow { .. })
        ));
    }

    #[test]
    fn window_spec_parsing() {
        assert_eq!("global".parse::<WindowSpec>().unwrap(), WindowSpec::Global);
        assert_eq!("local".parse::<WindowSpec>().unwrap(), WindowSpec::LocalDefault);
        assert_eq!("0.089".parse::<WindowSpec>().unwrap(), WindowSpec::Width(0.089));
        assert!("-1".parse::<WindowSpec>().is_err());
        assert!("wide".parse::<WindowSpec>().is_err());
    }
}
