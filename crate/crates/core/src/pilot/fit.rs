use rand::Rng;

use super::network::{sigmoid, HiddenNode, PilotNetwork};
use crate::error::{GasError, Result};
use crate::rng::stream_rng;
use crate::scalar::{count, lit, wide, Real};
use crate::smoothing::DesignPairs;

/// Default bound on `sum_k |c_k|`.
pub const DEFAULT_WEIGHT_BUDGET: f64 = 1e3;

const INIT_HALF_RANGE: f64 = 0.7;
const LAMBDA_START: f64 = 1e-3;
const LAMBDA_MAX: f64 = 1e10;
const REL_IMPROVEMENT_TOL: f64 = 1e-10;
/// A run whose accepted steps improve by less than this for
/// `STALL_STEPS` iterations in a row is treated as converged.
const STALL_TOL: f64 = 1e-6;
const STALL_STEPS: usize = 10;
/// Default bound on input weights in standardized units.
pub const DEFAULT_INPUT_WEIGHT_BOUND: f64 = 2.5;

/// Input weight `A tanh(alpha)` and its derivative in `alpha`.
#[inline]
fn input_weight<T: Real>(alpha: T, bound: T) -> (T, T) {
    let t = alpha.tanh();
    (bound * t, bound * (T::one() - t * t))
}

/// Settings for [`fit_pilot`].
#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    /// Hidden-node counts compared by BIC.
    pub d_candidates: Vec<usize>,
    /// Random initializations per candidate.
    pub restarts: usize,
    pub seed: u64,
    pub weight_budget: f64,
    /// Bound `A` on input weights of the standardized regressor, `|a_k| < A`.
    pub input_weight_bound: f64,
    /// Levenberg-Marquardt iteration cap per restart.
    pub max_iter: usize,
}

impl Default for PilotConfig {
    fn default() -> Self {
        Self {
            d_candidates: vec![1, 2, 3, 4, 5],
            restarts: 3,
            seed: 0,
            weight_budget: DEFAULT_WEIGHT_BUDGET,
            input_weight_bound: DEFAULT_INPUT_WEIGHT_BOUND,
            max_iter: 300,
        }
    }
}

impl PilotConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.d_candidates.is_empty() || self.d_candidates.contains(&0) {
            return Err(GasError::Config("hidden-node candidates must be non-empty and positive".into()));
        }
        if self.restarts == 0 {
            return Err(GasError::Config("at least one restart is required".into()));
        }
        if !(self.input_weight_bound > INIT_HALF_RANGE) {
            return Err(GasError::Config(format!("input weight bound must exceed {INIT_HALF_RANGE}")));
        }
        if !(self.weight_budget > 0.0) {
            return Err(GasError::Config("weight budget must be positive".into()));
        }
        Ok(())
    }
}

/// Diagnostics of a pilot fit.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotFitReport {
    pub chosen_d: usize,
    /// `(d, bic)` for every candidate, in candidate order.
    pub bic: Vec<(usize, f64)>,
    /// `(d, rss)` of the best restart for every candidate.
    pub rss_by_d: Vec<(usize, f64)>,
    /// Residual sum of squares of the returned network, original units.
    pub rss: f64,
    pub restarts: usize,
    pub converged: bool,
    pub budget_rescaled: bool,
    /// Fourth-moment estimate of the innovations built on the returned net.
    pub m4eps: f64,
}

struct Candidate<T> {
    net: PilotNetwork<T>,
    rss: T,
    converged: bool,
    rescaled: bool,
}

/// Fits the pilot network to `(X_{t-1}, X_t^2)`.
///
/// For each candidate size the best of `restarts` Levenberg-Marquardt runs
/// is kept; the size minimizing `n log(RSS/n) + (3d+1) log n` is returned.
/// Restart `r` of size `d` always draws from the same generator stream, so
/// adding restarts never makes the per-size optimum worse.
pub fn fit_pilot<T: Real>(
    pairs: &DesignPairs<T>,
    cfg: &PilotConfig,
) -> Result<(PilotNetwork<T>, PilotFitReport)> {
    cfg.validate()?;
    let n = pairs.len();
    if n < 2 {
        return Err(GasError::InvalidInput("pilot fit needs at least two design pairs".into()));
    }
    let xs = pairs.regressor();
    let ys = pairs.response();
    let nn: T = count(n);

    let mean = xs.iter().fold(T::zero(), |a, &v| a + v) / nn;
    let var = xs.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean)) / nn;
    let scale = if var > T::zero() { var.sqrt() } else { T::one() };
    let ymean = ys.iter().fold(T::zero(), |a, &v| a + v) / nn;
    let yscale = if ymean > T::zero() { ymean } else { T::one() };
    let u: Vec<T> = xs.iter().map(|&v| (v - mean) / scale).collect();
    let yz: Vec<T> = ys.iter().map(|&v| v / yscale).collect();
    let u_lo = pairs.regressor_quantile(0.01);
    let u_hi = pairs.regressor_quantile(0.99);
    let (u_lo, u_hi) = (wide((u_lo - mean) / scale), wide((u_hi - mean) / scale));

    let mut per_d: Vec<(usize, Candidate<T>)> = Vec::with_capacity(cfg.d_candidates.len());
    for &d in &cfg.d_candidates {
        let mut best: Option<Candidate<T>> = None;
        for r in 0..cfg.restarts {
            let mut rng = stream_rng(cfg.seed, (d as u64) << 32 | r as u64);
            let mut theta = Vec::with_capacity(3 * d + 1);
            theta.push(T::one());
            let mut cs = Vec::with_capacity(d);
            let mut as_ = Vec::with_capacity(d);
            let mut bs = Vec::with_capacity(d);
            for _ in 0..d {
                cs.push(lit::<T>(rng.random_range(-INIT_HALF_RANGE..INIT_HALF_RANGE)));
                let a0: f64 = rng.random_range(-INIT_HALF_RANGE..INIT_HALF_RANGE);
                as_.push(lit::<T>((a0 / cfg.input_weight_bound).atanh()));
                let centre = if u_hi > u_lo { rng.random_range(u_lo..u_hi) } else { 0.0 };
                bs.push(lit::<T>(centre));
            }
            theta.extend(cs);
            theta.extend(as_);
            theta.extend(bs);
            let bound: T = lit(cfg.input_weight_bound);
            let (theta, _, converged) = levenberg_marquardt(&u, &yz, theta, d, bound, cfg.max_iter);
            let mut net = to_network(&theta, d, bound, mean, scale, yscale, lit(cfg.weight_budget));
            let rescaled = net.enforce_budget();
            let rss = rss_of(&net, xs, ys);
            let better = match &best {
                None => true,
                Some(b) => rss < b.rss,
            };
            if better && rss.is_finite() {
                best = Some(Candidate { net, rss, converged, rescaled });
            }
        }
        let best = best.ok_or_else(|| GasError::Estimation {
            x: f64::NAN,
            reason: format!("pilot fit with {d} nodes produced no finite network"),
        })?;
        per_d.push((d, best));
    }

    let ln_n = (n as f64).ln();
    let bic: Vec<(usize, f64)> = per_d
        .iter()
        .map(|(d, c)| {
            let rss = wide(c.rss).max(f64::MIN_POSITIVE);
            (*d, n as f64 * (rss / n as f64).ln() + (3 * d + 1) as f64 * ln_n)
        })
        .collect();
    let chosen = bic
        .iter()
        .enumerate()
        .fold(0, |best, (i, (_, b))| if *b < bic[best].1 { i } else { best });

    let any_converged = per_d.iter().any(|(_, c)| c.converged);
    let rss_by_d = per_d.iter().map(|(d, c)| (*d, wide(c.rss))).collect();
    let (chosen_d, cand) = per_d.swap_remove(chosen);
    if !any_converged {
        return Err(GasError::PilotNotConverged {
            rss: wide(cand.rss),
            network: Box::new(cand.net.to_f64()),
        });
    }
    let m4eps = estimate_m4eps(pairs, &cand.net).map(wide).unwrap_or(f64::NAN);
    let report = PilotFitReport {
        chosen_d,
        bic,
        rss_by_d,
        rss: wide(cand.rss),
        restarts: cfg.restarts,
        converged: cand.converged,
        budget_rescaled: cand.rescaled,
        m4eps,
    };
    Ok((cand.net, report))
}

/// `sum_t X_t^4 / sum_t q(X_{t-1})^2` over the design pairs.
pub fn estimate_m4eps<T: Real>(pairs: &DesignPairs<T>, net: &PilotNetwork<T>) -> Result<T> {
    let (num, den) = pairs.iter().fold((T::zero(), T::zero()), |(n, d), (x, y)| {
        let q = net.eval(x);
        (n + y * y, d + q * q)
    });
    if !(den > T::zero()) {
        return Err(GasError::DegeneratePilot);
    }
    Ok(num / den)
}

fn rss_of<T: Real>(net: &PilotNetwork<T>, xs: &[T], ys: &[T]) -> T {
    xs.iter().zip(ys).fold(T::zero(), |s, (&x, &y)| {
        let r = y - net.eval(x);
        s + r * r
    })
}

fn to_network<T: Real>(
    theta: &[T],
    d: usize,
    bound: T,
    mean: T,
    scale: T,
    yscale: T,
    budget: T,
) -> PilotNetwork<T> {
    // q(x) = ys * [b0 + sum c psi(a (x - m)/s + b)]
    let nodes = (0..d)
        .map(|k| {
            let (c, a, b) = (theta[1 + k], input_weight(theta[1 + d + k], bound).0, theta[1 + 2 * d + k]);
            HiddenNode { c: c * yscale, a: a / scale, b: b - a * mean / scale }
        })
        .collect();
    PilotNetwork { bias: theta[0] * yscale, nodes, input_mean: mean, input_scale: scale, weight_budget: budget }
}

/// Parameter layout `[b0, c_1..c_d, alpha_1..alpha_d, b_1..b_d]` with
/// `a_k = A tanh(alpha_k)`.
fn residuals<T: Real>(u: &[T], y: &[T], theta: &[T], d: usize, bound: T) -> T {
    u.iter().zip(y).fold(T::zero(), |s, (&x, &t)| {
        let mut q = theta[0];
        for k in 0..d {
            q += theta[1 + k] * sigmoid(input_weight(theta[1 + d + k], bound).0 * x + theta[1 + 2 * d + k]);
        }
        let r = t - q;
        s + r * r
    })
}

fn normal_equations<T: Real>(u: &[T], y: &[T], theta: &[T], d: usize, bound: T) -> (Vec<T>, Vec<T>, T) {
    let p = 3 * d + 1;
    let mut jtj = vec![T::zero(); p * p];
    let mut jtr = vec![T::zero(); p];
    let mut row = vec![T::zero(); p];
    let mut rss = T::zero();
    for (&x, &t) in u.iter().zip(y) {
        let mut q = theta[0];
        row[0] = T::one();
        for k in 0..d {
            let c = theta[1 + k];
            let (a, da) = input_weight(theta[1 + d + k], bound);
            let s = sigmoid(a * x + theta[1 + 2 * d + k]);
            let ds = c * s * (T::one() - s);
            q += c * s;
            row[1 + k] = s;
            row[1 + d + k] = ds * x * da;
            row[1 + 2 * d + k] = ds;
        }
        let r = t - q;
        rss += r * r;
        for i in 0..p {
            let ri = row[i];
            jtr[i] += ri * r;
            for j in i..p {
                jtj[i * p + j] += ri * row[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            jtj[i * p + j] = jtj[j * p + i];
        }
    }
    (jtj, jtr, rss)
}

/// Solves `A x = b` for symmetric positive definite `A` (row-major, `p x p`).
fn cholesky_solve<T: Real>(a: &[T], b: &[T], p: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut s = a[i * p + j];
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if !(s > T::zero()) {
                    return None;
                }
                l[i * p + i] = s.sqrt();
            } else {
                l[i * p + j] = s / l[j * p + j];
            }
        }
    }
    let mut z = vec![T::zero(); p];
    for i in 0..p {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * p + k] * z[k];
        }
        z[i] = s / l[i * p + i];
    }
    let mut x = vec![T::zero(); p];
    for i in (0..p).rev() {
        let mut s = z[i];
        for k in i + 1..p {
            s -= l[k * p + i] * x[k];
        }
        x[i] = s / l[i * p + i];
    }
    Some(x)
}

/// Returns `(theta, rss, converged)`.
fn levenberg_marquardt<T: Real>(
    u: &[T],
    y: &[T],
    mut theta: Vec<T>,
    d: usize,
    bound: T,
    max_iter: usize,
) -> (Vec<T>, T, bool) {
    let p = 3 * d + 1;
    let mut lambda: T = lit(LAMBDA_START);
    let (mut jtj, mut jtr, mut rss) = normal_equations(u, y, &theta, d, bound);
    if !rss.is_finite() {
        return (theta, rss, false);
    }
    let tiny: T = lit(1e-12);
    let mut stalled = 0;
    for _ in 0..max_iter {
        let mut accepted = false;
        while lambda <= lit(LAMBDA_MAX) {
            let mut a = jtj.clone();
            for i in 0..p {
                a[i * p + i] += lambda * jtj[i * p + i].max(tiny);
            }
            let Some(step) = cholesky_solve(&a, &jtr, p) else {
                lambda *= lit(4.0);
                continue;
            };
            let trial: Vec<T> = theta.iter().zip(&step).map(|(&t, &s)| t + s).collect();
            let trial_rss = residuals(u, y, &trial, d, bound);
            if trial_rss.is_finite() && trial_rss < rss {
                let improvement = (rss - trial_rss) / rss.max(T::min_positive_value());
                theta = trial;
                lambda = (lambda / lit(3.0)).max(lit(1e-12));
                let (a2, b2, r2) = normal_equations(u, y, &theta, d, bound);
                jtj = a2;
                jtr = b2;
                rss = r2;
                accepted = true;
                if improvement < lit(REL_IMPROVEMENT_TOL) {
                    return (theta, rss, true);
                }
                stalled = if improvement < lit(STALL_TOL) { stalled + 1 } else { 0 };
                if stalled == STALL_STEPS {
                    return (theta, rss, true);
                }
                break;
            }
            lambda *= lit(4.0);
        }
        if !accepted {
            // no descent direction at any damping: stationary point
            return (theta, rss, true);
        }
    }
    (theta, rss, false)
}
