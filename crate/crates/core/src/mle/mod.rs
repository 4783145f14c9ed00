//! Gaussian quasi-maximum likelihood for GARCH(1,1).
//!
//! The log-likelihood `sum_t -0.5 [ln(2 pi s_t) + X_t^2 / s_t]` with
//! `s_t = a0 + a1 X_{t-1}^2 + b s_{t-1}` and `s_1` the sample variance is
//! maximized over an unconstrained parameterization
//! `a0 = exp(t0)`, `(a1, b) = S (e^{t1}, e^{t2}) / (1 + e^{t1} + e^{t2})`
//! with `S = 1 - 1e-6`, so every candidate is positive and stationary.

mod nelder_mead;

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

pub use nelder_mead::{nelder_mead, SimplexOptions, SimplexResult};

use crate::error::{GasError, Result};
use crate::garch_theory::GarchParams;
use crate::io::{fmt_num, write_table};
use crate::rng::stream_rng;
use crate::smoothing::ReturnSeries;

pub const MIN_MLE_LEN: usize = 100;
const SIMPLEX_MASS: f64 = 1.0 - 1e-6;
const START_PERSISTENCE: (f64, f64) = (0.1, 0.8);
const PERTURBATION_SD: f64 = 0.5;
const MIN_START_WEIGHT: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct MleConfig {
    /// Number of starts: the base start plus perturbed copies.
    pub restarts: usize,
    pub seed: u64,
    pub simplex: SimplexOptions,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self { restarts: 5, seed: 0, simplex: SimplexOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub params: GarchParams<f64>,
    pub loglik: f64,
    pub converged: bool,
    /// Simplex iterations of the winning run.
    pub iterations: usize,
    pub fitted_sigma2: Vec<f64>,
    pub start: GarchParams<f64>,
    /// Best log-likelihood after each iteration of the winning run.
    pub trace: Vec<f64>,
}

fn to_params(theta: &[f64]) -> Option<GarchParams<f64>> {
    let (e1, e2) = (theta[1].exp(), theta[2].exp());
    let s = 1.0 + e1 + e2;
    let (a1, b) = if s.is_finite() {
        (SIMPLEX_MASS * e1 / s, SIMPLEX_MASS * e2 / s)
    } else if e1 >= e2 {
        (SIMPLEX_MASS, 0.0)
    } else {
        (0.0, SIMPLEX_MASS)
    };
    GarchParams::new(theta[0].exp(), a1, b).ok()
}

fn to_theta(p: &GarchParams<f64>) -> Vec<f64> {
    let a1 = p.alpha1().max(MIN_START_WEIGHT);
    let b = p.beta().max(MIN_START_WEIGHT);
    let rest = (SIMPLEX_MASS - a1 - b).max(MIN_START_WEIGHT);
    vec![p.alpha0().ln(), (a1 / rest).ln(), (b / rest).ln()]
}

/// Conditional variance path `s_t` and the Gaussian log-likelihood.
pub fn garch_loglik(x: &[f64], params: &GarchParams<f64>, s1: f64) -> (f64, Vec<f64>) {
    let mut s = Vec::with_capacity(x.len());
    let mut ll = 0.0;
    let mut prev = s1;
    for (t, &xt) in x.iter().enumerate() {
        let st = if t == 0 {
            s1
        } else {
            params.alpha0() + params.alpha1() * x[t - 1] * x[t - 1] + params.beta() * prev
        };
        ll -= 0.5 * ((2.0 * PI * st).ln() + xt * xt / st);
        s.push(st);
        prev = st;
    }
    (ll, s)
}

fn loglik_only(x: &[f64], params: &GarchParams<f64>, s1: f64) -> f64 {
    let mut ll = 0.0;
    let mut prev = s1;
    let mut lag = 0.0;
    for (t, &xt) in x.iter().enumerate() {
        let st = if t == 0 { s1 } else { params.alpha0() + params.alpha1() * lag + params.beta() * prev };
        ll -= 0.5 * ((2.0 * PI * st).ln() + xt * xt / st);
        prev = st;
        lag = xt * xt;
    }
    ll
}

/// Fits GARCH(1,1) by Gaussian quasi-maximum likelihood.
pub fn fit_garch_mle(series: &ReturnSeries<f64>, start: Option<GarchParams<f64>>, seed: u64) -> Result<MleFit> {
    fit_garch_mle_with(series, start, &MleConfig { seed, ..MleConfig::default() })
}

pub fn fit_garch_mle_with(
    series: &ReturnSeries<f64>,
    start: Option<GarchParams<f64>>,
    cfg: &MleConfig,
) -> Result<MleFit> {
    let x = series.values();
    if x.len() < MIN_MLE_LEN {
        return Err(GasError::InvalidInput(format!("likelihood fit needs at least {MIN_MLE_LEN} returns")));
    }
    if cfg.restarts == 0 {
        return Err(GasError::Config("at least one start is required".into()));
    }
    let s1 = series.variance();
    if !(s1 > 0.0) || !s1.is_finite() {
        return Err(GasError::InvalidInput("series has zero variance".into()));
    }
    let base = match start {
        Some(p) => p,
        None => {
            let (a1, b) = START_PERSISTENCE;
            GarchParams::new(s1 * (1.0 - a1 - b), a1, b)?
        }
    };
    let base_theta = to_theta(&base);
    let n = x.len() as f64;
    let objective = |theta: &[f64]| match to_params(theta) {
        Some(p) => -loglik_only(x, &p, s1) / n,
        None => f64::INFINITY,
    };

    let mut rng = stream_rng(cfg.seed, 0);
    let mut best: Option<(SimplexResult, GarchParams<f64>)> = None;
    for r in 0..cfg.restarts {
        let theta0: Vec<f64> = if r == 0 {
            base_theta.clone()
        } else {
            base_theta.iter().map(|&t| t + PERTURBATION_SD * rng.sample::<f64, _>(StandardNormal)).collect()
        };
        let Some(start_params) = to_params(&theta0) else { continue };
        let mut run = nelder_mead(objective, &theta0, &cfg.simplex);
        // one restart from the optimum guards against a collapsed simplex
        let polish = nelder_mead(objective, &run.x, &cfg.simplex);
        if polish.f <= run.f {
            let last = run.trace.last().copied().unwrap_or(run.f);
            run.trace.extend(polish.trace.iter().map(|&v| v.min(last)));
            run.iterations += polish.iterations;
            run.x = polish.x;
            run.f = polish.f;
            run.converged = polish.converged;
        }
        let better = best.as_ref().is_none_or(|(b, _)| run.f < b.f);
        if better && run.f.is_finite() {
            best = Some((run, start_params));
        }
    }
    let (run, start) = best.ok_or_else(|| GasError::Fit("no start produced a finite likelihood".into()))?;
    let params = to_params(&run.x).ok_or_else(|| GasError::Fit("optimum left the parameter space".into()))?;
    let (loglik, fitted_sigma2) = garch_loglik(x, &params, s1);
    Ok(MleFit {
        params,
        loglik,
        converged: run.converged && loglik.is_finite(),
        iterations: run.iterations,
        fitted_sigma2,
        start,
        trace: run.trace.iter().map(|f| -f * n).collect(),
    })
}

/// `a0 + a1 x^2 + b a0 / (1 - a1 - b)`: the fitted variance as a function of
/// the lagged return with the lagged variance at its unconditional mean.
pub fn mle_sigma2_curve(fit: &MleFit, grid: &[f64]) -> Result<Vec<f64>> {
    if !fit.converged {
        return Err(GasError::Fit("likelihood fit did not converge".into()));
    }
    Ok(grid.iter().map(|&x| fit.params.news_impact(x)).collect())
}

/// Writes one summary row per labelled fit.
pub fn write_mle_summary(path: &Path, fits: &[(String, &MleFit)]) -> Result<()> {
    write_table(
        path,
        &["label", "alpha0", "alpha1", "beta", "loglik", "converged", "iterations"],
        fits.iter().map(|(label, f)| {
            vec![
                label.clone(),
                fmt_num(f.params.alpha0()),
                fmt_num(f.params.alpha1()),
                fmt_num(f.params.beta()),
                fmt_num(f.loglik),
                f.converged.to_string(),
                f.iterations.to_string(),
            ]
        }),
    )
}
