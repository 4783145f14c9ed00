use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::bandwidth::{GasConfig, GasEstimator, WindowSpec};
use crate::error::{GasError, Result};
use crate::garch_theory::{narch_sigma2_oracle, GarchParams, OracleConfig, OracleTable};
use crate::inference::{symmetry_test, SymmetryConfig};
use crate::io::{fmt_num, write_table};
use crate::mle::{fit_garch_mle, mle_sigma2_curve};
use crate::rng::{stream_rng, sub_seed};
use crate::simulate::{simulate, true_sigma2, ModelSpec, SimSpec};
use crate::smoothing::ReturnSeries;

/// Experiments fail when more than this share of replications is excluded.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.1;
const POINT_QUANTILE: f64 = 0.01;
const MAX_REDRAWS: usize = 100;
const ORACLE_GRID_SD: f64 = 5.0;
const ORACLE_GRID_POINTS: usize = 201;
const ISE_LABEL: u64 = 0x15e;
const SYM_LABEL: u64 = 0x5e3;
const ORACLE_LABEL: u64 = 0x0ac;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    Gas,
    Mle,
    GlobalBandwidth,
    /// Returns the truth itself; a test hook for the ISE plumbing.
    Truth,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Gas => "gas",
            EstimatorKind::Mle => "mle",
            EstimatorKind::GlobalBandwidth => "global",
            EstimatorKind::Truth => "truth",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = GasError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gas" => Ok(EstimatorKind::Gas),
            "mle" => Ok(EstimatorKind::Mle),
            "global" | "globalbandwidth" => Ok(EstimatorKind::GlobalBandwidth),
            "truth" => Ok(EstimatorKind::Truth),
            other => Err(GasError::Config(format!("unknown estimator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n_list: Vec<usize>,
    pub replications: usize,
    pub n_x: usize,
    pub alpha: f64,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub output_dir: Option<PathBuf>,
    pub gas: GasConfig,
    /// Draw the ISE points once per sample size instead of per replication.
    pub fixed_points: bool,
    /// Path length of the GARCH oracle table.
    pub oracle: OracleConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: ModelSpec::model1(),
            n_list: vec![500, 1000],
            replications: 100,
            n_x: 20,
            alpha: 0.01,
            seed: 0,
            estimators: vec![EstimatorKind::Gas, EstimatorKind::Mle],
            output_dir: None,
            gas: GasConfig::default(),
            fixed_points: false,
            oracle: OracleConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.replications == 0 {
            return Err(GasError::Config("replications must be at least 1".into()));
        }
        if self.n_x < 2 {
            return Err(GasError::Config("n_x must be at least 2".into()));
        }
        if self.estimators.is_empty() {
            return Err(GasError::Config("at least one estimator is required".into()));
        }
        if self.n_list.is_empty() {
            return Err(GasError::Config("at least one sample size is required".into()));
        }
        Ok(())
    }
}

/// A replication left out of the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub n: usize,
    pub replication: usize,
    pub reason: String,
}

/// Unscaled ISE statistics of one estimator at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct IseRow {
    pub model: String,
    pub n: usize,
    pub estimator: EstimatorKind,
    pub mise: f64,
    pub medise: f64,
    pub sdise: f64,
    pub ise: Vec<f64>,
}

impl IseRow {
    pub fn scaled(&self) -> (f64, f64, f64) {
        let n = self.n as f64;
        (self.mise * n, self.medise * n, self.sdise * n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IseSummary {
    pub rows: Vec<IseRow>,
    pub replications: usize,
    pub exclusions: Vec<Exclusion>,
    pub seed: u64,
}

impl IseSummary {
    pub fn row(&self, n: usize, estimator: EstimatorKind) -> Option<&IseRow> {
        self.rows.iter().find(|r| r.n == n && r.estimator == estimator)
    }

    pub fn included(&self, n: usize) -> usize {
        self.replications - self.exclusions.iter().filter(|e| e.n == n).count()
    }

    /// Writes the `xn` summary table.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_table(
            path,
            &["model", "n", "estimator", "mise_xn", "medise_xn", "sdise_xn", "included", "excluded", "seed"],
            self.rows.iter().map(|r| {
                let (m, md, sd) = r.scaled();
                vec![
                    r.model.clone(),
                    r.n.to_string(),
                    r.estimator.to_string(),
                    fmt_num(m),
                    fmt_num(md),
                    fmt_num(sd),
                    self.included(r.n).to_string(),
                    (self.replications - self.included(r.n)).to_string(),
                    self.seed.to_string(),
                ]
            }),
        )
    }
}

pub fn write_exclusions(path: &Path, exclusions: &[Exclusion]) -> Result<()> {
    write_table(
        path,
        &["n", "replication", "reason"],
        exclusions.iter().map(|e| vec![e.n.to_string(), e.replication.to_string(), e.reason.clone()]),
    )
}

/// Oracle table for a GARCH truth, on a grid of `+-5` unconditional sd.
pub fn garch_truth_table(params: &GarchParams<f64>, cfg: &OracleConfig, seed: u64) -> Result<OracleTable> {
    let r = ORACLE_GRID_SD * params.unconditional_variance().sqrt();
    let m = ORACLE_GRID_POINTS;
    let grid: Vec<f64> = (0..m).map(|i| -r + 2.0 * r * i as f64 / (m - 1) as f64).collect();
    Ok(narch_sigma2_oracle(params, &grid, cfg, sub_seed(seed, ORACLE_LABEL, 0))?.table)
}

enum Truth {
    Closed(ModelSpec),
    Table(OracleTable),
}

impl Truth {
    fn for_model(model: &ModelSpec, cfg: &ExperimentConfig) -> Result<Self> {
        match model {
            ModelSpec::Garch11(p) => Ok(Truth::Table(garch_truth_table(p, &cfg.oracle, cfg.seed)?)),
            m => Ok(Truth::Closed(*m)),
        }
    }

    fn at(&self, x: f64) -> Option<f64> {
        match self {
            Truth::Closed(m) => true_sigma2(m, x),
            Truth::Table(t) => t.interpolate(x),
        }
    }
}

fn central_range(series: &ReturnSeries<f64>) -> (f64, f64) {
    let mut v = series.values().to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    (q(POINT_QUANTILE), q(1.0 - POINT_QUANTILE))
}

/// Uniform draws over the central range; a draw without a tabulated truth
/// is redrawn up to [`MAX_REDRAWS`] times.
fn draw_points(series: &ReturnSeries<f64>, n_x: usize, seed: u64, truth: &Truth) -> std::result::Result<Vec<f64>, String> {
    let (lo, hi) = central_range(series);
    let mut rng = stream_rng(seed, 7);
    (0..n_x)
        .map(|_| {
            for _ in 0..=MAX_REDRAWS {
                let x = lo + (hi - lo) * rng.random::<f64>();
                if truth.at(x).is_some() {
                    return Ok(x);
                }
            }
            Err(format!("no tabulated truth in [{lo}, {hi}] after {MAX_REDRAWS} redraws"))
        })
        .collect()
}

fn rep_seed(seed: u64, label: u64, n: usize, r: usize) -> u64 {
    sub_seed(sub_seed(seed, label, n as u64), label, r as u64)
}

fn one_ise_replication(
    cfg: &ExperimentConfig,
    truth: &Truth,
    n: usize,
    r: usize,
    fixed: Option<&[f64]>,
) -> std::result::Result<Vec<f64>, String> {
    let seed = rep_seed(cfg.seed, ISE_LABEL, n, r);
    let series = simulate(&SimSpec::new(cfg.model, n, seed)).map_err(|e| e.to_string())?;
    let points = match fixed {
        Some(p) => p.to_vec(),
        None => draw_points(&series, cfg.n_x, seed, truth)?,
    };
    let truth_vals = points
        .iter()
        .map(|&x| truth.at(x).ok_or_else(|| format!("no truth available at x = {x}")))
        .collect::<std::result::Result<Vec<f64>, String>>()?;
    let needs_gas = cfg.estimators.iter().any(|e| matches!(e, EstimatorKind::Gas | EstimatorKind::GlobalBandwidth));
    let gas = if needs_gas {
        Some(GasEstimator::fit(&series, &cfg.gas.clone().with_seed(seed)).map_err(|e| format!("gas: {e}"))?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(cfg.estimators.len());
    for est in &cfg.estimators {
        let fitted: Vec<f64> = match est {
            EstimatorKind::Truth => truth_vals.clone(),
            EstimatorKind::Gas | EstimatorKind::GlobalBandwidth => {
                let g = gas.as_ref().expect("fitted above");
                let spec = if *est == EstimatorKind::Gas { cfg.gas.window } else { WindowSpec::Global };
                let ctx = g.context();
                points
                    .iter()
                    .map(|&x| ctx.estimate(x, &spec).map(|p| p.sigma2))
                    .collect::<Result<Vec<f64>>>()
                    .map_err(|e| format!("{est}: {e}"))?
            }
            EstimatorKind::Mle => {
                let fit = fit_garch_mle(&series, None, seed).map_err(|e| format!("mle: {e}"))?;
                mle_sigma2_curve(&fit, &points).map_err(|e| format!("mle: {e}"))?
            }
        };
        let ise = fitted.iter().zip(&truth_vals).map(|(f, t)| (f - t).powi(2)).sum::<f64>() / points.len() as f64;
        out.push(ise);
    }
    Ok(out)
}

fn check_exclusions(excluded: usize, replications: usize, n: usize) -> Result<()> {
    if excluded as f64 > MAX_EXCLUDED_FRACTION * replications as f64 {
        return Err(GasError::Experiment(format!(
            "{excluded} of {replications} replications excluded at n = {n}"
        )));
    }
    Ok(())
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    if m == 0 {
        f64::NAN
    } else if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    }
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Mean, median and sd of the ISE over replications, per sample size and estimator.
pub fn run_ise_experiment(cfg: &ExperimentConfig) -> Result<IseSummary> {
    cfg.validate()?;
    let truth = Truth::for_model(&cfg.model, cfg)?;
    let mut rows = Vec::new();
    let mut exclusions = Vec::new();
    for &n in &cfg.n_list {
        let fixed = if cfg.fixed_points {
            let s = simulate(&SimSpec::new(cfg.model, n, sub_seed(cfg.seed, ISE_LABEL, n as u64)))?;
            let points = draw_points(&s, cfg.n_x, sub_seed(cfg.seed, ISE_LABEL, n as u64), &truth)
                .map_err(GasError::Experiment)?;
            Some(points)
        } else {
            None
        };
        let results: Vec<_> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| one_ise_replication(cfg, &truth, n, r, fixed.as_deref()))
            .collect();
        let mut per_est = vec![Vec::new(); cfg.estimators.len()];
        let mut excluded = 0;
        for (r, res) in results.into_iter().enumerate() {
            match res {
                Ok(ise) => ise.into_iter().zip(per_est.iter_mut()).for_each(|(v, col)| col.push(v)),
                Err(reason) => {
                    excluded += 1;
                    exclusions.push(Exclusion { n, replication: r, reason });
                }
            }
        }
        check_exclusions(excluded, cfg.replications, n)?;
        for (est, ise) in cfg.estimators.iter().zip(per_est) {
            let (mise, sdise) = mean_sd(&ise);
            rows.push(IseRow {
                model: cfg.model.name().to_string(),
                n,
                estimator: *est,
                mise,
                medise: median(&ise),
                sdise,
                ise,
            });
        }
    }
    Ok(IseSummary { rows, replications: cfg.replications, exclusions, seed: cfg.seed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryRow {
    pub model: String,
    pub n: usize,
    pub included: usize,
    pub rejections: usize,
}

impl SymmetryRow {
    pub fn rate(&self) -> f64 {
        self.rejections as f64 / self.included as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrySummary {
    pub rows: Vec<SymmetryRow>,
    pub replications: usize,
    pub exclusions: Vec<Exclusion>,
    pub alpha: f64,
    pub n_x: usize,
    pub seed: u64,
}

impl SymmetrySummary {
    pub fn row(&self, n: usize) -> Option<&SymmetryRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_table(
            path,
            &["model", "n", "alpha", "n_x", "included", "excluded", "rejections", "rate", "seed"],
            self.rows.iter().map(|r| {
                vec![
                    r.model.clone(),
                    r.n.to_string(),
                    fmt_num(self.alpha),
                    self.n_x.to_string(),
                    r.included.to_string(),
                    (self.replications - r.included).to_string(),
                    r.rejections.to_string(),
                    fmt_num(r.rate()),
                    self.seed.to_string(),
                ]
            }),
        )
    }
}

/// Rejection frequency of the symmetry test per sample size.
pub fn run_symmetry_experiment(cfg: &ExperimentConfig) -> Result<SymmetrySummary> {
    cfg.validate()?;
    let sym = SymmetryConfig { n_x: cfg.n_x, alpha: cfg.alpha, ..SymmetryConfig::default() };
    let mut rows = Vec::new();
    let mut exclusions = Vec::new();
    for &n in &cfg.n_list {
        let results: Vec<std::result::Result<bool, String>> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let seed = rep_seed(cfg.seed, SYM_LABEL, n, r);
                let series = simulate(&SimSpec::new(cfg.model, n, seed)).map_err(|e| e.to_string())?;
                let gas = GasEstimator::fit(&series, &cfg.gas.clone().with_seed(seed)).map_err(|e| e.to_string())?;
                symmetry_test(&gas.context(), &sym).map(|t| t.reject).map_err(|e| e.to_string())
            })
            .collect();
        let mut rejections = 0;
        let mut excluded = 0;
        for (r, res) in results.into_iter().enumerate() {
            match res {
                Ok(rej) => rejections += usize::from(rej),
                Err(reason) => {
                    excluded += 1;
                    exclusions.push(Exclusion { n, replication: r, reason });
                }
            }
        }
        check_exclusions(excluded, cfg.replications, n)?;
        rows.push(SymmetryRow {
            model: cfg.model.name().to_string(),
            n,
            included: cfg.replications - excluded,
            rejections,
        });
    }
    Ok(SymmetrySummary { rows, replications: cfg.replications, exclusions, alpha: cfg.alpha, n_x: cfg.n_x, seed: cfg.seed })
}
