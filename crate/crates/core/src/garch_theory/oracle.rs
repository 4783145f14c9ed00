use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use super::{c_eps_tilde, epsilon_tilde, GarchParams};
use crate::error::{GasError, Result};
use crate::io::{fmt_num, fmt_opt, write_table};
use crate::rng::stream_rng;
use crate::simulate::{ModelSpec, Recursion};

pub const MIN_ORACLE_PATH: usize = 100_000;

/// Settings of the conditional-averaging oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Simulated path length after burn-in.
    pub path_len: usize,
    pub burn_in: usize,
    /// Samples required in every cell.
    pub min_hits: usize,
    /// Smallest full window width, in units of the path standard deviation.
    pub min_width_sd: f64,
    /// Largest full window width before a cell is flagged instead of filled.
    pub max_width_sd: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { path_len: 1_000_000, burn_in: 1_000, min_hits: 500, min_width_sd: 0.02, max_width_sd: 0.5 }
    }
}

impl OracleConfig {
    pub fn with_path_len(mut self, path_len: usize) -> Self {
        self.path_len = path_len;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.path_len < MIN_ORACLE_PATH {
            return Err(GasError::Config(format!(
                "oracle path length {} below {MIN_ORACLE_PATH}",
                self.path_len
            )));
        }
        if self.min_hits < 2 || !(self.min_width_sd > 0.0) || !(self.max_width_sd >= self.min_width_sd) {
            return Err(GasError::Config("oracle window settings are inconsistent".into()));
        }
        Ok(())
    }
}

/// One grid cell of the oracle table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCell {
    pub x: f64,
    /// `None` when the cell could not collect enough samples.
    pub sigma2: Option<f64>,
    /// Monte Carlo standard error of `sigma2`.
    pub se: Option<f64>,
    /// Samples inside the window actually examined.
    pub count: usize,
    pub half_width: f64,
    pub flagged: bool,
}

/// Tabulated conditional variance `E[X_t^2 | X_{t-1} = x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleTable {
    pub cells: Vec<OracleCell>,
    /// Standard deviation of the simulated path.
    pub path_sd: f64,
    pub path_len: usize,
    pub seed: u64,
}

impl OracleTable {
    /// Tabulates `E[y | x]` from unsorted `(x, y)` samples.
    pub fn from_samples(mut samples: Vec<(f64, f64)>, grid: &[f64], cfg: &OracleConfig, seed: u64) -> Result<Self> {
        if grid.iter().any(|g| !g.is_finite()) || grid.is_empty() {
            return Err(GasError::InvalidInput("oracle grid must be non-empty and finite".into()));
        }
        if samples.len() < cfg.min_hits {
            return Err(GasError::InvalidInput("fewer samples than the per-cell minimum".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = samples.len() as f64;
        let mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
        let path_sd = (samples.iter().map(|s| (s.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let cells = grid
            .iter()
            .map(|&x| {
                let kth = kth_nearest_distance(&xs, x, cfg.min_hits);
                let half_min = 0.5 * cfg.min_width_sd * path_sd;
                let half_max = 0.5 * cfg.max_width_sd * path_sd;
                let flagged = kth > half_max;
                let half = if flagged { half_max } else { kth.max(half_min) };
                let lo = xs.partition_point(|&v| v < x - half);
                let hi = xs.partition_point(|&v| v <= x + half);
                let count = hi - lo;
                if flagged || count < 2 {
                    return OracleCell { x, sigma2: None, se: None, count, half_width: half, flagged: true };
                }
                let ys = samples[lo..hi].iter().map(|s| s.1);
                let m = ys.clone().sum::<f64>() / count as f64;
                let var = ys.map(|y| (y - m).powi(2)).sum::<f64>() / (count as f64 - 1.0);
                OracleCell {
                    x,
                    sigma2: Some(m),
                    se: Some((var / count as f64).sqrt()),
                    count,
                    half_width: half,
                    flagged: false,
                }
            })
            .collect();
        Ok(Self { cells, path_sd, path_len: samples.len(), seed })
    }

    /// Cell whose grid point is nearest to `x`.
    pub fn nearest(&self, x: f64) -> &OracleCell {
        self.cells
            .iter()
            .min_by(|a, b| (a.x - x).abs().total_cmp(&(b.x - x).abs()))
            .expect("non-empty table")
    }

    /// Linear interpolation between neighbouring filled cells. Returns `None`
    /// outside the grid or next to a flagged cell.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let pos = self.cells.partition_point(|c| c.x < x);
        if pos < self.cells.len() && self.cells[pos].x == x {
            return self.cells[pos].sigma2;
        }
        if pos == 0 || pos == self.cells.len() {
            return None;
        }
        let (a, b) = (&self.cells[pos - 1], &self.cells[pos]);
        let (ya, yb) = (a.sigma2?, b.sigma2?);
        let w = (x - a.x) / (b.x - a.x);
        Some(ya + w * (yb - ya))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_table(
            path,
            &["x", "sigma2", "se", "count"],
            self.cells
                .iter()
                .map(|c| vec![fmt_num(c.x), fmt_opt(c.sigma2), fmt_opt(c.se), c.count.to_string()]),
        )
    }
}

fn kth_nearest_distance(sorted: &[f64], x: f64, k: usize) -> f64 {
    let k = k.min(sorted.len());
    let p = sorted.partition_point(|&v| v < x);
    let (mut l, mut r) = (p, p);
    let mut d = 0.0;
    for _ in 0..k {
        let dl = if l > 0 { x - sorted[l - 1] } else { f64::INFINITY };
        let dr = if r < sorted.len() { sorted[r] - x } else { f64::INFINITY };
        if dl <= dr {
            d = dl;
            l -= 1;
        } else {
            d = dr;
            r += 1;
        }
    }
    d
}

/// GARCH(1,1) written as a one-lag nonparametric ARCH model.
#[derive(Debug, Clone, PartialEq)]
pub struct NarchRepresentation {
    pub params: GarchParams<f64>,
    pub a0: f64,
    pub b0: f64,
    pub table: OracleTable,
}

impl NarchRepresentation {
    fn coefficient(&self, cell: &OracleCell, intercept: f64) -> Option<(f64, f64)> {
        let denom = self.params.persistence() * cell.x * cell.x;
        if denom == 0.0 {
            return None;
        }
        Some(((cell.sigma2? - intercept) / denom, cell.se? / denom))
    }

    /// `g(x) = (sigma^2(x) - alpha0) / ((alpha1 + beta) x^2)` and its SE.
    pub fn g(&self, cell: &OracleCell) -> Option<(f64, f64)> {
        self.coefficient(cell, self.params.alpha0())
    }

    /// `g~(x) = (sigma^2(x) - A0) / ((alpha1 + beta) x^2)` and its SE.
    pub fn g_tilde(&self, cell: &OracleCell) -> Option<(f64, f64)> {
        self.coefficient(cell, self.a0)
    }

    /// `sigma^2(x) / (alpha0 + (alpha1 + beta) x^2)` and its SE.
    pub fn arch_ratio(&self, cell: &OracleCell) -> Option<(f64, f64)> {
        let r = self.params.alpha0() + self.params.persistence() * cell.x * cell.x;
        Some((cell.sigma2? / r, cell.se? / r))
    }
}

/// Simulated lagged pairs `(X_{t-1}, X_t^2)` of a long GARCH(1,1) path.
pub fn garch_lag_pairs(params: &GarchParams<f64>, path_len: usize, burn_in: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = stream_rng(seed, 1);
    let mut rec = Recursion::new(ModelSpec::Garch11(*params));
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(path_len);
    for t in 0..burn_in + path_len + 1 {
        let x = rec.step(rng.sample(StandardNormal));
        if t > burn_in {
            out.push((prev, x * x));
        }
        prev = x;
    }
    out
}

/// Tabulates the volatility function of a GARCH(1,1) model on `grid`.
pub fn narch_sigma2_oracle(
    params: &GarchParams<f64>,
    grid: &[f64],
    cfg: &OracleConfig,
    seed: u64,
) -> Result<NarchRepresentation> {
    cfg.validate()?;
    let pairs = garch_lag_pairs(params, cfg.path_len, cfg.burn_in, seed);
    let table = OracleTable::from_samples(pairs, grid, cfg, seed)?;
    Ok(NarchRepresentation { params: *params, a0: params.a0(), b0: params.b0(), table })
}

/// Sample means and standard errors of `e~ C^{1/2}` and `e~^2 C` over
/// standard normal draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformMoments {
    pub draws: usize,
    pub mean_root: f64,
    pub se_root: f64,
    pub mean_square: f64,
    pub se_square: f64,
    pub mean_tilde: f64,
    pub se_tilde: f64,
}

pub fn transform_moments(params: &GarchParams<f64>, draws: usize, seed: u64) -> Result<TransformMoments> {
    if draws < 2 {
        return Err(GasError::Config("need at least two draws".into()));
    }
    let mut rng = stream_rng(seed, 2);
    let mut acc = [[0.0f64; 2]; 3];
    for _ in 0..draws {
        let e: f64 = rng.sample(StandardNormal);
        let t = epsilon_tilde(e, params);
        let c = c_eps_tilde(t, params)?;
        for (slot, v) in acc.iter_mut().zip([t * c.sqrt(), t * t * c, t]) {
            slot[0] += v;
            slot[1] += v * v;
        }
    }
    let n = draws as f64;
    let stat = |s: [f64; 2]| {
        let m = s[0] / n;
        let var = (s[1] - n * m * m) / (n - 1.0);
        (m, (var.max(0.0) / n).sqrt())
    };
    let (mean_root, se_root) = stat(acc[0]);
    let (mean_square, se_square) = stat(acc[1]);
    let (mean_tilde, se_tilde) = stat(acc[2]);
    Ok(TransformMoments { draws, mean_root, se_root, mean_square, se_square, mean_tilde, se_tilde })
}
