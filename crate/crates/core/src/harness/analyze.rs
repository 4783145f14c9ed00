use std::path::{Path, PathBuf};

use crate::bandwidth::{GasConfig, GasEstimator, WindowSpec};
use crate::error::{GasError, Result};
use crate::inference::{confidence_band, BandConfig, BandPoint, BiasCorrection, VolatilityCurve};
use crate::io::{fmt_num, fmt_opt, read_column, read_series, write_table, ColumnSelector};
use crate::smoothing::ReturnSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub column: ColumnSelector,
    /// Realized-variance proxies, one row per return.
    pub rv_path: Option<PathBuf>,
    pub rv_column: ColumnSelector,
    /// Window of the GAS curve; `Width(a)` for a user interval width.
    pub window: WindowSpec,
    pub alpha: f64,
    pub bias: BiasCorrection,
    pub grid_points: usize,
    pub grid_quantile: f64,
    pub gas: GasConfig,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            column: ColumnSelector::First,
            rv_path: None,
            rv_column: ColumnSelector::First,
            window: WindowSpec::LocalDefault,
            alpha: 0.05,
            bias: BiasCorrection::default(),
            grid_points: 41,
            grid_quantile: 0.02,
            gas: GasConfig::default(),
        }
    }
}

/// Share of proxy points `(X_{t-1}, RV_t)` falling inside a band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCoverage {
    pub label: String,
    pub covered: usize,
    pub total: usize,
}

impl BandCoverage {
    pub fn rate(&self) -> f64 {
        self.covered as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisBundle {
    pub grid: Vec<f64>,
    pub gas: VolatilityCurve<f64>,
    pub global: VolatilityCurve<f64>,
    pub coverage: Option<Vec<BandCoverage>>,
    pub hidden_nodes: usize,
    pub m4eps: f64,
}

impl AnalysisBundle {
    /// One row per grid point; failed points leave empty cells.
    pub fn write_curves(&self, path: &Path) -> Result<()> {
        let find = |c: &VolatilityCurve<f64>, x: f64| c.points.iter().find(|p| p.x == x).cloned();
        let cells = |p: Option<BandPoint<f64>>| {
            vec![
                fmt_opt(p.as_ref().map(|p| p.estimate)),
                fmt_opt(p.as_ref().map(|p| p.lower)),
                fmt_opt(p.as_ref().map(|p| p.upper)),
                fmt_opt(p.as_ref().map(|p| p.h)),
            ]
        };
        write_table(
            path,
            &[
                "x", "gas", "gas_lower", "gas_upper", "gas_h", "global", "global_lower", "global_upper", "global_h",
            ],
            self.grid.iter().map(|&x| {
                let mut row = vec![fmt_num(x)];
                row.extend(cells(find(&self.gas, x)));
                row.extend(cells(find(&self.global, x)));
                row
            }),
        )
    }

    pub fn write_coverage(&self, path: &Path) -> Result<()> {
        let rows = self.coverage.as_deref().unwrap_or_default();
        write_table(
            path,
            &["band", "covered", "total", "rate"],
            rows.iter()
                .map(|c| vec![c.label.clone(), c.covered.to_string(), c.total.to_string(), fmt_num(c.rate())]),
        )
    }
}

fn interpolate_band(points: &[BandPoint<f64>], x: f64) -> Option<(f64, f64)> {
    let pos = points.partition_point(|p| p.x < x);
    if pos < points.len() && points[pos].x == x {
        return Some((points[pos].lower, points[pos].upper));
    }
    if pos == 0 || pos == points.len() {
        return None;
    }
    let (a, b) = (&points[pos - 1], &points[pos]);
    let w = (x - a.x) / (b.x - a.x);
    Some((a.lower + w * (b.lower - a.lower), a.upper + w * (b.upper - a.upper)))
}

fn coverage(label: &str, curve: &VolatilityCurve<f64>, series: &[f64], rv: &[f64]) -> BandCoverage {
    let mut covered = 0;
    let mut total = 0;
    for t in 1..series.len() {
        if let Some((lo, hi)) = interpolate_band(&curve.points, series[t - 1]) {
            total += 1;
            covered += usize::from(rv[t] >= lo && rv[t] <= hi);
        }
    }
    BandCoverage { label: label.to_string(), covered, total }
}

/// GAS and global-bandwidth curves with bands, plus proxy coverage when
/// realized variances are supplied.
pub fn analyze_series(series: &ReturnSeries<f64>, rv: Option<&[f64]>, cfg: &AnalyzeConfig) -> Result<AnalysisBundle> {
    if let Some(rv) = rv {
        if rv.len() != series.len() {
            return Err(GasError::Alignment(format!(
                "{} returns but {} realized-variance rows",
                series.len(),
                rv.len()
            )));
        }
    }
    if cfg.grid_points < 2 {
        return Err(GasError::Config("grid needs at least two points".into()));
    }
    let est = GasEstimator::fit(series, &cfg.gas)?;
    let lo = est.pairs.regressor_quantile(cfg.grid_quantile);
    let hi = est.pairs.regressor_quantile(1.0 - cfg.grid_quantile);
    let m = cfg.grid_points;
    let grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
    let band = BandConfig { alpha: cfg.alpha, window: cfg.window, bias: cfg.bias, interval_mode: false };
    let ctx = est.context();
    let gas = confidence_band(&ctx, &grid, &band)?;
    let global = confidence_band(&ctx, &grid, &BandConfig { window: WindowSpec::Global, ..band })?;
    let coverage = rv.map(|rv| {
        vec![coverage("gas", &gas, series.values(), rv), coverage("global", &global, series.values(), rv)]
    });
    Ok(AnalysisBundle { grid, gas, global, coverage, hidden_nodes: est.net.hidden_count(), m4eps: est.m4eps })
}

/// Reads returns (and optional proxies) from CSV and runs [`analyze_series`].
pub fn analyze_returns(csv_in: &Path, cfg: &AnalyzeConfig) -> Result<AnalysisBundle> {
    let series = read_series(csv_in, &cfg.column)?;
    let rv = cfg.rv_path.as_deref().map(|p| read_column(p, &cfg.rv_column)).transpose()?;
    analyze_series(&series, rv.as_deref(), cfg)
}
