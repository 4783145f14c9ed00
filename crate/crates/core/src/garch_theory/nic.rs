use super::GarchParams;
use crate::bandwidth::{GasConfig, GasEstimator};
use crate::error::{GasError, Result};
use crate::inference::{confidence_band, BandConfig, PointFailure, VolatilityCurve};
use crate::rng::sub_seed;
use crate::simulate::{simulate, ModelSpec, SimSpec};
use crate::smoothing::ReturnSeries;

const NIC_LABEL: u64 = 0x4e49_43;

#[derive(Debug, Clone, PartialEq)]
pub struct NicConfig {
    pub gas: GasConfig,
    pub band: BandConfig,
    pub grid_points: usize,
    /// Regressor quantile bounding the common grid on each side.
    pub grid_quantile: f64,
}

impl Default for NicConfig {
    fn default() -> Self {
        Self { gas: GasConfig::default(), band: BandConfig::default(), grid_points: 41, grid_quantile: 0.02 }
    }
}

/// GAS curves of a GARCH(1,1) path and of its transformed-innovation ARCH(1)
/// counterpart, evaluated on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NicComparison {
    pub params: GarchParams<f64>,
    pub grid: Vec<f64>,
    pub garch: VolatilityCurve<f64>,
    pub arch: VolatilityCurve<f64>,
    pub garch_series: ReturnSeries<f64>,
    pub arch_series: ReturnSeries<f64>,
}

impl NicComparison {
    /// `(x, garch, arch)` for grid points where both fits succeeded.
    pub fn paired(&self) -> Vec<(f64, f64, f64)> {
        self.garch
            .points
            .iter()
            .filter_map(|g| {
                self.arch.points.iter().find(|a| a.x == g.x).map(|a| (g.x, g.estimate, a.estimate))
            })
            .collect()
    }
}

/// `sqrt(a0 b / (a1 + b))`: the transformed-innovation path never enters
/// `(-gap, gap)` because `|e~| >= sqrt(b / (a1 + b))` and `sigma^2 >= a0`.
pub fn support_gap(params: &GarchParams<f64>) -> f64 {
    (params.alpha0() * params.beta() / params.persistence()).sqrt()
}

pub fn nic_compare(params: &GarchParams<f64>, series_len: usize, seed: u64, cfg: &NicConfig) -> Result<NicComparison> {
    if cfg.grid_points < 2 {
        return Err(GasError::Config("comparison grid needs at least two points".into()));
    }
    if !(cfg.grid_quantile >= 0.0 && cfg.grid_quantile < 0.5) {
        return Err(GasError::Config(format!("grid quantile {} outside [0, 0.5)", cfg.grid_quantile)));
    }
    let models = [ModelSpec::Garch11(*params), ModelSpec::ArchEpsTilde(*params)];
    let mut fits = Vec::with_capacity(2);
    let mut series = Vec::with_capacity(2);
    for (k, model) in models.into_iter().enumerate() {
        let s = simulate(&SimSpec::new(model, series_len, sub_seed(seed, NIC_LABEL, k as u64)))?;
        let gas = cfg.gas.clone().with_seed(sub_seed(seed, NIC_LABEL, 10 + k as u64));
        fits.push(GasEstimator::fit(&s, &gas)?);
        series.push(s);
    }
    let q = cfg.grid_quantile;
    let lo = fits.iter().map(|f| f.pairs.regressor_quantile(q)).fold(f64::NEG_INFINITY, f64::max);
    let hi = fits.iter().map(|f| f.pairs.regressor_quantile(1.0 - q)).fold(f64::INFINITY, f64::min);
    if !(hi > lo) {
        return Err(GasError::InvalidInput("the two designs share no common support".into()));
    }
    let m = cfg.grid_points;
    let grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
    let garch = confidence_band(&fits[0].context(), &grid, &cfg.band)?;
    let gap = support_gap(params);
    let inside: Vec<f64> = grid.iter().copied().filter(|x| x.abs() >= gap).collect();
    let mut arch = confidence_band(&fits[1].context(), &inside, &cfg.band)?;
    for &x in grid.iter().filter(|x| x.abs() < gap) {
        arch.failures.push(PointFailure { x, reason: format!("inside the support gap |x| < {gap}") });
    }
    arch.failures.sort_by(|a, b| a.x.total_cmp(&b.x));
    let arch_series = series.pop().expect("two series");
    let garch_series = series.pop().expect("two series");
    Ok(NicComparison { params: *params, grid, garch, arch, garch_series, arch_series })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_share_grid_and_minimum_ordering() {
        let p = GarchParams::new(0.1, 0.3, 0.2).unwrap();
        let c = nic_compare(&p, 2000, 11, &NicConfig::default()).unwrap();
        assert_eq!(c.grid.len(), 41);
        let pairs = c.paired();
        assert!(pairs.len() > 30);
        let gap = support_gap(&p);
        assert!(c.arch.failures.iter().all(|f| f.x.abs() < gap));
        assert!(c.arch_series.values().iter().fold(f64::INFINITY, |m, v| m.min(v.abs())) >= gap);
        let min_g = c.garch.points.iter().map(|q| q.estimate).fold(f64::INFINITY, f64::min);
        let min_a = c.arch.points.iter().map(|q| q.estimate).fold(f64::INFINITY, f64::min);
        assert!(min_g > min_a, "garch {min_g} arch {min_a}");
    }

    #[test]
    fn rejects_bad_grid() {
        let p = GarchParams::new(0.1, 0.3, 0.2).unwrap();
        let cfg = NicConfig { grid_points: 1, ..NicConfig::default() };
        assert!(nic_compare(&p, 500, 0, &cfg).is_err());
    }
}
