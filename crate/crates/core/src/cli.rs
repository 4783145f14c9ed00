//! Command-line front end of the `gasvol` binary.
//!
//! Every subcommand writes its CSV outputs and a `manifest.txt` into
//! `--out`. Exit status is 0 on success, 1 on a usage error and 2 when the
//! run itself fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bandwidth::{GasConfig, GasEstimator, WindowSpec};
use crate::error::{GasError, Result};
use crate::garch_theory::{nic_compare, GarchParams, NicConfig, OracleConfig};
use crate::harness::{
    analyze_returns, garch_truth_table, run_ise_experiment, run_symmetry_experiment, write_exclusions,
    AnalyzeConfig, EstimatorKind, ExperimentConfig,
};
use crate::inference::{
    confidence_band, symmetry_test, BandConfig, BandPoint, BiasCorrection, SymmetryConfig, VolatilityCurve,
};
use crate::io::{fmt_num, fmt_opt, read_series, write_series, write_table, ColumnSelector, Manifest};
use crate::mle::{fit_garch_mle_with, mle_sigma2_curve, write_mle_summary, MleConfig};
use crate::pilot::PilotConfig;
use crate::simulate::{simulate, ModelSpec, SimSpec, DEFAULT_BURN_IN};
use crate::smoothing::ReturnSeries;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gasvol", version, about = "Nonparametric volatility estimation with plug-in bandwidths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a return series.
    Simulate(SimulateArgs),
    /// Volatility curve on a grid.
    Estimate(EstimateArgs),
    /// Volatility curve with pointwise confidence bands.
    Bands(BandsArgs),
    /// Test sigma^2(x) = sigma^2(-x).
    Symtest(SymtestArgs),
    /// Curves of a GARCH(1,1) path and its transformed-innovation ARCH(1) path.
    Nic(NicArgs),
    /// GARCH(1,1) quasi-maximum likelihood fit.
    Mle(MleArgs),
    /// Monte Carlo integrated squared error.
    McIse(McIseArgs),
    /// Monte Carlo size and power of the symmetry test.
    McSym(McSymArgs),
    /// Curves, bands and proxy coverage for a return file.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// arch, garch, ht or arch-eps-tilde.
    #[arg(long, default_value = "arch")]
    pub model: String,
    #[arg(long)]
    pub a0: Option<f64>,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

impl ModelArgs {
    pub fn to_model(&self) -> Result<ModelSpec> {
        let a0 = self.a0.unwrap_or(0.1);
        let garch = || -> Result<GarchParams<f64>> {
            GarchParams::new(a0, self.a1.unwrap_or(0.3), self.beta.unwrap_or(0.2))
        };
        let m = match self.model.to_ascii_lowercase().as_str() {
            "arch" => ModelSpec::Arch1 { alpha0: a0, alpha1: self.a1.unwrap_or(0.5) },
            "garch" => ModelSpec::Garch11(garch()?),
            "ht" => ModelSpec::Ht,
            "arch-eps-tilde" => ModelSpec::ArchEpsTilde(garch()?),
            other => return Err(GasError::Config(format!("unknown model `{other}`"))),
        };
        m.validate()?;
        Ok(m)
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Return series CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Column index (0-based) or header name.
    #[arg(long, default_value = "0")]
    pub column: ColumnSelector,
}

#[derive(Debug, Args)]
pub struct PilotArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random initializations per hidden-node count.
    #[arg(long, default_value_t = 3)]
    pub pilot_restarts: usize,
    /// Largest hidden-node count compared by BIC.
    #[arg(long, default_value_t = 5)]
    pub max_hidden: usize,
}

impl PilotArgs {
    fn gas_config(&self) -> Result<GasConfig> {
        if self.max_hidden == 0 {
            return Err(GasError::Config("--max-hidden must be positive".into()));
        }
        let pilot = PilotConfig {
            d_candidates: (1..=self.max_hidden).collect(),
            restarts: self.pilot_restarts,
            seed: self.seed,
            ..PilotConfig::default()
        };
        Ok(GasConfig { pilot, ..GasConfig::default() })
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    /// Grid spans this regressor quantile to its complement.
    #[arg(long, default_value_t = 0.02)]
    pub grid_quantile: f64,
}

impl GridArgs {
    fn grid(&self, est: &GasEstimator<f64>) -> Result<Vec<f64>> {
        if self.grid_points < 2 || !(0.0..0.5).contains(&self.grid_quantile) {
            return Err(GasError::Config("grid needs two points and a quantile in [0, 0.5)".into()));
        }
        let lo = est.pairs.regressor_quantile(self.grid_quantile);
        let hi = est.pairs.regressor_quantile(1.0 - self.grid_quantile);
        let m = self.grid_points;
        Ok((0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect())
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `local`, `global` or an interval width.
    #[arg(long, default_value = "local")]
    pub window: WindowSpec,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub pilot: PilotArgs,
    /// Also write the fitted pilot network to `pilot.txt`.
    #[arg(long)]
    pub save_pilot: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "local")]
    pub window: WindowSpec,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// none, functional or pilot.
    #[arg(long, default_value = "functional")]
    pub bias: BiasCorrection,
    /// Average the estimate over the bandwidth interval.
    #[arg(long)]
    pub interval_mode: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub pilot: PilotArgs,
    #[arg(long)]
    pub save_pilot: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SymtestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 20)]
    pub nx: usize,
    #[command(flatten)]
    pub pilot: PilotArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct NicArgs {
    #[arg(long, default_value_t = 0.1)]
    pub a0: f64,
    #[arg(long, default_value_t = 0.3)]
    pub a1: f64,
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    /// Also tabulate the simulated volatility function on a path of this length.
    #[arg(long)]
    pub oracle_path: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct MleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "500,1000")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = 20)]
    pub nx: usize,
    #[command(flatten)]
    pub pilot: PilotArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct McIseArgs {
    #[command(flatten)]
    pub mc: McArgs,
    /// Comma-separated subset of gas, mle, global.
    #[arg(long, value_delimiter = ',', default_value = "gas,mle")]
    pub estimators: Vec<EstimatorKind>,
    /// Use one set of evaluation points per sample size.
    #[arg(long)]
    pub fixed_points: bool,
    /// Path length of the GARCH oracle.
    #[arg(long, default_value_t = 1_000_000)]
    pub oracle_path: usize,
}

#[derive(Debug, Args)]
pub struct McSymArgs {
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Realized-variance proxies aligned by row with the returns.
    #[arg(long)]
    pub rv: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    pub rv_column: ColumnSelector,
    /// Interval width of the GAS curve; the local default when omitted.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "functional")]
    pub bias: BiasCorrection,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub pilot: PilotArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

fn prepare(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| GasError::io(out, e))
}

fn manifest(argv: &[OsString], command: &str, seed: u64) -> Manifest {
    let mut m = Manifest::new();
    m.set("program", "gasvol")
        .set("version", env!("CARGO_PKG_VERSION"))
        .set("command", command)
        .set("seed", seed)
        .set("argv", argv.iter().map(|a| a.to_string_lossy()).collect::<Vec<_>>().join(" "));
    m
}

fn finish(mut m: Manifest, out: &Path, files: &[&str]) -> Result<()> {
    m.set("outputs", files.join(","));
    m.write(&out.join("manifest.txt"))
}

fn load(input: &InputArgs) -> Result<ReturnSeries<f64>> {
    read_series(&input.input, &input.column)
}

fn fit(series: &ReturnSeries<f64>, pilot: &PilotArgs, m: &mut Manifest) -> Result<GasEstimator<f64>> {
    let est = GasEstimator::fit(series, &pilot.gas_config()?)?;
    m.set("n", series.len())
        .set("pilot_restarts", pilot.pilot_restarts)
        .set("max_hidden", pilot.max_hidden)
        .set("hidden_nodes", est.net.hidden_count())
        .set("m4eps", fmt_num(est.m4eps));
    Ok(est)
}

fn run_simulate(a: &SimulateArgs, argv: &[OsString]) -> Result<()> {
    let model = a.model.to_model()?;
    let spec = SimSpec { burn_in: a.burn_in, ..SimSpec::new(model, a.n, a.seed) };
    let series = simulate(&spec)?;
    prepare(&a.out.out)?;
    write_series(&a.out.out.join("returns.csv"), series.values())?;
    let mut m = manifest(argv, "simulate", a.seed);
    m.set("model", model).set("n", a.n).set("burn_in", a.burn_in);
    finish(m, &a.out.out, &["returns.csv"])
}

fn run_estimate(a: &EstimateArgs, argv: &[OsString]) -> Result<()> {
    let series = load(&a.input)?;
    let mut m = manifest(argv, "estimate", a.pilot.seed);
    let est = fit(&series, &a.pilot, &mut m)?;
    let grid = a.grid.grid(&est)?;
    let ctx = est.context();
    prepare(&a.out.out)?;
    write_table(
        &a.out.out.join("curve.csv"),
        &["x", "sigma2", "h", "count", "error"],
        grid.iter().map(|&x| match ctx.estimate(x, &a.window) {
            Ok(p) => vec![fmt_num(x), fmt_num(p.sigma2), fmt_num(p.h), p.count.to_string(), String::new()],
            Err(e) => vec![fmt_num(x), String::new(), String::new(), String::new(), e.to_string()],
        }),
    )?;
    m.set("window", a.window).set("grid_points", grid.len());
    let mut files = vec!["curve.csv"];
    if a.save_pilot {
        let p = a.out.out.join("pilot.txt");
        fs::write(&p, est.net.to_kv_string()).map_err(|e| GasError::io(&p, e))?;
        files.push("pilot.txt");
    }
    finish(m, &a.out.out, &files)
}

fn run_bands(a: &BandsArgs, argv: &[OsString]) -> Result<()> {
    let series = load(&a.input)?;
    let mut m = manifest(argv, "bands", a.pilot.seed);
    let est = fit(&series, &a.pilot, &mut m)?;
    let grid = a.grid.grid(&est)?;
    let cfg = BandConfig { alpha: a.alpha, window: a.window, bias: a.bias, interval_mode: a.interval_mode };
    let curve = confidence_band(&est.context(), &grid, &cfg)?;
    prepare(&a.out.out)?;
    write_table(
        &a.out.out.join("bands.csv"),
        &["x", "estimate", "bias_correction", "lower", "upper", "h"],
        curve.points.iter().map(|p| {
            vec![
                fmt_num(p.x),
                fmt_num(p.estimate),
                fmt_num(p.bias_correction),
                fmt_num(p.lower),
                fmt_num(p.upper),
                fmt_num(p.h),
            ]
        }),
    )?;
    write_table(
        &a.out.out.join("failures.csv"),
        &["x", "reason"],
        curve.failures.iter().map(|f| vec![fmt_num(f.x), f.reason.clone()]),
    )?;
    m.set("alpha", a.alpha).set("window", a.window).set("bias", a.bias).set("interval_mode", a.interval_mode);
    let mut files = vec!["bands.csv", "failures.csv"];
    if a.save_pilot {
        let p = a.out.out.join("pilot.txt");
        fs::write(&p, est.net.to_kv_string()).map_err(|e| GasError::io(&p, e))?;
        files.push("pilot.txt");
    }
    finish(m, &a.out.out, &files)
}

fn run_symtest(a: &SymtestArgs, argv: &[OsString]) -> Result<()> {
    let series = load(&a.input)?;
    let mut m = manifest(argv, "symtest", a.pilot.seed);
    let est = fit(&series, &a.pilot, &mut m)?;
    let cfg = SymmetryConfig { n_x: a.nx, alpha: a.alpha, ..SymmetryConfig::default() };
    let t = symmetry_test(&est.context(), &cfg)?;
    prepare(&a.out.out)?;
    write_table(
        &a.out.out.join("symtest.csv"),
        &["x", "statistic", "sigma2_pos", "sigma2_neg", "critical_value", "exceeds"],
        t.pairs.iter().map(|p| {
            vec![
                fmt_num(p.x),
                fmt_num(p.statistic),
                fmt_num(p.sigma2_pos),
                fmt_num(p.sigma2_neg),
                fmt_num(t.critical_value),
                p.exceeds.to_string(),
            ]
        }),
    )?;
    write_table(
        &a.out.out.join("symtest_summary.csv"),
        &["alpha", "n_x", "pairs", "dropped", "critical_value", "max_abs_statistic", "reject"],
        [vec![
            fmt_num(t.alpha),
            t.n_x.to_string(),
            t.pairs.len().to_string(),
            t.dropped.len().to_string(),
            fmt_num(t.critical_value),
            fmt_num(t.max_abs_statistic()),
            t.reject.to_string(),
        ]],
    )?;
    m.set("alpha", a.alpha).set("nx", a.nx).set("reject", t.reject);
    finish(m, &a.out.out, &["symtest.csv", "symtest_summary.csv"])
}

fn point_at(curve: &VolatilityCurve<f64>, x: f64) -> Option<&BandPoint<f64>> {
    curve.points.iter().find(|p| p.x == x)
}

fn run_nic(a: &NicArgs, argv: &[OsString]) -> Result<()> {
    let params = GarchParams::new(a.a0, a.a1, a.beta)?;
    let cfg = NicConfig { grid_points: a.grid_points, ..NicConfig::default() };
    let c = nic_compare(&params, a.n, a.seed, &cfg)?;
    prepare(&a.out.out)?;
    write_table(
        &a.out.out.join("nic.csv"),
        &["x", "garch", "garch_lower", "garch_upper", "arch", "arch_lower", "arch_upper"],
        c.grid.iter().map(|&x| {
            let g = point_at(&c.garch, x);
            let r = point_at(&c.arch, x);
            vec![
                fmt_num(x),
                fmt_opt(g.map(|p| p.estimate)),
                fmt_opt(g.map(|p| p.lower)),
                fmt_opt(g.map(|p| p.upper)),
                fmt_opt(r.map(|p| p.estimate)),
                fmt_opt(r.map(|p| p.lower)),
                fmt_opt(r.map(|p| p.upper)),
            ]
        }),
    )?;
    let mut m = manifest(argv, "nic", a.seed);
    m.set("a0", a.a0).set("a1", a.a1).set("beta", a.beta).set("n", a.n).set("A0", fmt_num(params.a0()));
    let mut files = vec!["nic.csv"];
    if let Some(len) = a.oracle_path {
        let table = garch_truth_table(&params, &OracleConfig::default().with_path_len(len), a.seed)?;
        table.write_csv(&a.out.out.join("oracle.csv"))?;
        m.set("oracle_path", len);
        files.push("oracle.csv");
    }
    finish(m, &a.out.out, &files)
}

fn run_mle(a: &MleArgs, argv: &[OsString]) -> Result<()> {
    let series = load(&a.input)?;
    let cfg = MleConfig { restarts: a.restarts, seed: a.seed, ..MleConfig::default() };
    let fit = fit_garch_mle_with(&series, None, &cfg)?;
    prepare(&a.out.out)?;
    write_mle_summary(&a.out.out.join("mle.csv"), &[("fit".to_string(), &fit)])?;
    let mut files = vec!["mle.csv"];
    if fit.converged && a.grid_points >= 2 {
        let pairs = series.design_pairs();
        let (lo, hi) = (pairs.regressor_quantile(0.02), pairs.regressor_quantile(0.98));
        let m = a.grid_points;
        let grid: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
        let curve = mle_sigma2_curve(&fit, &grid)?;
        write_table(
            &a.out.out.join("mle_curve.csv"),
            &["x", "sigma2"],
            grid.iter().zip(&curve).map(|(x, s)| vec![fmt_num(*x), fmt_num(*s)]),
        )?;
        files.push("mle_curve.csv");
    }
    let mut m = manifest(argv, "mle", a.seed);
    m.set("n", series.len()).set("restarts", a.restarts).set("converged", fit.converged);
    finish(m, &a.out.out, &files)
}

fn experiment(mc: &McArgs) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        model: mc.model.to_model()?,
        n_list: mc.n.clone(),
        replications: mc.reps,
        n_x: mc.nx,
        seed: mc.pilot.seed,
        output_dir: Some(mc.out.out.clone()),
        gas: mc.pilot.gas_config()?,
        ..ExperimentConfig::default()
    })
}

fn run_mc_ise(a: &McIseArgs, argv: &[OsString]) -> Result<()> {
    if a.estimators.contains(&EstimatorKind::Truth) {
        return Err(GasError::Config("`truth` is not a selectable estimator".into()));
    }
    let cfg = ExperimentConfig {
        estimators: a.estimators.clone(),
        fixed_points: a.fixed_points,
        oracle: OracleConfig::default().with_path_len(a.oracle_path),
        ..experiment(&a.mc)?
    };
    let s = run_ise_experiment(&cfg)?;
    let out = &a.mc.out.out;
    prepare(out)?;
    s.write_csv(&out.join("ise_summary.csv"))?;
    write_exclusions(&out.join("exclusions.csv"), &s.exclusions)?;
    let mut m = manifest(argv, "mc-ise", cfg.seed);
    m.set("model", cfg.model)
        .set("n", a.mc.n.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
        .set("reps", cfg.replications)
        .set("nx", cfg.n_x)
        .set("fixed_points", cfg.fixed_points)
        .set("excluded", s.exclusions.len());
    finish(m, out, &["ise_summary.csv", "exclusions.csv"])
}

fn run_mc_sym(a: &McSymArgs, argv: &[OsString]) -> Result<()> {
    let cfg = ExperimentConfig { alpha: a.alpha, ..experiment(&a.mc)? };
    let s = run_symmetry_experiment(&cfg)?;
    let out = &a.mc.out.out;
    prepare(out)?;
    s.write_csv(&out.join("symmetry_summary.csv"))?;
    write_exclusions(&out.join("exclusions.csv"), &s.exclusions)?;
    let mut m = manifest(argv, "mc-sym", cfg.seed);
    m.set("model", cfg.model)
        .set("n", a.mc.n.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
        .set("reps", cfg.replications)
        .set("nx", cfg.n_x)
        .set("alpha", cfg.alpha)
        .set("excluded", s.exclusions.len());
    finish(m, out, &["symmetry_summary.csv", "exclusions.csv"])
}

fn run_analyze(a: &AnalyzeArgs, argv: &[OsString]) -> Result<()> {
    let window = match a.a {
        Some(w) if w > 0.0 => WindowSpec::Width(w),
        Some(w) => return Err(GasError::Config(format!("interval width must be positive, got {w}"))),
        None => WindowSpec::LocalDefault,
    };
    let cfg = AnalyzeConfig {
        column: a.input.column.clone(),
        rv_path: a.rv.clone(),
        rv_column: a.rv_column.clone(),
        window,
        alpha: a.alpha,
        bias: a.bias,
        grid_points: a.grid.grid_points,
        grid_quantile: a.grid.grid_quantile,
        gas: a.pilot.gas_config()?,
    };
    let b = analyze_returns(&a.input.input, &cfg)?;
    prepare(&a.out.out)?;
    b.write_curves(&a.out.out.join("curves.csv"))?;
    let mut files = vec!["curves.csv"];
    let mut m = manifest(argv, "analyze", a.pilot.seed);
    m.set("window", window).set("alpha", a.alpha).set("hidden_nodes", b.hidden_nodes).set("m4eps", fmt_num(b.m4eps));
    if let Some(cov) = &b.coverage {
        b.write_coverage(&a.out.out.join("coverage.csv"))?;
        files.push("coverage.csv");
        for c in cov {
            m.set(&format!("coverage_{}", c.label), fmt_num(c.rate()));
        }
    }
    finish(m, &a.out.out, &files)
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, argv: &[OsString]) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => run_simulate(a, argv),
        Command::Estimate(a) => run_estimate(a, argv),
        Command::Bands(a) => run_bands(a, argv),
        Command::Symtest(a) => run_symtest(a, argv),
        Command::Nic(a) => run_nic(a, argv),
        Command::Mle(a) => run_mle(a, argv),
        Command::McIse(a) => run_mc_ise(a, argv),
        Command::McSym(a) => run_mc_sym(a, argv),
        Command::Analyze(a) => run_analyze(a, argv),
    }
}

/// Parses `argv` (including the program name), runs it and returns the exit status.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, &argv[1..]) {
        Ok(()) => EXIT_OK,
        Err(e @ GasError::Config(_)) => {
            eprintln!("gasvol: {e}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("gasvol: {e}");
            EXIT_FAILURE
        }
    }
}
