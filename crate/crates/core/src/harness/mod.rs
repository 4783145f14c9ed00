//! Monte Carlo experiments and the real-data workflow.

mod analyze;
mod experiment;

pub use analyze::{analyze_returns, analyze_series, AnalysisBundle, AnalyzeConfig, BandCoverage};
pub use experiment::{
    garch_truth_table, run_ise_experiment, run_symmetry_experiment, EstimatorKind, Exclusion, ExperimentConfig,
    IseRow, IseSummary, SymmetryRow, SymmetrySummary, write_exclusions, MAX_EXCLUDED_FRACTION,
};
