//! Declarative experiments: configuration, seed fan-out, parallel execution,
//! persisted curves and manifests, CS summaries and dispersion reports.

mod config;
mod dispersion;
mod experiment;
mod seeds;
mod summary;

pub use config::{load_config, AlgorithmEntry, EngineKind, ExperimentConfig, FunctionEntry, SamplerSpec};
pub use dispersion::{dispersion_report, DispersionRow};
pub use experiment::{MANIFEST_FILE, TIMINGS_FILE,
    load_results, replay_run, run_experiment, FunctionRecord, Manifest, ResultSet, RunEntry, RunStatus,
};
pub use seeds::{derive_seed, RunSeeds};
pub use summary::{SUMMARY_FILE,read_summary, summarize, write_summary, CellSummary, Summary, ToleranceReport};
