//! Monte-Carlo experiments: scenario configuration, signal and noise draws,
//! SNR sweeps and their CSV tables.
//!
//! Every trial owns independent random streams derived from the scenario seed,
//! the trial index and (for noise) the SNR index. Signals are therefore shared
//! across SNR levels, and results do not depend on how trials are scheduled
//! across threads.

mod config;
mod runtime;
mod signal;
mod sweeps;
mod table;

pub use config::{Figure, MatrixKind, ScenarioConfig};
pub use runtime::{build_pool, thread_count, MosCache, THREADS_ENV};
pub use signal::{add_noise, min_support_gap, sample_signal, snr_to_variance};
pub use sweeps::{
    build_soe_design, run_guided_omp_sweep, run_soe_sweep, run_structure_cost_sweep,
    run_vander_comparison, simulate, vander_comparison_matrices, SweepOutput, TrialRecord,
    UNGUIDED_STEPS,
};
pub use table::Table;
