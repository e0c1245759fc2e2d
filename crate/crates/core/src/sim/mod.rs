//! Type-1 error and power studies over the standard simulation sets.

mod calibrate;
mod config;
mod metrics;
mod output;
mod run;

pub use calibrate::{shift_for_effect_size, CALIBRATION_TOLERANCE, REFERENCE_SIZE};
pub use config::{
    ParentSpec, SetId, SimulationConfig, SkewDirection, DEFAULT_MC_REPLICATES, DEFAULT_PAIR_COUNT, MIN_PAIR_COUNT,
    SWEEP_REPLICATES,
};
pub use metrics::{band_half_width, binomial_band, cliff_d, excess_type1, power, rejection_count};
pub use output::{read_csv, write_csv, write_json, CSV_COLUMNS};
pub use run::{
    pair_seed, resolve_parents, run_simulation_set, Metric, PValueSet, ResolvedParents, ResultRow, SimulationResult,
    BAND_LEVEL,
};
