//! Config-driven runs, CSV output, growth fits and parameter sweeps.

mod config;
mod fit;
mod run;
mod sweep;

pub use config::{ExperimentConfig, InitialData};
pub use fit::{fit_growth, fit_growth_column, theorem_exponent, GrowthFit, GrowthModel};
pub use run::{csv_preamble, run_experiment, write_record};
pub use sweep::{parse_alpha_grid, parse_seed_range, run_sweep, sweep_file_name, SweepCell};
