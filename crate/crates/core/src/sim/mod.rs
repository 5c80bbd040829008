//! Simulation harness: dependence settings, the four compared statistics,
//! power estimation and sweeps.

mod methods;
mod noise;
mod power;
mod settings;
mod sweep;

pub use methods::{prepare, response_kernel, run_method, Method, MethodConfig};
pub use noise::{default_noise, NoiseTable};
pub use power::{
    arm_statistics, count_rejections, dataset_seed, estimate_power, estimate_with_arms,
    method_seed, null_quantile, Arms, PowerReport,
};
pub use settings::{generate, Setting, SimSetting};
pub use sweep::{
    run_sweep, run_sweep_with_progress, SweepConfig, SweepOutcome, AVERAGES_FILE,
    BY_DIMENSION_FILE, JOURNAL_FILE, POWER_FILE,
};
