//! Monte Carlo estimation, exponent fits and the scans built from them.

mod arms;
mod estimate;
mod exponents;
mod fit;
mod iic;
mod kesten;
mod scales;
mod scans;

pub use arms::{arm_probability, arm_scan, scaling_relation, two_arm_ratios, RatioRow, ScalingRow};
pub use estimate::{mc_estimate, mc_samples, mc_try_estimate, Estimate};
pub use exponents::{
    exit_exponent_bound, kappa_bound, kappa_from_exit_bound, parse_rational, to_f64, KappaInputs, KappaMode, Variant,
};
pub use fit::{fit_exponent, ExponentFit};
pub use iic::{iic_sample, IicSample};
pub use kesten::{
    annulus_tiles, backbone_volume_stats, environment_stats, kesten_environment, kesten_trace, BackboneVolumeStats,
    EnvironmentStats, KestenEnvironment, KestenTrace, TailFraction,
};
pub use scales::{
    compute_q, correlation_length, crossing_probability, default_grid, iterated_log, log_star, scale_table,
    CorrelationLength, ScaleRow, ScaleTable, DEFAULT_EPS, P_TOLERANCE,
};
pub use scans::{
    chemical_distance_scan, environment_windows, exit_time_scan, walk_seed, DistanceRow, DistanceScan, ExitRow,
    ExitScan, HostKind, ScanSettings,
};
