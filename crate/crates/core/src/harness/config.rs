use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{default_grid, HostKind, KappaMode, Variant, DEFAULT_EPS};
use crate::invasion::StopRule;
use crate::percolation::ArmKind;
use crate::weights::P_C;
use crate::{Error, Result};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "PERCOLAB_OUT";

/// A complete experiment description. Every field has an explicit default so
/// the echoed configuration is self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    /// Output directory; falls back to `$PERCOLAB_OUT`, then `percolab-out`.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 means one per available core.
    #[serde(default)]
    pub threads: usize,
    /// Also emit a gnuplot script and SVG plots of the fits.
    #[serde(default)]
    pub plots: bool,
    pub experiment: Experiment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Experiment {
    Arms {
        #[serde(default = "all_arm_kinds")]
        kinds: Vec<ArmKind>,
        radii: Vec<i64>,
        #[serde(default = "p_c")]
        p: f64,
        #[serde(default = "replicas")]
        replicas: usize,
    },
    Corrlen {
        ps: Vec<f64>,
        #[serde(default = "eps")]
        eps: f64,
        #[serde(default = "default_grid")]
        grid: Vec<i64>,
        #[serde(default = "replicas")]
        replicas: usize,
        /// Replicas for `π̂₄(L̂)`; 0 skips the scaling relation.
        #[serde(default = "replicas")]
        pi4_replicas: usize,
    },
    Invade {
        radius: i64,
        #[serde(default = "one")]
        clusters: usize,
        #[serde(default)]
        stop: Option<StopRule>,
        #[serde(default = "yes")]
        snapshots: bool,
    },
    Chemdist {
        radii: Vec<i64>,
        #[serde(default = "environments")]
        environments: usize,
        #[serde(default)]
        stop: Option<StopRule>,
    },
    ExitScan {
        #[serde(default = "ipc")]
        host: HostKind,
        radii: Vec<i64>,
        #[serde(default = "environments")]
        environments: usize,
        #[serde(default = "walks")]
        walks: usize,
        #[serde(default)]
        stop: Option<StopRule>,
        #[serde(default)]
        cap: Option<u64>,
        #[serde(default = "iic_factor")]
        iic_factor: i64,
        #[serde(default = "max_attempts")]
        iic_max_attempts: u64,
    },
    BackboneStats {
        /// Inner radius; the outer radius is `3m`.
        m: i64,
        #[serde(default = "tile_sizes")]
        qs: Vec<i64>,
        #[serde(default = "clusters")]
        clusters: usize,
        #[serde(default = "one")]
        walks: usize,
        #[serde(default)]
        cap: Option<u64>,
        #[serde(default = "l0")]
        l0: f64,
        #[serde(default = "replicas")]
        rho_replicas: usize,
        #[serde(default = "c_grid")]
        c_grid: Vec<f64>,
        #[serde(default)]
        stop: Option<StopRule>,
    },
    Kappa {
        eta1: String,
        eta2: String,
        #[serde(default = "hexagonal")]
        variant: Variant,
        #[serde(default)]
        mode: KappaMode,
    },
    Iic {
        l: i64,
        n: i64,
        #[serde(default = "samples")]
        samples: usize,
        #[serde(default = "max_attempts")]
        max_attempts: u64,
    },
}

fn all_arm_kinds() -> Vec<ArmKind> {
    ArmKind::ALL.to_vec()
}
fn p_c() -> f64 {
    P_C
}
fn eps() -> f64 {
    DEFAULT_EPS
}
fn replicas() -> usize {
    1000
}
fn one() -> usize {
    1
}
fn yes() -> bool {
    true
}
fn environments() -> usize {
    20
}
fn walks() -> usize {
    20
}
fn ipc() -> HostKind {
    HostKind::Ipc
}
fn iic_factor() -> i64 {
    2
}
fn max_attempts() -> u64 {
    1_000_000
}
fn tile_sizes() -> Vec<i64> {
    vec![4, 8, 16]
}
fn clusters() -> usize {
    50
}
fn l0() -> f64 {
    1.0
}
fn c_grid() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0, 20.0]
}
fn hexagonal() -> Variant {
    Variant::Hexagonal
}
fn samples() -> usize {
    10
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Arms { .. } => "arms",
            Experiment::Corrlen { .. } => "corrlen",
            Experiment::Invade { .. } => "invade",
            Experiment::Chemdist { .. } => "chemdist",
            Experiment::ExitScan { .. } => "exit-scan",
            Experiment::BackboneStats { .. } => "backbone-stats",
            Experiment::Kappa { .. } => "kappa",
            Experiment::Iic { .. } => "iic",
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig { seed: 0, output: None, threads: 0, plots: false, experiment }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Output directory after applying the environment fallback.
    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("percolab-out"))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        let radii_ok = |r: &[i64]| !r.is_empty() && r.iter().all(|&n| n >= 1);
        match &self.experiment {
            Experiment::Arms { kinds, radii, p, replicas } => {
                if kinds.is_empty() || !radii_ok(radii) {
                    return bad("arms needs at least one kind and radii >= 1".into());
                }
                if !(0.0..=1.0).contains(p) || *replicas < 2 {
                    return bad(format!("arms needs p in [0,1] and >= 2 replicas, got p={p}, replicas={replicas}"));
                }
            }
            Experiment::Corrlen { ps, eps, grid, replicas, .. } => {
                if ps.is_empty() || ps.iter().any(|&p| !(p > P_C && p <= 1.0)) {
                    return bad("corrlen needs p values in (1/2, 1]".into());
                }
                if !(*eps > 0.0 && *eps < 1.0) || !radii_ok(grid) || *replicas < 2 {
                    return bad("corrlen needs eps in (0,1), a positive grid and >= 2 replicas".into());
                }
            }
            Experiment::Invade { radius, clusters, stop, .. } => {
                if *radius < 1 || *clusters == 0 {
                    return bad("invade needs radius >= 1 and at least one cluster".into());
                }
                if let Some(s) = stop {
                    if !s.is_bounded() {
                        return Err(Error::UnboundedStopRule(s.to_compact()));
                    }
                }
            }
            Experiment::Chemdist { radii, environments, .. } => {
                if !radii_ok(radii) || *environments == 0 {
                    return bad("chemdist needs radii >= 1 and at least one environment".into());
                }
            }
            Experiment::ExitScan { radii, environments, walks, .. } => {
                if !radii_ok(radii) || *environments == 0 || *walks == 0 {
                    return bad("exit-scan needs radii >= 1, environments and walks".into());
                }
            }
            Experiment::BackboneStats { m, qs, clusters, walks, rho_replicas, .. } => {
                if *m < 1 || qs.is_empty() || qs.iter().any(|&q| q < 2) || *clusters == 0 || *walks == 0 {
                    return bad("backbone-stats needs m >= 1, tile sizes >= 2, clusters and walks".into());
                }
                if *rho_replicas < 2 {
                    return bad("backbone-stats needs >= 2 two-arm replicas".into());
                }
            }
            Experiment::Kappa { .. } => {}
            Experiment::Iic { l, n, samples, .. } => {
                if *n < 1 || l < n || *samples == 0 {
                    return bad(format!("iic needs 1 <= n <= l and samples > 0, got l={l}, n={n}"));
                }
            }
        }
        Ok(())
    }
}
