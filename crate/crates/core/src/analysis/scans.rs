use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_exponent, ExponentFit};
use super::iic::iic_sample;
use crate::invasion::{grow, StopRule};
use crate::lattice::{BoxRegion, Site, ORIGIN};
use crate::metrics::chemical_distance;
use crate::percolation::open_subgraph;
use crate::subgraph::SiteSubgraph;
use crate::walk::{default_cap, exit_time_only};
use crate::weights::{derive_seed, WeightField};
use crate::{Error, Result};

/// Seed of walk `w` in environment `env_seed`, kept apart from the
/// environment's own stream.
pub fn walk_seed(env_seed: u64, w: u64) -> u64 {
    derive_seed(env_seed ^ 0x9e6c_63d0_676a_9a99, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostKind {
    FullLattice,
    Ipc,
    Iic,
}

impl std::str::FromStr for HostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full-lattice" | "full" => Ok(HostKind::FullLattice),
            "ipc" => Ok(HostKind::Ipc),
            "iic" => Ok(HostKind::Iic),
            _ => Err(Error::InvalidArgument(format!("unknown host `{s}`"))),
        }
    }
}

impl std::fmt::Display for HostKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HostKind::FullLattice => "full-lattice",
            HostKind::Ipc => "ipc",
            HostKind::Iic => "iic",
        })
    }
}

/// Settings shared by the exit-time and chemical-distance scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSettings {
    pub host: HostKind,
    pub radii: Vec<i64>,
    pub environments: usize,
    pub walks: usize,
    pub master_seed: u64,
    /// Invasion stop rule; defaults to the window rule for the largest radius.
    pub stop: Option<StopRule>,
    /// Step cap per walk; defaults to `64 n^4`.
    pub cap: Option<u64>,
    /// Conditioning radius for IIC hosts, as a multiple of the largest radius.
    pub iic_factor: i64,
    pub iic_max_attempts: u64,
}

impl ScanSettings {
    pub fn new(host: HostKind, radii: Vec<i64>, environments: usize, walks: usize, master_seed: u64) -> Self {
        ScanSettings {
            host,
            radii,
            environments,
            walks,
            master_seed,
            stop: None,
            cap: None,
            iic_factor: 2,
            iic_max_attempts: 1_000_000,
        }
    }

    fn max_radius(&self) -> Result<i64> {
        let n = self.radii.iter().copied().max().ok_or_else(|| Error::InvalidArgument("empty radius list".into()))?;
        if self.radii.iter().any(|&r| r < 1) {
            return Err(Error::InvalidArgument("radii must be >= 1".into()));
        }
        Ok(n)
    }
}

/// Windows `Λ(n)` of one environment for each requested radius.
pub fn environment_windows(settings: &ScanSettings, env_seed: u64) -> Result<Vec<SiteSubgraph>> {
    let nmax = settings.max_radius()?;
    match settings.host {
        HostKind::FullLattice => settings
            .radii
            .iter()
            .map(|&n| open_subgraph(&WeightField::new(env_seed), 1.0, BoxRegion::centered(n).into()))
            .collect(),
        HostKind::Ipc => {
            let stop = settings.stop.clone().unwrap_or_else(|| StopRule::for_window(nmax));
            let cluster = grow(&WeightField::new(env_seed), &stop)?;
            settings.radii.iter().map(|&n| cluster.window(BoxRegion::centered(n))).collect()
        }
        HostKind::Iic => {
            let l = settings.iic_factor.max(1) * nmax;
            let sample = iic_sample(l, nmax, settings.iic_max_attempts, env_seed)?;
            Ok(settings
                .radii
                .iter()
                .map(|&n| {
                    let bx = BoxRegion::centered(n);
                    sample.window.restrict(|s| bx.contains(s))
                })
                .collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitRow {
    pub n: i64,
    pub environment: usize,
    /// Mean exit time over the walks that finished.
    pub mean_tau: f64,
    pub walks: usize,
    pub capped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitScan {
    pub rows: Vec<ExitRow>,
    /// Pooled fit of `log2 mean_tau` against `log2 n` over all environments.
    pub fit: Option<ExponentFit>,
    pub failures: usize,
}

/// Quenched exit times: for each environment, the mean of `τ(n)` over
/// independent walks.
pub fn exit_time_scan(settings: &ScanSettings) -> Result<ExitScan> {
    settings.max_radius()?;
    let per_env: Vec<Result<Vec<ExitRow>>> = (0..settings.environments)
        .into_par_iter()
        .map(|e| {
            let env_seed = derive_seed(settings.master_seed, e as u64);
            let windows = environment_windows(settings, env_seed)?;
            let mut rows = Vec::new();
            for (&n, g) in settings.radii.iter().zip(&windows) {
                let cap = settings.cap.unwrap_or_else(|| default_cap(n));
                let mut sum = 0.0;
                let (mut done, mut capped) = (0usize, 0usize);
                for w in 0..settings.walks {
                    let t = exit_time_only(g, ORIGIN, n, walk_seed(env_seed, w as u64), cap)?;
                    if t.capped {
                        capped += 1;
                    } else {
                        sum += t.tau as f64;
                        done += 1;
                    }
                }
                let mean_tau = if done > 0 { sum / done as f64 } else { f64::NAN };
                rows.push(ExitRow { n, environment: e, mean_tau, walks: settings.walks, capped });
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = 0;
    for r in per_env {
        match r {
            Ok(v) => rows.extend(v),
            Err(_) => failures += 1,
        }
    }
    let points: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.mean_tau.is_finite() && r.mean_tau > 0.0).map(|r| (r.n as f64, r.mean_tau)).collect();
    let fit = fit_exponent(&points).ok();
    Ok(ExitScan { rows, fit, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub n: i64,
    pub environment: usize,
    /// `dist_{Λ(n)}(0, ∂S(n))`, `None` if the window does not connect them.
    pub distance: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceScan {
    pub rows: Vec<DistanceRow>,
    pub fit: Option<ExponentFit>,
    pub failures: usize,
}

pub fn chemical_distance_scan(settings: &ScanSettings) -> Result<DistanceScan> {
    settings.max_radius()?;
    let per_env: Vec<Result<Vec<DistanceRow>>> = (0..settings.environments)
        .into_par_iter()
        .map(|e| {
            let env_seed = derive_seed(settings.master_seed, e as u64);
            let windows = environment_windows(settings, env_seed)?;
            Ok(settings
                .radii
                .iter()
                .zip(&windows)
                .map(|(&n, g)| {
                    let bx = BoxRegion::centered(n);
                    let boundary: Vec<Site> = g.sites().iter().copied().filter(|&s| bx.on_boundary(s)).collect();
                    DistanceRow { n, environment: e, distance: chemical_distance(g, &[ORIGIN], &boundary) }
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = 0;
    for r in per_env {
        match r {
            Ok(v) => rows.extend(v),
            Err(_) => failures += 1,
        }
    }
    let points: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.distance.map(|d| (r.n as f64, d as f64))).collect();
    let fit = fit_exponent(&points).ok();
    Ok(DistanceScan { rows, fit, failures })
}
