//! Experiment orchestration: configuration, execution and result files.
//!
//! A run writes `results.csv`, `summary.json` and `manifest.json` (plus
//! snapshots and plots when requested) into the output directory. Everything
//! except the manifest's wall time is a function of the configuration.

mod config;
mod output;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{
    arm_probability, arm_scan, backbone_volume_stats, chemical_distance_scan, correlation_length, environment_stats,
    exit_time_scan, fit_exponent, iic_sample, kappa_bound, kappa_from_exit_bound, kesten_environment, kesten_trace,
    scaling_relation, to_f64, two_arm_ratios, walk_seed, Estimate, ExponentFit, HostKind, KappaInputs,
    KestenEnvironment, ScanSettings,
};
use crate::invasion::{grow, StopRule};
use crate::lattice::BoxRegion;
use crate::percolation::ArmKind;
use crate::walk::default_cap;
use crate::weights::{derive_seed, WeightField, P_C};
use crate::{Error, Result};

pub use config::{Experiment, ExperimentConfig, OUT_ENV};
pub use output::{fmt_f64, gnuplot_script, svg_plot, write_csv, Manifest, Row, CSV_HEADER};

/// Results of an experiment before anything is written.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub fits: Vec<(String, ExponentFit)>,
    pub details: Value,
    pub failures: usize,
    /// Lines meant for standard output.
    pub stdout: Vec<String>,
    /// Extra files `(name, contents)` such as invasion snapshots.
    pub files: Vec<(String, Vec<u8>)>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub outcome: Outcome,
}

/// Validates, executes and persists an experiment.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let outcome = if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| execute(config))?
    } else {
        execute(config)?
    };
    let dir = config.output_dir();
    std::fs::create_dir_all(&dir)?;
    let mut outputs = vec!["results.csv".to_string(), "summary.json".to_string()];

    let mut csv = Vec::new();
    write_csv(&outcome.rows, &mut csv)?;
    std::fs::write(dir.join("results.csv"), csv)?;
    let fits: serde_json::Map<String, Value> =
        outcome.fits.iter().map(|(k, f)| (k.clone(), serde_json::to_value(f).unwrap_or(Value::Null))).collect();
    let summary = json!({ "experiment": config.experiment.name(), "fits": fits, "details": outcome.details });
    std::fs::write(dir.join("summary.json"), to_pretty(&summary)?)?;
    for (name, bytes) in &outcome.files {
        std::fs::write(dir.join(name), bytes)?;
        outputs.push(name.clone());
    }
    if config.plots && !outcome.fits.is_empty() {
        std::fs::write(dir.join("fits.gp"), gnuplot_script(&outcome.fits))?;
        outputs.push("fits.gp".into());
        for (name, fit) in &outcome.fits {
            let file = format!("fit-{name}.svg");
            std::fs::write(dir.join(&file), svg_plot(name, fit))?;
            outputs.push(file);
        }
    }
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        experiment: config.experiment.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        config: config.clone(),
        failures: outcome.failures,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs,
    };
    std::fs::write(dir.join("manifest.json"), to_pretty(&manifest)?)?;
    Ok(RunReport { dir, manifest, outcome })
}

fn to_pretty<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Serialization(e.to_string()))
}

/// Runs the experiment in memory.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let seed = config.seed;
    match &config.experiment {
        Experiment::Arms { kinds, radii, p, replicas } => arms(kinds, radii, *p, *replicas, seed),
        Experiment::Corrlen { ps, eps, grid, replicas, pi4_replicas } => {
            corrlen(ps, *eps, grid, *replicas, *pi4_replicas, seed)
        }
        Experiment::Invade { radius, clusters, stop, snapshots } => {
            invade(*radius, *clusters, stop.as_ref(), *snapshots, seed)
        }
        e @ Experiment::Chemdist { .. } => chemdist(&scan_settings(e, seed)),
        e @ Experiment::ExitScan { .. } => exit_scan(&scan_settings(e, seed)),
        Experiment::BackboneStats { m, qs, clusters, walks, cap, l0, rho_replicas, c_grid, stop } => {
            let p = BackboneParams {
                m: *m,
                qs,
                clusters: *clusters,
                walks: *walks,
                cap: *cap,
                l0: *l0,
                rho_replicas: *rho_replicas,
                c_grid,
                stop: stop.as_ref(),
            };
            backbone_stats(&p, seed)
        }
        Experiment::Kappa { eta1, eta2, variant, mode } => {
            kappa(KappaInputs::parse(eta1, eta2, *variant)?.with_mode(*mode), seed)
        }
        Experiment::Iic { l, n, samples, max_attempts } => iic(*l, *n, *samples, *max_attempts, seed),
    }
}

fn scan_settings(e: &Experiment, seed: u64) -> ScanSettings {
    match e {
        Experiment::Chemdist { radii, environments, stop } => {
            let mut s = ScanSettings::new(HostKind::Ipc, radii.clone(), *environments, 0, seed);
            s.stop = stop.clone();
            s
        }
        Experiment::ExitScan { host, radii, environments, walks, stop, cap, iic_factor, iic_max_attempts } => {
            let mut s = ScanSettings::new(*host, radii.clone(), *environments, *walks, seed);
            s.stop = stop.clone();
            s.cap = *cap;
            s.iic_factor = *iic_factor;
            s.iic_max_attempts = *iic_max_attempts;
            s
        }
        _ => unreachable!("not a scan experiment"),
    }
}

fn fit_of(points: &[(i64, f64)]) -> Option<ExponentFit> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(_, v)| v.is_finite() && *v > 0.0).map(|&(n, v)| (n as f64, v)).collect();
    fit_exponent(&pts).ok()
}

fn arms(kinds: &[ArmKind], radii: &[i64], p: f64, replicas: usize, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut ratios = Value::Null;
    for &kind in kinds {
        let scan = arm_scan(kind, radii, p, replicas, seed)?;
        for (n, e) in &scan {
            out.rows.push(Row::estimate(kind.name(), Some(*n), Some(p), e, seed));
        }
        let pts: Vec<(i64, f64)> = scan.iter().map(|(n, e)| (*n, e.mean)).collect();
        if let Some(f) = fit_of(&pts) {
            out.fits.push((kind.name().into(), f));
        }
        if kind == ArmKind::TwoArmBox {
            ratios = serde_json::to_value(two_arm_ratios(&scan)).unwrap_or(Value::Null);
        }
    }
    out.details = json!({ "two_arm_ratios": ratios });
    Ok(out)
}

fn corrlen(ps: &[f64], eps: f64, grid: &[i64], replicas: usize, pi4_replicas: usize, seed: u64) -> Result<Outcome> {
    let mut out = Outcome::default();
    let lengths = if pi4_replicas >= 2 {
        let rows = scaling_relation(ps, eps, grid, replicas, pi4_replicas, seed)?;
        for r in &rows {
            if let (Some(pi4), Some(prod), Some(l)) = (r.pi4, r.product, r.length.value) {
                out.rows.push(Row::estimate("pi4", Some(l), Some(P_C), &pi4, seed));
                out.rows.push(Row::estimate("scaling_product", Some(l), Some(r.p), &prod, seed));
            }
        }
        out.details = json!({ "scaling": rows });
        rows.into_iter().map(|r| r.length).collect::<Vec<_>>()
    } else {
        let v = ps.iter().map(|&p| correlation_length(p, eps, replicas, grid, seed)).collect::<Result<Vec<_>>>()?;
        out.details = json!({ "lengths": v });
        v
    };
    for c in &lengths {
        for (n, e) in &c.estimates {
            out.rows.push(Row::estimate("crossing", Some(*n), Some(c.p), e, seed));
        }
        let value = c.value.map_or(f64::NAN, |l| l as f64);
        out.rows.push(Row::value("correlation_length", c.value, Some(c.p), value, seed));
    }
    Ok(out)
}

fn invade(radius: i64, clusters: usize, stop: Option<&StopRule>, snapshots: bool, seed: u64) -> Result<Outcome> {
    let rule = stop.cloned().unwrap_or_else(|| StopRule::for_window(radius));
    let results: Vec<(u64, Result<_>)> = (0..clusters)
        .into_par_iter()
        .map(|c| {
            let env_seed = derive_seed(seed, c as u64);
            let r = grow(&WeightField::new(env_seed), &rule).and_then(|cl| {
                let window = cl.window(BoxRegion::centered(radius))?;
                let mut snap = Vec::new();
                if snapshots {
                    cl.write_snapshot(&mut snap)?;
                }
                Ok((cl.steps(), cl.reach(), cl.trace_stats().record_weights.len(), window, snap))
            });
            (env_seed, r)
        })
        .collect();
    let mut out = Outcome::default();
    for (c, (env_seed, r)) in results.into_iter().enumerate() {
        match r {
            Ok((steps, reach, outlets, window, snap)) => {
                out.rows.push(Row::value("steps", None, None, steps as f64, env_seed));
                out.rows.push(Row::value("reach", None, None, reach as f64, env_seed));
                out.rows.push(Row::value("outlets", None, None, outlets as f64, env_seed));
                out.rows.push(Row::value("window_sites", Some(radius), None, window.site_count() as f64, env_seed));
                out.rows.push(Row::value("window_edges", Some(radius), None, window.edge_count() as f64, env_seed));
                if snapshots {
                    out.files.push((format!("cluster-{c}.txt"), snap));
                }
            }
            Err(_) => out.failures += 1,
        }
    }
    out.details = json!({ "stop": rule });
    Ok(out)
}

fn chemdist(settings: &ScanSettings) -> Result<Outcome> {
    let scan = chemical_distance_scan(settings)?;
    let mut out = Outcome { failures: scan.failures, ..Default::default() };
    for r in &scan.rows {
        let d = r.distance.map_or(f64::NAN, |d| d as f64);
        out.rows.push(Row::value(
            "distance",
            Some(r.n),
            None,
            d,
            derive_seed(settings.master_seed, r.environment as u64),
        ));
    }
    for &n in &settings.radii {
        let v: Vec<f64> = scan.rows.iter().filter(|r| r.n == n).filter_map(|r| r.distance.map(f64::from)).collect();
        if let Ok(e) = Estimate::from_samples(&v) {
            out.rows.push(Row::estimate("mean_distance", Some(n), None, &e, settings.master_seed));
        }
    }
    if let Some(f) = scan.fit.clone() {
        out.fits.push(("distance".into(), f));
    }
    out.details = json!({ "settings": settings });
    Ok(out)
}

fn exit_scan(settings: &ScanSettings) -> Result<Outcome> {
    let scan = exit_time_scan(settings)?;
    let mut out = Outcome { failures: scan.failures, ..Default::default() };
    for r in &scan.rows {
        let s = derive_seed(settings.master_seed, r.environment as u64);
        out.rows.push(Row { replicas: r.walks - r.capped, ..Row::value("mean_tau", Some(r.n), None, r.mean_tau, s) });
        out.rows.push(Row { replicas: r.walks, ..Row::value("capped", Some(r.n), None, r.capped as f64, s) });
    }
    if let Some(f) = scan.fit.clone() {
        out.fits.push(("exit_time".into(), f));
    }
    out.details = json!({ "settings": settings });
    Ok(out)
}

struct BackboneParams<'a> {
    m: i64,
    qs: &'a [i64],
    clusters: usize,
    walks: usize,
    cap: Option<u64>,
    l0: f64,
    rho_replicas: usize,
    c_grid: &'a [f64],
    stop: Option<&'a StopRule>,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        f64::NAN
    } else {
        hits as f64 / total as f64
    }
}

fn backbone_stats(p: &BackboneParams, seed: u64) -> Result<Outcome> {
    let n = 3 * p.m;
    let built: Vec<Result<(u64, KestenEnvironment)>> = (0..p.clusters)
        .into_par_iter()
        .map(|c| {
            let env_seed = derive_seed(seed, c as u64);
            Ok((env_seed, kesten_environment(p.m, env_seed, p.stop)?))
        })
        .collect();
    let mut out = Outcome::default();
    let mut envs = Vec::new();
    for b in built {
        match b {
            Ok(e) => envs.push(e),
            Err(_) => out.failures += 1,
        }
    }
    if envs.is_empty() {
        return Err(Error::InvalidArgument("no environment could be built".into()));
    }
    let rho_seed = derive_seed(seed, u64::MAX);
    let rho_n = arm_probability(ArmKind::TwoArmBox, n, P_C, p.rho_replicas, rho_seed)?;
    out.rows.push(Row::estimate("rho", Some(n), Some(P_C), &rho_n, rho_seed));
    let cap = p.cap.unwrap_or_else(|| default_cap(n));
    let just_envs: Vec<KestenEnvironment> = envs.iter().map(|(_, e)| e.clone()).collect();
    let mut per_q = Vec::new();
    for &q in p.qs {
        let rho_q = arm_probability(ArmKind::TwoArmBox, q, P_C, p.rho_replicas, rho_seed)?;
        out.rows.push(Row::estimate("rho", Some(q), Some(P_C), &rho_q, rho_seed));
        let vol = backbone_volume_stats(&just_envs, q, rho_q.mean, rho_n.mean, p.c_grid)?;
        for t in &vol.tail {
            out.rows.push(Row {
                replicas: vol.boxes,
                ..Row::value(format!("tail_fraction_c{}", t.c), Some(q), None, t.per_box, seed)
            });
        }
        out.rows.push(Row::value("backbone_box_mean", Some(q), None, vol.mean_box, seed));
        out.rows.push(Row::value("backbone_box_max", Some(q), None, vol.max_box as f64, seed));

        let jobs: Vec<(usize, u64)> = (0..envs.len()).flat_map(|i| (0..p.walks).map(move |w| (i, w as u64))).collect();
        let traces: Vec<Result<Option<_>>> = jobs
            .par_iter()
            .map(|&(i, w)| kesten_trace(&envs[i].1, q, walk_seed(envs[i].0, w), cap, Some(p.l0)))
            .collect();
        let mut done = Vec::new();
        for t in traces {
            match t {
                Ok(Some(t)) => done.push(t),
                Ok(None) | Err(_) => out.failures += 1,
            }
        }
        let decided: Vec<bool> = done.iter().filter_map(|t| t.holds).collect();
        let holds = decided.iter().filter(|&&h| h).count();
        out.rows.push(Row {
            replicas: decided.len(),
            ..Row::value("kesten_holds_fraction", Some(q), None, fraction(holds, decided.len()), seed)
        });
        let ratios: Vec<f64> = done.iter().filter_map(|t| t.volume_ratio).collect();
        out.rows.push(Row {
            replicas: ratios.len(),
            ..Row::value("volume_ratio_median", Some(q), None, median(ratios), seed)
        });
        let events: Vec<_> = done.iter().filter_map(|t| t.events).collect();
        let w2 = events.iter().filter(|e| e.w2_holds()).count();
        let w3 = events.iter().filter(|e| e.w3_holds()).count();
        for (name, k) in [("w2_hold_fraction", w2), ("w3_hold_fraction", w3)] {
            out.rows.push(Row {
                replicas: events.len(),
                ..Row::value(name, Some(q), None, fraction(k, events.len()), seed)
            });
        }

        let stats = just_envs.par_iter().map(|e| environment_stats(e, q)).collect::<Result<Vec<_>>>()?;
        let e3: Vec<f64> = stats.iter().filter_map(|s| s.e3_min_crossing_volume.map(|v| v as f64)).collect();
        if let Ok(e) = Estimate::from_samples(&e3) {
            out.rows.push(Row::estimate("e3_min_crossing_volume", Some(q), None, &e, seed));
        }
        let e2: Vec<f64> = stats.iter().map(|s| s.e2_max_backbone as f64).collect();
        if let Ok(e) = Estimate::from_samples(&e2) {
            out.rows.push(Row::estimate("e2_max_backbone", Some(q), None, &e, seed));
        }
        if per_q.is_empty() {
            let e1: Vec<f64> = stats.iter().filter_map(|s| s.e1_distance.map(f64::from)).collect();
            if let Ok(e) = Estimate::from_samples(&e1) {
                out.rows.push(Row::estimate("e1_distance", Some(n), None, &e, seed));
            }
            if let Ok(e) = Estimate::from_samples(&vol.total_ratios) {
                out.rows.push(Row::estimate("backbone_total_ratio", Some(n), None, &e, seed));
            }
        }
        per_q.push(json!({ "q": q, "volume": vol, "traces": done }));
    }
    out.details = json!({ "m": p.m, "n": n, "per_q": per_q });
    Ok(out)
}

fn kappa(input: KappaInputs, seed: u64) -> Result<Outcome> {
    let k = kappa_bound(&input)?;
    let exit = kappa_from_exit_bound(&input).ok();
    let mut out = Outcome::default();
    out.stdout.push(k.to_string());
    out.rows.push(Row::value("kappa", None, None, to_f64(&k), seed));
    if let Some(e) = &exit {
        out.rows.push(Row::value("kappa_exit_form", None, None, to_f64(e), seed));
    }
    out.details = json!({
        "eta1": input.eta1.to_string(),
        "eta2": input.eta2.to_string(),
        "variant": input.variant,
        "mode": input.mode,
        "kappa": k.to_string(),
        "kappa_exit_form": exit.map(|e| e.to_string()),
        "provenance": "supplied exponents",
    });
    Ok(out)
}

fn iic(l: i64, n: i64, samples: usize, max_attempts: u64, seed: u64) -> Result<Outcome> {
    let results: Vec<Result<_>> =
        (0..samples).into_par_iter().map(|s| iic_sample(l, n, max_attempts, derive_seed(seed, s as u64))).collect();
    let mut out = Outcome::default();
    let mut attempts = 0u64;
    let mut accepted = 0usize;
    for r in results {
        match r {
            Ok(s) => {
                attempts += s.attempts;
                accepted += 1;
                out.rows.push(Row::value("attempts", Some(l), Some(P_C), s.attempts as f64, s.field_seed));
                out.rows.push(Row::value(
                    "window_sites",
                    Some(n),
                    Some(P_C),
                    s.window.site_count() as f64,
                    s.field_seed,
                ));
            }
            Err(_) => {
                attempts += max_attempts;
                out.failures += 1;
            }
        }
    }
    let rate = fraction(accepted, attempts as usize);
    out.rows.push(Row { replicas: accepted, ..Row::value("acceptance_rate", Some(l), Some(P_C), rate, seed) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_prints_exact_value() {
        let cfg = ExperimentConfig::new(Experiment::Kappa {
            eta1: "5/48".into(),
            eta2: "17/48".into(),
            variant: crate::analysis::Variant::Hexagonal,
            mode: Default::default(),
        });
        let o = execute(&cfg).unwrap();
        assert_eq!(o.stdout, vec!["17/384".to_string()]);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(vec![]).is_nan());
    }
}
