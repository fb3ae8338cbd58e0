//! Acceptance checks. Runs as a plain binary so every criterion prints its
//! verdict line; pass criterion numbers as arguments to run a subset.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::exact_exit_time;
use num_rational::BigRational;
use percolab::analysis::{
    arm_probability, arm_scan, chemical_distance_scan, correlation_length, default_grid, exit_exponent_bound,
    exit_time_scan, iic_sample, kappa_bound, kappa_from_exit_bound, kesten_environment, kesten_trace, parse_rational,
    scaling_relation, two_arm_ratios, walk_seed, Estimate, ExponentFit, HostKind, KappaInputs, KappaMode,
    KestenEnvironment, ScanSettings, Variant,
};
use percolab::harness::{run, Experiment, ExperimentConfig, Manifest};
use percolab::metrics::{backbone, backbone_flow_oracle, BackboneQuery};
use percolab::percolation::{open_subgraph, ArmKind};
use percolab::walk::{annulus_walk, default_cap, degree_ratio_range, exit_time_only, local_times, reentry_violations};
use percolab::weights::derive_seed;
use percolab::{BoxRegion, SiteSubgraph, WeightField, ORIGIN, P_C};

const SEED: u64 = 20_240_601;
const PS: [f64; 5] = [0.52, 0.54, 0.56, 0.58, 0.60];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn fit_text(f: &ExponentFit) -> String {
    format!("slope {:.3} ci95 [{:.3}, {:.3}] width {:.3}", f.slope, f.ci95.0, f.ci95.1, f.ci_width())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

fn exact_combinatorics() -> Verdict {
    let two = arm_probability(ArmKind::TwoArmBox, 1, P_C, 100_000, SEED).unwrap();
    let one = arm_probability(ArmKind::OneArmBox, 1, P_C, 100_000, SEED).unwrap();
    verdict(
        two.within(11.0 / 16.0, 3.0) && one.within(15.0 / 16.0, 3.0),
        format!(
            "two-arm {:.5}±{:.5} vs 0.6875, one-arm {:.5}±{:.5} vs 0.9375",
            two.mean, two.stderr, one.mean, one.stderr
        ),
    )
}

fn backbone_correctness() -> Verdict {
    let (mut graphs, mut mismatches, mut nonempty) = (0, 0, 0);
    for (k, &p) in [0.4, 0.5, 0.6].iter().enumerate() {
        for i in 0..200u64 {
            let f = WeightField::new(derive_seed(SEED + k as u64, i));
            let g = open_subgraph(&f, p, BoxRegion::centered(8).into()).unwrap();
            let q = BackboneQuery::origin_to_boundary(&g, 8);
            let fast = backbone(&g, &q).unwrap();
            nonempty += usize::from(!fast.is_empty());
            for &x in g.sites() {
                if backbone_flow_oracle(&g, &q, x).unwrap() != fast.contains(&x) {
                    mismatches += 1;
                }
            }
            graphs += 1;
        }
    }
    verdict(mismatches == 0, format!("{graphs} subgraphs ({nonempty} with a backbone), {mismatches} mismatched sites"))
}

fn full_box(n: i64) -> SiteSubgraph {
    open_subgraph(&WeightField::new(0), 1.0, BoxRegion::centered(n).into()).unwrap()
}

fn exit_time_oracle() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    let g1 = full_box(1);
    let ones = (0..1000).all(|w| exit_time_only(&g1, ORIGIN, 1, derive_seed(SEED, w), 10).unwrap().tau == 1);
    pass &= ones;
    parts.push(format!("tau(1)=1 on 1000 walks: {ones}"));
    for n in [2, 4, 8] {
        let g = full_box(n);
        let taus: Vec<f64> = (0..20_000)
            .map(|w| exit_time_only(&g, ORIGIN, n, derive_seed(SEED ^ n as u64, w), default_cap(n)).unwrap().tau as f64)
            .collect();
        let e = Estimate::from_samples(&taus).unwrap();
        let exact = exact_exit_time(n);
        pass &= e.within(exact, 3.0);
        parts.push(format!("n={n}: {:.3}±{:.3} vs {exact:.4}", e.mean, e.stderr));
    }
    verdict(pass, parts.join(", "))
}

fn subdiffusivity() -> Verdict {
    let radii = vec![8, 16, 32, 64];
    let ipc = exit_time_scan(&ScanSettings::new(HostKind::Ipc, radii.clone(), 40, 50, SEED)).unwrap();
    let full = exit_time_scan(&ScanSettings::new(HostKind::FullLattice, radii, 40, 50, SEED)).unwrap();
    let (Some(a), Some(b)) = (ipc.fit, full.fit) else {
        return verdict(false, "a fit could not be computed");
    };
    let pass = a.slope >= 2.2 && (1.9..=2.1).contains(&b.slope) && a.ci_width() < 0.3 && b.ci_width() < 0.3;
    verdict(pass, format!("IPC {} ({} failed envs), full lattice {}", fit_text(&a), ipc.failures, fit_text(&b)))
}

fn chemical_distance() -> Verdict {
    let scan = chemical_distance_scan(&ScanSettings::new(HostKind::Ipc, vec![16, 32, 64, 128], 50, 1, SEED)).unwrap();
    let Some(f) = scan.fit else {
        return verdict(false, "no fit");
    };
    verdict(f.slope > 1.0 && f.ci95.0 > 1.0, format!("{} ({} failed envs)", fit_text(&f), scan.failures))
}

fn correlation_monotone() -> Verdict {
    let grid = default_grid();
    let lengths: Vec<Option<i64>> =
        PS.iter().map(|&p| correlation_length(p, 0.02, 400, &grid, SEED).unwrap().value).collect();
    let mut pass = lengths.iter().all(Option::is_some);
    let l: Vec<i64> = lengths.iter().flatten().copied().collect();
    pass &= l.windows(2).all(|w| w[1] <= w[0]) && l.windows(2).any(|w| w[1] < w[0]);
    verdict(pass, format!("L(p) over {PS:?}: {lengths:?}"))
}

fn scaling() -> Verdict {
    let rows = scaling_relation(&PS, 0.02, &default_grid(), 400, 100_000, SEED).unwrap();
    let products: Vec<f64> = rows.iter().filter_map(|r| r.product.map(|e| e.mean)).collect();
    if products.len() != PS.len() {
        return verdict(false, "some L(p) exceeded the grid");
    }
    let m = median(products.clone());
    let pass = products.iter().all(|&x| x > 0.0 && x <= 4.0 * m && x >= m / 4.0);
    let shown: Vec<String> = products.iter().map(|x| format!("{x:.3}")).collect();
    verdict(pass, format!("products [{}], median {m:.3}", shown.join(", ")))
}

fn two_arm_ratio() -> Verdict {
    let scan = arm_scan(ArmKind::TwoArmBox, &[4, 6, 8, 11, 16, 23, 32], P_C, 100_000, SEED).unwrap();
    let ratios = two_arm_ratios(&scan);
    let worst = ratios.iter().min_by(|a, b| a.normalized.mean.total_cmp(&b.normalized.mean)).unwrap();
    verdict(
        worst.normalized.mean >= 0.2,
        format!("{} pairs, minimum {:.3} at (r, s) = ({}, {})", ratios.len(), worst.normalized.mean, worst.r, worst.s),
    )
}

fn environments(m: i64, count: usize, master: u64) -> Vec<(u64, KestenEnvironment)> {
    (0..count)
        .filter_map(|c| {
            let s = derive_seed(master, c as u64);
            kesten_environment(m, s, None).ok().map(|e| (s, e))
        })
        .collect()
}

fn kesten() -> Verdict {
    let m = 16;
    let envs = environments(m, 50, SEED);
    let cap = default_cap(3 * m);
    let mut medians = Vec::new();
    let (mut decided, mut holds) = (0, 0);
    for q in [4, 8, 16] {
        let mut ratios = Vec::new();
        for (s, env) in &envs {
            if let Some(t) = kesten_trace(env, q, walk_seed(*s, 0), cap, None).unwrap() {
                ratios.extend(t.volume_ratio);
                if let Some(h) = t.holds {
                    decided += 1;
                    holds += usize::from(h);
                }
            }
        }
        medians.push(median(ratios));
    }
    let trend = medians.windows(2).all(|w| w[0] <= w[1]);
    verdict(
        trend && decided > 0 && holds == decided,
        format!(
            "{} clusters, medians q=4,8,16: {:.3}, {:.3}, {:.3}; inequality held on {holds}/{decided} traces",
            envs.len(),
            medians[0],
            medians[1],
            medians[2]
        ),
    )
}

fn exact_arithmetic() -> Verdict {
    let r = |s: &str| parse_rational(s).unwrap();
    let input = KappaInputs::parse("5/48", "17/48", Variant::Hexagonal).unwrap();
    let k = kappa_bound(&input).unwrap();
    let k_low = kappa_bound(&input.clone().with_mode(KappaMode::Eta2LowerBound)).unwrap();
    let k_exit = kappa_from_exit_bound(&input).unwrap();
    let s2: BigRational = r("2") - r("17/48");
    let exit = exit_exponent_bound(&r("1"), &s2, &input).unwrap();
    let pass = k == r("17/384") && k_low == r("5/384") && k_exit == r("17/316") && exit == r("649/316");
    verdict(pass, format!("kappa {k}, eta2-lower-bound {k_low}, exit form {k_exit} (exit exponent {exit})"))
}

fn walk_invariants() -> Verdict {
    let m = 8;
    let envs = environments(m, 20, SEED ^ 0x11);
    let (mut traces, mut ledgers, mut bad_ledgers, mut reentry) = (0, 0, 0, 0);
    let mut hosts: Vec<SiteSubgraph> = Vec::new();
    for (s, env) in &envs {
        for w in 0..5 {
            let walk = annulus_walk(&env.lambda, m, walk_seed(*s, w), default_cap(3 * m)).unwrap();
            if walk.sigma_star().is_none() {
                continue;
            }
            traces += 1;
            reentry += reentry_violations(&walk.segment, &env.backbone);
            let last = walk.segment.len() as u64 - 1;
            for k in [0, last / 2, last] {
                ledgers += 1;
                bad_ledgers += usize::from(local_times(&walk.segment, k).unwrap().total() != k + 1);
            }
        }
        hosts.push(env.lambda.clone());
        hosts.push(env.gamma.clone());
    }
    hosts.push(full_box(16));
    for i in 0..5 {
        hosts.push(iic_sample(16, 8, 1_000_000, derive_seed(SEED, 900 + i)).unwrap().window);
    }
    let bad_hosts =
        hosts.iter().filter(|g| degree_ratio_range(g).is_some_and(|(lo, hi)| lo < 0.25 || hi > 4.0)).count();
    verdict(
        traces > 0 && bad_ledgers == 0 && reentry == 0 && bad_hosts == 0,
        format!(
            "{ledgers} ledgers ({bad_ledgers} bad), {traces} traces ({reentry} re-entry violations), {} hosts ({bad_hosts} out of ratio)",
            hosts.len()
        ),
    )
}

fn determinism() -> Verdict {
    let experiments = vec![
        Experiment::Arms { kinds: ArmKind::ALL.to_vec(), radii: vec![2, 4], p: P_C, replicas: 300 },
        Experiment::Corrlen { ps: vec![0.6], eps: 0.1, grid: vec![2, 4, 8, 16], replicas: 100, pi4_replicas: 200 },
        Experiment::Invade { radius: 8, clusters: 3, stop: None, snapshots: true },
        Experiment::Chemdist { radii: vec![4, 8], environments: 4, stop: None },
        Experiment::ExitScan {
            host: HostKind::Ipc,
            radii: vec![4, 8],
            environments: 4,
            walks: 5,
            stop: None,
            cap: None,
            iic_factor: 2,
            iic_max_attempts: 1_000_000,
        },
        Experiment::BackboneStats {
            m: 4,
            qs: vec![2, 4],
            clusters: 4,
            walks: 2,
            cap: None,
            l0: 1.0,
            rho_replicas: 100,
            c_grid: vec![1.0, 10.0],
            stop: None,
        },
        Experiment::Iic { l: 8, n: 4, samples: 3, max_attempts: 100_000 },
    ];
    let tmp = tempfile::tempdir().unwrap();
    let mut same = 0;
    let total = experiments.len();
    for (i, experiment) in experiments.into_iter().enumerate() {
        let mut cfg = ExperimentConfig::new(experiment);
        cfg.seed = SEED + i as u64;
        cfg.threads = 1;
        cfg.output = Some(tmp.path().join(format!("a{i}")));
        let first = run(&cfg).unwrap();
        let text = std::fs::read_to_string(first.dir.join("manifest.json")).unwrap();
        let manifest: Manifest = serde_json::from_str(&text).unwrap();
        let mut again = manifest.config;
        again.threads = 3;
        again.output = Some(tmp.path().join(format!("b{i}")));
        let second = run(&again).unwrap();
        let a = std::fs::read(first.dir.join("results.csv")).unwrap();
        let b = std::fs::read(second.dir.join("results.csv")).unwrap();
        same += usize::from(a == b && !a.is_empty());
    }
    verdict(same == total, format!("{same}/{total} experiments reproduced byte-identical results.csv"))
}

type Check = fn() -> Verdict;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<f64>, Check); 12] = [
        (1, "exact combinatorics", Some(30.0), exact_combinatorics),
        (2, "backbone correctness", Some(60.0), backbone_correctness),
        (3, "exit-time oracle", Some(60.0), exit_time_oracle),
        (4, "subdiffusivity", None, subdiffusivity),
        (5, "chemical-distance superlinearity", None, chemical_distance),
        (6, "correlation length", Some(300.0), correlation_monotone),
        (7, "scaling relation", Some(600.0), scaling),
        (8, "two-arm ratio", Some(300.0), two_arm_ratio),
        (9, "Kesten comparison trend", Some(600.0), kesten),
        (10, "exponent arithmetic", Some(1.0), exact_arithmetic),
        (11, "walk structural invariants", Some(60.0), walk_invariants),
        (12, "determinism", None, determinism),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let v = check();
        let secs = start.elapsed().as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let pass = v.pass && in_time;
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |l| format!(" / {l:.0}s"));
        println!("criterion {n}: {} ({name}) {} [{secs:.1}s{budget}]", if pass { "PASS" } else { "FAIL" }, v.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
