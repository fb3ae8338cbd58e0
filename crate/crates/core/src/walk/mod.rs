//! Simple random walks on finite subgraphs.
//!
//! Walk randomness is a ChaCha8 stream seeded independently of the weight
//! field: the environment is fixed and only the walk varies. Exit times stop
//! when `|X(k)|_inf` first equals the radius; every walk carries a step cap and
//! reports when it was hit instead of silently truncating.

mod boxes;

pub use boxes::{
    box_trajectory, in_f, local_time_events, tile_counts, tile_of, tiles_covering, BoxTrajectory, LocalTimeEvents,
    Tile, TileSummary, TrajComponent,
};

use std::collections::VecDeque;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::lattice::Site;
use crate::subgraph::{SiteSet, SiteSubgraph};
use crate::{Error, Result};

pub type WalkRng = ChaCha8Rng;

pub fn walk_rng(seed: u64) -> WalkRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default step cap for exit problems at radius `n`.
pub fn default_cap(n: i64) -> u64 {
    64 * (n.max(1) as u64).pow(4)
}

/// One step from `x` to a uniformly chosen neighbour in `g`.
pub fn step<R: Rng + ?Sized>(g: &SiteSubgraph, x: Site, rng: &mut R) -> Result<Site> {
    let i = g.index_of(x).ok_or(Error::SiteNotInGraph(x))?;
    if g.degree(i) == 0 {
        return Err(Error::IsolatedSite(x));
    }
    Ok(g.site(step_index(g, i, rng)))
}

#[inline]
fn step_index<R: Rng + ?Sized>(g: &SiteSubgraph, i: u32, rng: &mut R) -> u32 {
    let d = g.degree(i);
    g.nth_neighbor(i, rng.random_range(0..d))
}

fn start_index(g: &SiteSubgraph, start: Site) -> Result<u32> {
    let i = g.index_of(start).ok_or(Error::SiteNotInGraph(start))?;
    if g.degree(i) == 0 {
        return Err(Error::IsolatedSite(start));
    }
    Ok(i)
}

/// A recorded walk path `X(0), ..., X(T)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub sites: Vec<Site>,
    pub seed: u64,
    /// Fingerprint of the host subgraph.
    pub host: u64,
}

impl WalkTrace {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// One site per line, `x y`.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for s in &self.sites {
            writeln!(out, "{} {}", s.x, s.y)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExitTime {
    /// First `k` with `|X(k)|_inf = n`, or the cap when `capped`.
    pub tau: u64,
    pub capped: bool,
    pub trace: Option<WalkTrace>,
}

/// Runs the walk from `start` until `|X|_inf = n` or `cap` steps, recording
/// the path.
pub fn exit_time(g: &SiteSubgraph, start: Site, n: i64, seed: u64, cap: u64) -> Result<ExitTime> {
    run_exit(g, start, n, seed, cap, true)
}

/// [`exit_time`] without keeping the path.
pub fn exit_time_only(g: &SiteSubgraph, start: Site, n: i64, seed: u64, cap: u64) -> Result<ExitTime> {
    run_exit(g, start, n, seed, cap, false)
}

fn run_exit(g: &SiteSubgraph, start: Site, n: i64, seed: u64, cap: u64, record: bool) -> Result<ExitTime> {
    let mut path = Vec::new();
    if record {
        path.push(start);
    }
    let trace = |path: Vec<Site>| record.then(|| WalkTrace { sites: path, seed, host: g.fingerprint() });
    if start.norm_inf() >= n {
        if !g.contains(start) {
            return Err(Error::SiteNotInGraph(start));
        }
        return Ok(ExitTime { tau: 0, capped: false, trace: trace(path) });
    }
    let mut i = start_index(g, start)?;
    let mut rng = walk_rng(seed);
    let mut k = 0u64;
    while k < cap {
        i = step_index(g, i, &mut rng);
        k += 1;
        let s = g.site(i);
        if record {
            path.push(s);
        }
        if s.norm_inf() >= n {
            return Ok(ExitTime { tau: k, capped: false, trace: trace(path) });
        }
    }
    Ok(ExitTime { tau: cap, capped: true, trace: trace(path) })
}

/// One walk on a window of radius `n = 3m` observed in two phases: from the
/// origin until `|X| = 2m`, then until it hits `∂S(m) ∪ ∂S(n)`, then on until
/// it exits at `|X| = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusWalk {
    pub m: i64,
    pub tau_2m: Option<u64>,
    pub sigma_plus: Option<u64>,
    pub tau_3m: Option<u64>,
    pub capped: bool,
    /// `Y(0), ..., Y(σ*)`: the path from `τ(2m)` to `σ⁺` inclusive.
    pub segment: Vec<Site>,
    pub seed: u64,
}

impl AnnulusWalk {
    /// `σ* = σ⁺ − τ(2m)`.
    pub fn sigma_star(&self) -> Option<u64> {
        Some(self.sigma_plus? - self.tau_2m?)
    }
}

pub fn annulus_walk(g: &SiteSubgraph, m: i64, seed: u64, cap: u64) -> Result<AnnulusWalk> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("annulus walk needs m >= 1, got {m}")));
    }
    let n = 3 * m;
    let mut i = start_index(g, Site::new(0, 0))?;
    let mut rng = walk_rng(seed);
    let mut out =
        AnnulusWalk { m, tau_2m: None, sigma_plus: None, tau_3m: None, capped: false, segment: Vec::new(), seed };
    let mut k = 0u64;
    let mut phase = 0;
    loop {
        let r = g.site(i).norm_inf();
        if phase == 0 && r == 2 * m {
            out.tau_2m = Some(k);
            out.segment.push(g.site(i));
            phase = 1;
        } else if phase == 1 {
            out.segment.push(g.site(i));
            if r == m || r == n {
                out.sigma_plus = Some(k);
                phase = 2;
            }
        }
        if phase == 2 && r == n {
            out.tau_3m = Some(k);
            return Ok(out);
        }
        if k == cap {
            out.capped = true;
            return Ok(out);
        }
        i = step_index(g, i, &mut rng);
        k += 1;
    }
}

/// Number of steps taken by the walk induced on `backbone` along `segment`:
/// one less than the number of visits to backbone sites (0 if none).
pub fn backbone_time(segment: &[Site], backbone: &SiteSet) -> u64 {
    let visits = segment.iter().filter(|s| backbone.contains(s)).count() as u64;
    visits.saturating_sub(1)
}

/// Visit counts `L(x, k) = #{0 <= l <= k : X(l) = x}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalTimeLedger {
    pub k: u64,
    counts: FxHashMap<Site, u64>,
}

impl LocalTimeLedger {
    pub fn get(&self, x: Site) -> u64 {
        self.counts.get(&x).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn visited(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Site, u64)> + '_ {
        self.counts.iter().map(|(&s, &c)| (s, c))
    }

    /// CSV with header `site_x,site_y,count`, rows sorted by site.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut rows: Vec<(Site, u64)> = self.iter().collect();
        rows.sort_unstable();
        writeln!(out, "site_x,site_y,count")?;
        for (s, c) in rows {
            writeln!(out, "{},{},{}", s.x, s.y, c)?;
        }
        Ok(())
    }
}

pub fn local_times(trace: &[Site], k: u64) -> Result<LocalTimeLedger> {
    if trace.is_empty() || k as usize >= trace.len() {
        return Err(Error::InvalidArgument(format!("k = {k} outside a trace of {} sites", trace.len())));
    }
    let mut counts = FxHashMap::default();
    for &s in &trace[..=k as usize] {
        *counts.entry(s).or_insert(0) += 1;
    }
    Ok(LocalTimeLedger { k, counts })
}

/// Times the walk left the backbone and next returned at a different site.
pub fn reentry_violations(trace: &[Site], backbone: &SiteSet) -> usize {
    let mut left_from: Option<Site> = None;
    let mut bad = 0;
    for w in trace.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (backbone.contains(&a), backbone.contains(&b)) {
            (true, false) => left_from = Some(a),
            (false, true) => {
                if left_from.is_some_and(|s| s != b) {
                    bad += 1;
                }
                left_from = None;
            }
            _ => {}
        }
    }
    bad
}

/// Smallest and largest of `deg(x) / deg(y)` over non-isolated site pairs.
pub fn degree_ratio_range(g: &SiteSubgraph) -> Option<(f64, f64)> {
    let degs = (0..g.site_count() as u32).map(|i| g.degree(i)).filter(|&d| d > 0);
    let (lo, hi) = degs.fold((usize::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
    (hi > 0).then(|| (lo as f64 / hi as f64, hi as f64 / lo as f64))
}

/// One row of an empirical tail table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub k: u64,
    pub lambda: f64,
    pub frequency: f64,
    pub replicas: usize,
}

/// Empirical `P(dist_B(start, X^B(k)) >= λ√k)` for the walk induced on the
/// backbone `B`, where `X^B(k)` is the `k`-th backbone visit (counting from 0)
/// of the walk on `g`, and distances are measured inside `B`.
pub fn cv_tail(
    g: &SiteSubgraph,
    backbone: &SiteSet,
    start: Site,
    k_values: &[u64],
    lambdas: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<Vec<TailRow>> {
    if !backbone.contains(&start) {
        return Err(Error::InvalidArgument(format!("start {start} is not a backbone site")));
    }
    let b = g.restrict(|s| backbone.contains(&s));
    let si = b.index_of(start).ok_or(Error::SiteNotInGraph(start))?;
    let mut dist = vec![u32::MAX; b.site_count()];
    dist[si as usize] = 0;
    let mut queue = VecDeque::from([si]);
    while let Some(v) = queue.pop_front() {
        for w in b.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    let kmax = k_values.iter().copied().max().unwrap_or(0);
    let mut hits = vec![0usize; k_values.len() * lambdas.len()];
    let i0 = start_index(g, start)?;
    let on_b: Vec<bool> = (0..g.site_count() as u32).map(|i| backbone.contains(&g.site(i))).collect();
    for r in 0..replicas {
        let mut rng = walk_rng(crate::weights::derive_seed(seed, r as u64));
        let mut i = i0;
        let mut visits = 0u64;
        let mut at_k: FxHashMap<u64, u32> = FxHashMap::default();
        at_k.insert(0, i);
        let cap = 1000 * (kmax + 1) * (g.site_count() as u64 + 1);
        let mut steps = 0u64;
        while visits < kmax && steps < cap {
            i = step_index(g, i, &mut rng);
            steps += 1;
            if on_b[i as usize] {
                visits += 1;
                if k_values.contains(&visits) {
                    at_k.insert(visits, i);
                }
            }
        }
        for (a, &k) in k_values.iter().enumerate() {
            let Some(&x) = at_k.get(&k) else { continue };
            let d = dist[b.index_of(g.site(x)).unwrap() as usize] as f64;
            for (c, &lam) in lambdas.iter().enumerate() {
                if d >= lam * (k as f64).sqrt() {
                    hits[a * lambdas.len() + c] += 1;
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (a, &k) in k_values.iter().enumerate() {
        for (c, &lambda) in lambdas.iter().enumerate() {
            let frequency = hits[a * lambdas.len() + c] as f64 / replicas.max(1) as f64;
            rows.push(TailRow { k, lambda, frequency, replicas });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoxRegion, Edge};
    use crate::weights::WeightField;

    fn full_box(n: i64) -> SiteSubgraph {
        crate::percolation::open_subgraph(&WeightField::new(0), 1.0, BoxRegion::centered(n).into()).unwrap()
    }

    #[test]
    fn single_neighbour_is_forced() {
        let g = SiteSubgraph::from_parts([Site::new(0, 0), Site::new(1, 0)], [Edge::horizontal(0, 0)]);
        let mut rng = walk_rng(1);
        for _ in 0..10 {
            assert_eq!(step(&g, Site::new(0, 0), &mut rng).unwrap(), Site::new(1, 0));
        }
    }

    #[test]
    fn isolated_site_is_an_error() {
        let g = SiteSubgraph::from_parts([Site::new(0, 0)], []);
        assert!(matches!(step(&g, Site::new(0, 0), &mut walk_rng(0)), Err(Error::IsolatedSite(_))));
    }

    #[test]
    fn unit_exit_on_full_lattice() {
        let g = full_box(1);
        for seed in 0..20 {
            assert_eq!(exit_time(&g, Site::new(0, 0), 1, seed, 10).unwrap().tau, 1);
        }
    }

    #[test]
    fn cap_is_flagged() {
        let g = full_box(6);
        let e = exit_time_only(&g, Site::new(0, 0), 6, 3, 2).unwrap();
        assert!(e.capped);
        assert_eq!(e.tau, 2);
    }

    #[test]
    fn replay_is_identical() {
        let g = full_box(5);
        let a = exit_time(&g, Site::new(0, 0), 5, 77, 10_000).unwrap();
        let b = exit_time(&g, Site::new(0, 0), 5, 77, 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn annulus_walk_times_are_ordered() {
        let g = full_box(6);
        for seed in 0..20 {
            let w = annulus_walk(&g, 2, seed, 1_000_000).unwrap();
            let (t2, sp, t3) = (w.tau_2m.unwrap(), w.sigma_plus.unwrap(), w.tau_3m.unwrap());
            assert!(t2 < sp && sp <= t3);
            assert!(t3 >= sp - t2);
            assert_eq!(w.segment.len() as u64, sp - t2 + 1);
        }
    }

    #[test]
    fn ledger_sums_and_csv() {
        let trace = [Site::new(0, 0), Site::new(1, 0), Site::new(0, 0)];
        let l = local_times(&trace, 2).unwrap();
        assert_eq!(l.total(), 3);
        assert_eq!(l.get(Site::new(0, 0)), 2);
        let mut buf = Vec::new();
        l.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "site_x,site_y,count\n0,0,2\n1,0,1\n");
        assert!(local_times(&trace, 3).is_err());
    }

    #[test]
    fn backbone_time_extremes() {
        let seg = [Site::new(0, 0), Site::new(1, 0), Site::new(0, 0), Site::new(0, 1)];
        let all: SiteSet = seg.iter().copied().collect();
        assert_eq!(backbone_time(&seg, &all), 3);
        assert_eq!(backbone_time(&seg, &SiteSet::default()), 0);
    }
}
