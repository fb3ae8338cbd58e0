//! Tile accounting of a walk segment at scale `q`.
//!
//! Tiles are `D(j) = [q j1, q(j1+1)) x [q j2, q(j2+1))` and their closed
//! thickenings `F(j) = [q(j1-1), q(j1+2)] x [q(j2-1), q(j2+2)]`. The segment is
//! cut at the steps `l_i` where it first leaves the current `F(j_i)`; each piece
//! is charged to the component of `F(j_i)` in the host containing `Y(l_i)`.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::LocalTimeLedger;
use crate::lattice::Site;
use crate::subgraph::{SiteSet, SiteSubgraph};
use crate::{Error, Result};

pub type Tile = (i64, i64);

pub fn tile_of(s: Site, q: i64) -> Tile {
    (s.x.div_euclid(q), s.y.div_euclid(q))
}

pub fn in_f(s: Site, j: Tile, q: i64) -> bool {
    (q * (j.0 - 1)..=q * (j.0 + 2)).contains(&s.x) && (q * (j.1 - 1)..=q * (j.1 + 2)).contains(&s.y)
}

/// Tiles whose `F` square contains `s` (at most 16).
pub fn tiles_covering(s: Site, q: i64) -> impl Iterator<Item = Tile> {
    let range = move |x: i64| {
        // q(j-1) <= x <= q(j+2)  <=>  ceil(x/q) - 2 <= j <= floor(x/q) + 1
        let lo = (x + q - 1).div_euclid(q) - 2;
        let hi = x.div_euclid(q) + 1;
        lo..=hi
    };
    let ys = range(s.y);
    range(s.x).flat_map(move |a| ys.clone().map(move |b| (a, b)))
}

/// A distinct component `C(ι)` visited by the segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajComponent {
    pub tile: Tile,
    pub sites: Vec<Site>,
    pub backbone_sites: usize,
    /// `Λ(ι)`: total local time on the component.
    pub lambda: u64,
    /// `Θ(ι)`: total local time on its backbone sites.
    pub theta: u64,
}

/// Host and backbone site counts of a traversed `F` square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSummary {
    pub tile: Tile,
    pub sites: usize,
    pub backbone_sites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxTrajectory {
    pub q: i64,
    /// Cut steps `l_0 = 0 < l_1 < ...`.
    pub l: Vec<usize>,
    /// Tile index `j_i` of `Y(l_i)`.
    pub j: Vec<Tile>,
    /// Index into `components` for each `i`.
    pub component_of: Vec<usize>,
    /// Components without repetition, in order of first visit.
    pub components: Vec<TrajComponent>,
    /// Distinct traversed tiles in order of first visit.
    pub tiles: Vec<TileSummary>,
}

impl BoxTrajectory {
    /// Index `λ` of the last distinct component.
    pub fn lambda_count(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn sum_lambda(&self) -> u64 {
        self.components.iter().map(|c| c.lambda).sum()
    }

    pub fn sum_theta(&self) -> u64 {
        self.components.iter().map(|c| c.theta).sum()
    }

    /// Largest coordinate jump between consecutive tile indices.
    pub fn max_tile_jump(&self) -> i64 {
        self.j.windows(2).map(|w| (w[1].0 - w[0].0).abs().max((w[1].1 - w[0].1).abs())).max().unwrap_or(0)
    }
}

/// Tile accounting of `segment = Y(0..=σ*)` on `host`, with `Θ` taken over
/// `backbone`.
pub fn box_trajectory(segment: &[Site], q: i64, host: &SiteSubgraph, backbone: &SiteSet) -> Result<BoxTrajectory> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("tile size must be >= 1, got {q}")));
    }
    let Some(&first) = segment.first() else {
        return Err(Error::InvalidArgument("empty walk segment".into()));
    };
    let ledger = super::local_times(segment, segment.len() as u64 - 1)?;

    let mut l = vec![0usize];
    let mut j = vec![tile_of(first, q)];
    for (step, &s) in segment.iter().enumerate().skip(1) {
        if !in_f(s, *j.last().unwrap(), q) {
            l.push(step);
            j.push(tile_of(s, q));
        }
    }

    // per tile: site -> component id
    let mut labels: FxHashMap<Tile, FxHashMap<Site, usize>> = FxHashMap::default();
    let mut components: Vec<TrajComponent> = Vec::new();
    let mut component_of = Vec::with_capacity(l.len());
    for (&li, &ji) in l.iter().zip(&j) {
        let y = segment[li];
        let tile_labels = labels.entry(ji).or_default();
        if let Some(&id) = tile_labels.get(&y) {
            component_of.push(id);
            continue;
        }
        let id = components.len();
        let sites = component_in_f(host, y, ji, q)?;
        let mut comp = TrajComponent { tile: ji, sites: Vec::new(), backbone_sites: 0, lambda: 0, theta: 0 };
        for &x in &sites {
            tile_labels.insert(x, id);
            let lt = ledger.get(x);
            comp.lambda += lt;
            if backbone.contains(&x) {
                comp.backbone_sites += 1;
                comp.theta += lt;
            }
        }
        comp.sites = sites;
        components.push(comp);
        component_of.push(id);
    }

    let mut seen_tiles = FxHashSet::default();
    let order: Vec<Tile> = j.iter().copied().filter(|t| seen_tiles.insert(*t)).collect();
    let tiles = tile_counts(&order, q, host, backbone);
    Ok(BoxTrajectory { q, l, j, component_of, components, tiles })
}

/// Host and backbone site counts of `F(j)` for each listed tile.
pub fn tile_counts(tiles: &[Tile], q: i64, host: &SiteSubgraph, backbone: &SiteSet) -> Vec<TileSummary> {
    let mut counts: FxHashMap<Tile, (usize, usize)> = tiles.iter().map(|&t| (t, (0, 0))).collect();
    for &s in host.sites() {
        for t in tiles_covering(s, q) {
            if let Some(c) = counts.get_mut(&t) {
                c.0 += 1;
                if backbone.contains(&s) {
                    c.1 += 1;
                }
            }
        }
    }
    tiles.iter().map(|&t| TileSummary { tile: t, sites: counts[&t].0, backbone_sites: counts[&t].1 }).collect()
}

fn component_in_f(host: &SiteSubgraph, y: Site, j: Tile, q: i64) -> Result<Vec<Site>> {
    let start = host.index_of(y).ok_or(Error::SiteNotInGraph(y))?;
    let mut seen = FxHashSet::from_iter([start]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        out.push(host.site(v));
        for w in host.neighbors(v) {
            if in_f(host.site(w), j, q) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Outcome of the local-time comparison events at threshold
/// `T = 320 L0 q^2 log2 n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalTimeEvents {
    pub threshold: f64,
    /// Consecutive component pairs where some site has local time `>= T` and
    /// local times across the pair differ by more than a factor 8.
    pub w2_violations: usize,
    /// Components with a site below `T` and a site above `8T`.
    pub w3_violations: usize,
}

impl LocalTimeEvents {
    pub fn w2_holds(&self) -> bool {
        self.w2_violations == 0
    }

    pub fn w3_holds(&self) -> bool {
        self.w3_violations == 0
    }
}

pub fn local_time_events(traj: &BoxTrajectory, ledger: &LocalTimeLedger, l0: f64, n: i64) -> LocalTimeEvents {
    let q = traj.q as f64;
    let threshold = 320.0 * l0 * q * q * (n.max(2) as f64).log2();
    let extremes: Vec<(u64, u64)> = traj
        .components
        .iter()
        .map(|c| {
            let lts = c.sites.iter().map(|&x| ledger.get(x));
            let lo = lts.clone().min().unwrap_or(0);
            let hi = lts.max().unwrap_or(0);
            (lo, hi)
        })
        .collect();
    let mut w2 = 0;
    for w in traj.component_of.windows(2) {
        let (a, b) = (extremes[w[0]], extremes[w[1]]);
        let lo = a.0.min(b.0) as f64;
        let hi = a.1.max(b.1) as f64;
        if hi >= threshold && hi > 8.0 * lo {
            w2 += 1;
        }
    }
    let w3 = extremes.iter().filter(|&&(lo, hi)| lo as f64 <= threshold && hi as f64 > 8.0 * threshold).count();
    LocalTimeEvents { threshold, w2_violations: w2, w3_violations: w3 }
}
