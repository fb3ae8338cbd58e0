use std::collections::VecDeque;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::invasion::{grow, StopRule};
use crate::lattice::{Annulus, BoxRegion, Site, ORIGIN};
use crate::metrics::{annulus_backbone, chemical_distance};
use crate::subgraph::{SiteSet, SiteSubgraph};
use crate::walk::{
    annulus_walk, backbone_time, box_trajectory, in_f, local_time_events, local_times, reentry_violations, tile_counts,
    LocalTimeEvents, Tile,
};
use crate::weights::WeightField;
use crate::{Error, Result};

/// The windows `Λ(n)`, `Γ(n)` and the annulus backbone `B̃(n)` for `n = 3m`.
#[derive(Debug, Clone)]
pub struct KestenEnvironment {
    pub m: i64,
    pub n: i64,
    pub annulus: Annulus,
    pub lambda: SiteSubgraph,
    pub gamma: SiteSubgraph,
    pub backbone: SiteSet,
}

impl KestenEnvironment {
    /// Builds `Γ(n)` and `B̃(n)` from a window `Λ(3m)` containing the origin.
    pub fn new(m: i64, lambda: SiteSubgraph) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("inner radius must be >= 1, got {m}")));
        }
        let n = 3 * m;
        let annulus = Annulus::centered(m, n)?;
        let gamma = lambda.restrict(|s| annulus.contains(s));
        let backbone = annulus_backbone(&gamma, &annulus)?;
        Ok(KestenEnvironment { m, n, annulus, lambda, gamma, backbone })
    }
}

/// Invasion environment with seed `env_seed`, grown by `stop` (default: the
/// window rule for `3m`).
pub fn kesten_environment(m: i64, env_seed: u64, stop: Option<&StopRule>) -> Result<KestenEnvironment> {
    let n = 3 * m;
    let default = StopRule::for_window(n);
    let cluster = grow(&WeightField::new(env_seed), stop.unwrap_or(&default))?;
    KestenEnvironment::new(m, cluster.window(BoxRegion::centered(n))?)
}

/// One walk's comparison between time spent in the annulus and on its
/// backbone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KestenTrace {
    pub walk_seed: u64,
    pub q: i64,
    pub sigma_star: u64,
    /// Steps of the walk induced on `B̃(n)`.
    pub b: u64,
    pub sum_lambda: u64,
    pub sum_theta: u64,
    /// `(1 + σ*) / (1 + b)`.
    pub lhs: f64,
    /// `ΣΛ / (16 ΣΘ)`, undefined when `ΣΘ = 0`.
    pub rhs: Option<f64>,
    /// Whether `lhs >= rhs`, checked in integer arithmetic.
    pub holds: Option<bool>,
    pub components: usize,
    pub max_tile_jump: i64,
    /// Cluster sites over backbone sites, summed over the traversed `F` squares.
    pub volume_ratio: Option<f64>,
    pub reentry_violations: usize,
    pub events: Option<LocalTimeEvents>,
}

/// Runs one annulus walk on `env` and accounts for it at tile size `q`.
/// Returns `None` if the walk hit `cap` before `σ⁺`. `l0` enables the
/// local-time comparison statistics.
pub fn kesten_trace(
    env: &KestenEnvironment,
    q: i64,
    walk_seed: u64,
    cap: u64,
    l0: Option<f64>,
) -> Result<Option<KestenTrace>> {
    let walk = annulus_walk(&env.lambda, env.m, walk_seed, cap)?;
    let Some(sigma_star) = walk.sigma_star() else {
        return Ok(None);
    };
    let seg = &walk.segment;
    let traj = box_trajectory(seg, q, &env.gamma, &env.backbone)?;
    let b = backbone_time(seg, &env.backbone);
    let (sl, st) = (traj.sum_lambda(), traj.sum_theta());
    let lhs = (1 + sigma_star) as f64 / (1 + b) as f64;
    let (rhs, holds) = if st > 0 {
        let holds = 16 * (1 + sigma_star as u128) * st as u128 >= (1 + b as u128) * sl as u128;
        (Some(sl as f64 / (16.0 * st as f64)), Some(holds))
    } else {
        (None, None)
    };
    let order: Vec<Tile> = traj.tiles.iter().map(|t| t.tile).collect();
    let (vol, bb) = tile_counts(&order, q, &env.lambda, &env.backbone)
        .iter()
        .fold((0usize, 0usize), |(v, b), t| (v + t.sites, b + t.backbone_sites));
    let volume_ratio = (bb > 0).then(|| vol as f64 / bb as f64);
    let events = match l0 {
        Some(l0) => Some(local_time_events(&traj, &local_times(seg, sigma_star)?, l0, env.n)),
        None => None,
    };
    Ok(Some(KestenTrace {
        walk_seed,
        q,
        sigma_star,
        b,
        sum_lambda: sl,
        sum_theta: st,
        lhs,
        rhs,
        holds,
        components: traj.components.len(),
        max_tile_jump: traj.max_tile_jump(),
        volume_ratio,
        reentry_violations: reentry_violations(seg, &env.backbone),
        events,
    }))
}

/// Tiles `j` whose `F(j)` meets the origin-centred annulus `a`.
pub fn annulus_tiles(a: &Annulus, q: i64) -> Vec<Tile> {
    debug_assert_eq!(a.center, ORIGIN);
    let (m, n) = (a.inner, a.outer);
    let lo = (-n + q - 1).div_euclid(q) - 2;
    let hi = n.div_euclid(q) + 1;
    let clip = |j: i64| (q * (j - 1)).max(-n)..=(q * (j + 2)).min(n);
    let mut out = Vec::new();
    for ja in lo..=hi {
        for jb in lo..=hi {
            let (xs, ys) = (clip(ja), clip(jb));
            if xs.is_empty() || ys.is_empty() {
                continue;
            }
            let far = xs.start().abs().max(xs.end().abs()).max(ys.start().abs()).max(ys.end().abs());
            if far >= m {
                out.push((ja, jb));
            }
        }
    }
    out
}

/// Raw values of the environment statistics at tile size `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentStats {
    /// `dist_Γ(∂S(2m), ∂S(m) ∪ ∂S(n))`.
    pub e1_distance: Option<u32>,
    /// `max_j ♯(B̃ ∩ F(j))`.
    pub e2_max_backbone: usize,
    /// Smallest component of `Γ ∩ F(j)` joining `D(j)` to the boundary of
    /// `F(j)`, over all `j`.
    pub e3_min_crossing_volume: Option<usize>,
    /// `♯B̃`.
    pub e4_backbone_total: usize,
}

pub fn environment_stats(env: &KestenEnvironment, q: i64) -> Result<EnvironmentStats> {
    if q < 1 {
        return Err(Error::InvalidArgument(format!("tile size must be >= 1, got {q}")));
    }
    let (m, n) = (env.m, env.n);
    let g = &env.gamma;
    let mid: Vec<Site> = g.sites().iter().copied().filter(|s| s.norm_inf() == 2 * m).collect();
    let ends: Vec<Site> = g.sites().iter().copied().filter(|s| s.norm_inf() == m || s.norm_inf() == n).collect();
    let tiles = annulus_tiles(&env.annulus, q);
    let e2 = tile_counts(&tiles, q, g, &env.backbone).iter().map(|t| t.backbone_sites).max().unwrap_or(0);
    let e3 = tiles.iter().filter_map(|&j| min_crossing_component(g, j, q)).min();
    Ok(EnvironmentStats {
        e1_distance: chemical_distance(g, &mid, &ends),
        e2_max_backbone: e2,
        e3_min_crossing_volume: e3,
        e4_backbone_total: env.backbone.len(),
    })
}

fn min_crossing_component(g: &SiteSubgraph, j: Tile, q: i64) -> Option<usize> {
    let (x0, x1, y0, y1) = (q * (j.0 - 1), q * (j.0 + 2), q * (j.1 - 1), q * (j.1 + 2));
    let in_d = |s: Site| s.x.div_euclid(q) == j.0 && s.y.div_euclid(q) == j.1;
    let on_edge = |s: Site| s.x == x0 || s.x == x1 || s.y == y0 || s.y == y1;
    let mut seen = FxHashSet::default();
    let mut best: Option<usize> = None;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let Some(start) = g.index_of(Site::new(x, y)) else { continue };
            if !seen.insert(start) {
                continue;
            }
            let (mut size, mut hits_d, mut hits_edge) = (0usize, false, false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let s = g.site(v);
                size += 1;
                hits_d |= in_d(s);
                hits_edge |= on_edge(s);
                for w in g.neighbors(v) {
                    if in_f(g.site(w), j, q) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            if hits_d && hits_edge {
                best = Some(best.map_or(size, |b| b.min(size)));
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFraction {
    pub c: f64,
    /// Fraction of `(cluster, j)` pairs with `♯(B̃ ∩ F(j)) > C q² ρ̂(q) log q`.
    pub per_box: f64,
    /// Fraction of clusters where some `j` exceeds the threshold.
    pub per_cluster: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackboneVolumeStats {
    pub q: i64,
    pub clusters: usize,
    pub boxes: usize,
    pub mean_box: f64,
    pub max_box: usize,
    /// `q² ρ̂(q) log q`.
    pub box_scale: f64,
    pub tail: Vec<TailFraction>,
    /// `n² ρ̂(n) (log n)²`.
    pub total_scale: f64,
    /// `♯B̃ / total_scale` per cluster.
    pub total_ratios: Vec<f64>,
}

/// Backbone counts per `F` square over an ensemble of environments with
/// common radii, compared against the two-arm scales `rho_q = ρ̂(q)` and
/// `rho_n = ρ̂(n)`.
pub fn backbone_volume_stats(
    envs: &[KestenEnvironment],
    q: i64,
    rho_q: f64,
    rho_n: f64,
    c_grid: &[f64],
) -> Result<BackboneVolumeStats> {
    let first = envs.first().ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
    if q < 2 {
        return Err(Error::InvalidArgument(format!("tile size must be >= 2, got {q}")));
    }
    if envs.iter().any(|e| e.annulus != first.annulus) {
        return Err(Error::InvalidArgument("ensemble mixes annuli".into()));
    }
    let tiles = annulus_tiles(&first.annulus, q);
    let per_env: Vec<Vec<usize>> = envs
        .iter()
        .map(|e| tile_counts(&tiles, q, &e.gamma, &e.backbone).iter().map(|t| t.backbone_sites).collect())
        .collect();
    let qf = q as f64;
    let nf = first.n as f64;
    let box_scale = qf * qf * rho_q * qf.ln();
    let total_scale = nf * nf * rho_n * nf.ln().powi(2);
    let boxes = per_env.iter().map(Vec::len).sum::<usize>();
    let sum: usize = per_env.iter().flatten().sum();
    let tail = c_grid
        .iter()
        .map(|&c| {
            let t = c * box_scale;
            let over = per_env.iter().flatten().filter(|&&k| k as f64 > t).count();
            let clusters = per_env.iter().filter(|v| v.iter().any(|&k| k as f64 > t)).count();
            TailFraction { c, per_box: over as f64 / boxes as f64, per_cluster: clusters as f64 / envs.len() as f64 }
        })
        .collect();
    Ok(BackboneVolumeStats {
        q,
        clusters: envs.len(),
        boxes,
        mean_box: sum as f64 / boxes as f64,
        max_box: per_env.iter().flatten().copied().max().unwrap_or(0),
        box_scale,
        tail,
        total_scale,
        total_ratios: envs.iter().map(|e| e.backbone.len() as f64 / total_scale).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::open_subgraph;

    fn full(m: i64) -> KestenEnvironment {
        let g = open_subgraph(&WeightField::new(0), 1.0, BoxRegion::centered(3 * m).into()).unwrap();
        KestenEnvironment::new(m, g).unwrap()
    }

    #[test]
    fn full_annulus_backbone_is_the_annulus() {
        let env = full(4);
        assert_eq!(env.backbone.len(), env.annulus.site_count());
        let s = environment_stats(&env, 3).unwrap();
        assert_eq!(s.e4_backbone_total, 25 * 25 - 7 * 7);
        assert_eq!(s.e1_distance, Some(4));
        // F = [3,12]^2 minus the corner (3,3)
        assert_eq!(s.e2_max_backbone, 99);
    }

    #[test]
    fn annulus_tiles_cover_exactly_the_meeting_squares() {
        let a = Annulus::centered(5, 15).unwrap();
        for q in [2, 3, 4, 7] {
            let tiles: FxHashSet<Tile> = annulus_tiles(&a, q).into_iter().collect();
            for ja in -12..12 {
                for jb in -12..12 {
                    let meets = (q * (ja - 1)..=q * (ja + 2))
                        .any(|x| (q * (jb - 1)..=q * (jb + 2)).any(|y| a.contains(Site::new(x, y))));
                    assert_eq!(meets, tiles.contains(&(ja, jb)), "q={q} j=({ja},{jb})");
                }
            }
        }
    }

    #[test]
    fn kesten_inequality_on_full_lattice() {
        let env = full(3);
        for seed in 0..10 {
            let t = kesten_trace(&env, 2, seed, 1 << 24, Some(1.0)).unwrap().unwrap();
            assert_eq!(t.holds, Some(true));
            assert_eq!(t.reentry_violations, 0);
            assert_eq!(t.b, t.sigma_star);
            assert!(t.max_tile_jump <= 2);
        }
    }

    #[test]
    fn volume_stats_on_degenerate_ensemble() {
        let envs = vec![full(4), full(4)];
        let s = backbone_volume_stats(&envs, 4, 1.0, 1.0, &[0.0, 1e9]).unwrap();
        assert_eq!(s.clusters, 2);
        assert_eq!(s.tail[1].per_box, 0.0);
        assert!(s.tail[0].per_cluster == 1.0);
        assert!(s.max_box <= 13 * 13);
    }
}
