//! Invasion percolation from the origin.
//!
//! The cluster grows by repeatedly adding the least-weight edge with at least
//! one endpoint in the current cluster. Growth stops when a [`StopRule`]
//! fires; windows of the result are exact only up to the exploration the
//! rule guarantees, so [`InvasionCluster::window`] refuses regions the
//! cluster has not fully grown past.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::lattice::{Edge, Region, Site, ORIGIN};
use crate::subgraph::SiteSubgraph;
use crate::weights::{WeightField, WeightSource};
use crate::{Error, Result};

/// When to stop growing. Composite rules combine children with `any`/`all`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StopRule {
    /// Stop once some cluster site has `|x|_inf >= radius`.
    ExitBox {
        radius: i64,
    },
    /// Stop after this many invaded edges.
    EdgeBudget {
        edges: u64,
    },
    /// Stop once the cluster has reached `|x|_inf >= exit_radius` and every
    /// frontier edge touching `S(window)` has weight above `threshold`.
    FrontierSettled {
        window: i64,
        threshold: f64,
        exit_radius: i64,
    },
    Any {
        rules: Vec<StopRule>,
    },
    All {
        rules: Vec<StopRule>,
    },
}

impl StopRule {
    pub fn any(rules: Vec<StopRule>) -> Self {
        StopRule::Any { rules }
    }

    pub fn all(rules: Vec<StopRule>) -> Self {
        StopRule::All { rules }
    }

    /// Default rule for windows of radius `n`: settle the frontier inside
    /// `S(n)` after exiting `S(2n)`, with an edge budget as a backstop.
    pub fn for_window(n: i64) -> Self {
        let n = n.max(1);
        StopRule::any(vec![
            StopRule::all(vec![
                StopRule::ExitBox { radius: 2 * n },
                StopRule::FrontierSettled { window: n, threshold: 0.55, exit_radius: 2 * n },
            ]),
            StopRule::EdgeBudget { edges: default_budget(n) },
        ])
    }

    /// Whether the rule is guaranteed to fire eventually.
    pub fn is_bounded(&self) -> bool {
        match self {
            StopRule::ExitBox { .. } | StopRule::EdgeBudget { .. } => true,
            StopRule::FrontierSettled { .. } => false,
            StopRule::Any { rules } => rules.iter().any(StopRule::is_bounded),
            StopRule::All { rules } => !rules.is_empty() && rules.iter().all(StopRule::is_bounded),
        }
    }

    /// Radius the cluster is guaranteed to have reached when the rule fires
    /// (0 if nothing is guaranteed).
    pub fn guaranteed_exit(&self) -> i64 {
        match self {
            StopRule::ExitBox { radius } => *radius,
            StopRule::EdgeBudget { .. } => 0,
            StopRule::FrontierSettled { exit_radius, .. } => *exit_radius,
            StopRule::Any { rules } => rules.iter().map(StopRule::guaranteed_exit).min().unwrap_or(0),
            StopRule::All { rules } => rules.iter().map(StopRule::guaranteed_exit).max().unwrap_or(0),
        }
    }

    fn windows(&self, out: &mut Vec<(i64, f64)>) {
        match self {
            StopRule::FrontierSettled { window, threshold, .. } => out.push((*window, *threshold)),
            StopRule::Any { rules } | StopRule::All { rules } => rules.iter().for_each(|r| r.windows(out)),
            _ => {}
        }
    }

    fn fired(&self, st: &GrowthState, settled: &[(i64, f64, usize)]) -> bool {
        match self {
            StopRule::ExitBox { radius } => st.reach >= *radius,
            StopRule::EdgeBudget { edges } => st.steps as u64 >= *edges,
            StopRule::FrontierSettled { window, threshold, exit_radius } => {
                st.reach >= *exit_radius
                    && settled
                        .iter()
                        .find(|(w, t, _)| w == window && t == threshold)
                        .is_some_and(|&(_, _, count)| count == 0)
            }
            StopRule::Any { rules } => rules.iter().any(|r| r.fired(st, settled)),
            StopRule::All { rules } => rules.iter().all(|r| r.fired(st, settled)),
        }
    }

    /// Compact single-line JSON, as used in snapshot headers.
    pub fn to_compact(&self) -> String {
        serde_json::to_string(self).expect("stop rules serialize")
    }
}

/// Edge budget used by [`StopRule::for_window`].
pub fn default_budget(n: i64) -> u64 {
    let side = (4 * n + 1) as u64;
    16 * side * side
}

struct GrowthState {
    reach: i64,
    steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key {
    w: f64,
    e: Edge,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.w.total_cmp(&other.w).then(self.e.cmp(&other.e))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The invaded edges in invasion order, with their weights.
#[derive(Debug, Clone, PartialEq)]
pub struct InvasionCluster {
    seed: Option<u64>,
    stop: StopRule,
    edges: Vec<Edge>,
    weights: Vec<f64>,
    sites: FxHashSet<Site>,
    reach: i64,
}

pub fn grow(f: &WeightField, stop: &StopRule) -> Result<InvasionCluster> {
    grow_from(f, stop, Some(f.seed()))
}

/// Greedy growth over any weight source. Ties are broken by canonical edge
/// order.
pub fn grow_from<W: WeightSource + ?Sized>(f: &W, stop: &StopRule, seed: Option<u64>) -> Result<InvasionCluster> {
    if !stop.is_bounded() {
        return Err(Error::UnboundedStopRule(stop.to_compact()));
    }
    let mut windows = Vec::new();
    stop.windows(&mut windows);
    // (window, threshold, number of low frontier edges touching S(window))
    let mut settled: Vec<(i64, f64, usize)> = windows.into_iter().map(|(w, t)| (w, t, 0)).collect();
    let touches = |e: Edge, n: i64| {
        let (a, b) = e.endpoints();
        a.norm_inf() <= n || b.norm_inf() <= n
    };

    let mut heap: BinaryHeap<Reverse<Key>> = BinaryHeap::new();
    let mut in_frontier: FxHashSet<Edge> = FxHashSet::default();
    let mut sites: FxHashSet<Site> = FxHashSet::default();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut st = GrowthState { reach: 0, steps: 0 };

    let mut add_site = |s: Site,
                        sites: &mut FxHashSet<Site>,
                        heap: &mut BinaryHeap<Reverse<Key>>,
                        settled: &mut Vec<(i64, f64, usize)>| {
        sites.insert(s);
        for d in 0..4 {
            let e = Edge::from_dir(s, d);
            if in_frontier.insert(e) {
                let w = f.weight(e);
                for (n, t, count) in settled.iter_mut() {
                    if w <= *t && touches(e, *n) {
                        *count += 1;
                    }
                }
                heap.push(Reverse(Key { w, e }));
            }
        }
    };
    add_site(ORIGIN, &mut sites, &mut heap, &mut settled);

    while !stop.fired(&st, &settled) {
        let Reverse(Key { w, e }) = heap.pop().expect("frontier of a lattice cluster is never empty");
        for (n, t, count) in settled.iter_mut() {
            if w <= *t && touches(e, *n) {
                *count -= 1;
            }
        }
        edges.push(e);
        weights.push(w);
        st.steps += 1;
        let (a, b) = e.endpoints();
        for s in [a, b] {
            if !sites.contains(&s) {
                st.reach = st.reach.max(s.norm_inf());
                add_site(s, &mut sites, &mut heap, &mut settled);
            }
        }
    }
    Ok(InvasionCluster { seed, stop: stop.clone(), edges, weights, sites, reach: st.reach })
}

/// Record statistics of an invasion trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStats {
    /// Strict running maxima of the invaded weights, in order.
    pub record_weights: Vec<f64>,
    /// Steps (1-based) at which each record was set.
    pub outlet_steps: Vec<usize>,
    suffix_max: Vec<f64>,
}

impl TraceStats {
    /// Largest weight invaded strictly after step `k` (1-based), or `None`
    /// when nothing was invaded after it.
    pub fn max_weight_after(&self, k: usize) -> Option<f64> {
        self.suffix_max.get(k).copied()
    }
}

impl InvasionCluster {
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn stop_rule(&self) -> &StopRule {
        &self.stop
    }

    pub fn steps(&self) -> usize {
        self.edges.len()
    }

    /// Invaded edges in invasion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sites(&self) -> &FxHashSet<Site> {
        &self.sites
    }

    pub fn contains(&self, s: Site) -> bool {
        self.sites.contains(&s)
    }

    /// Largest `|x|_inf` over cluster sites.
    pub fn reach(&self) -> i64 {
        self.reach
    }

    /// Invaded sites and edges inside `region`. The region must lie strictly
    /// inside the explored radius, otherwise the window could be missing
    /// edges the cluster has not had a chance to invade.
    pub fn window(&self, region: impl Into<Region>) -> Result<SiteSubgraph> {
        let region = region.into();
        let extent = region.extent();
        if extent > 0 && extent >= self.reach {
            return Err(Error::WindowBeyondExploration { requested: extent, explored: self.reach });
        }
        self.window_unchecked(&region)
    }

    /// [`window`](Self::window) without the exploration check.
    pub fn window_unchecked(&self, region: &Region) -> Result<SiteSubgraph> {
        let sites: Vec<Site> = {
            let mut v: Vec<Site> = self.sites.iter().copied().filter(|&s| region.contains(s)).collect();
            v.sort_unstable();
            v
        };
        let edges = self.edges.iter().copied().filter(|e| {
            let (a, b) = e.endpoints();
            region.contains(a) && region.contains(b)
        });
        Ok(SiteSubgraph::from_parts(sites, edges))
    }

    pub fn trace_stats(&self) -> TraceStats {
        let mut record_weights = Vec::new();
        let mut outlet_steps = Vec::new();
        let mut best = f64::NEG_INFINITY;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > best {
                best = w;
                record_weights.push(w);
                outlet_steps.push(i + 1);
            }
        }
        let mut suffix_max = vec![f64::NEG_INFINITY; self.weights.len()];
        let mut run = f64::NEG_INFINITY;
        for i in (0..self.weights.len()).rev() {
            run = run.max(self.weights[i]);
            suffix_max[i] = run;
        }
        TraceStats { record_weights, outlet_steps, suffix_max }
    }

    /// Writes the text snapshot: a header line, then one line per invaded
    /// edge `step x1 y1 x2 y2 weight` with the weight in 17 significant digits.
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        writeln!(out, "# percolab-invasion version={SNAPSHOT_VERSION} seed={seed} stop={}", self.stop.to_compact())?;
        let mut line = String::with_capacity(64);
        for (i, (e, w)) in self.edges.iter().zip(&self.weights).enumerate() {
            let (a, b) = e.endpoints();
            line.clear();
            writeln!(line, "{} {} {} {} {} {:.16e}", i + 1, a.x, a.y, b.x, b.y, w).unwrap();
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = std::io::BufWriter::new(file);
        self.write_snapshot(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_snapshot<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))??;
        let (seed, stop) = parse_header(&header)?;
        let mut cluster = InvasionCluster {
            seed,
            stop,
            edges: Vec::new(),
            weights: Vec::new(),
            sites: FxHashSet::from_iter([ORIGIN]),
            reach: 0,
        };
        for (k, line) in lines.enumerate() {
            let lineno = k + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            if fields.len() != 6 {
                return Err(parse_err(lineno, &format!("expected 6 fields, found {}", fields.len())));
            }
            let int = |i: usize| -> Result<i64> {
                fields[i].parse().map_err(|_| parse_err(lineno, &format!("bad integer `{}`", fields[i])))
            };
            let step = int(0)?;
            if step != cluster.edges.len() as i64 + 1 {
                return Err(parse_err(lineno, &format!("expected step {}, found {step}", cluster.edges.len() + 1)));
            }
            let a = Site::new(int(1)?, int(2)?);
            let b = Site::new(int(3)?, int(4)?);
            let e = Edge::new(a, b).map_err(|err| parse_err(lineno, &err.to_string()))?;
            if e.endpoints() != (a, b) {
                return Err(parse_err(lineno, "edge endpoints not in canonical order"));
            }
            let w: f64 = fields[5].parse().map_err(|_| parse_err(lineno, &format!("bad weight `{}`", fields[5])))?;
            if !(0.0..1.0).contains(&w) {
                return Err(parse_err(lineno, &format!("weight {w} outside [0,1)")));
            }
            if !cluster.sites.contains(&a) && !cluster.sites.contains(&b) {
                return Err(parse_err(lineno, "edge is not adjacent to the cluster"));
            }
            for s in [a, b] {
                if cluster.sites.insert(s) {
                    cluster.reach = cluster.reach.max(s.norm_inf());
                }
            }
            cluster.edges.push(e);
            cluster.weights.push(w);
        }
        Ok(cluster)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_snapshot(std::io::BufReader::new(file))
    }
}

pub const SNAPSHOT_VERSION: u32 = 1;

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

fn parse_header(header: &str) -> Result<(Option<u64>, StopRule)> {
    let rest =
        header.strip_prefix("# percolab-invasion ").ok_or_else(|| parse_err(1, "not a percolab invasion snapshot"))?;
    let (version, rest) = rest.split_once(' ').ok_or_else(|| parse_err(1, "truncated header"))?;
    if version != format!("version={SNAPSHOT_VERSION}") {
        return Err(parse_err(1, &format!("unsupported {version}")));
    }
    let (seed, stop) = rest.split_once(' ').ok_or_else(|| parse_err(1, "truncated header"))?;
    let seed = match seed.strip_prefix("seed=") {
        Some("none") => None,
        Some(s) => Some(s.parse().map_err(|_| parse_err(1, &format!("bad seed `{s}`")))?),
        None => return Err(parse_err(1, "missing seed")),
    };
    let stop = stop.strip_prefix("stop=").ok_or_else(|| parse_err(1, "missing stop rule"))?;
    let stop = serde_json::from_str(stop).map_err(|e| parse_err(1, &format!("bad stop rule: {e}")))?;
    Ok((seed, stop))
}
