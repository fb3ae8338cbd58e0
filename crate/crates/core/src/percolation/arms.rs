use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::flow::{FlowNetwork, INF_CAP};
use crate::lattice::{BoxRegion, DualSite, Edge, Site};
use crate::weights::{EdgeState, OpenAt, WeightSource, P_C};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmKind {
    /// Open path from the centre to the half-plane `x1 >= c1 + n`.
    OneArmHalfplane,
    /// Open path from the centre to the box boundary.
    OneArmBox,
    /// Two edge-disjoint open paths from the centre to the box boundary.
    TwoArmBox,
    /// Alternating open, closed, open, closed arms around the edge from the
    /// centre to its east neighbour.
    FourArmAlternating,
}

impl ArmKind {
    pub const ALL: [ArmKind; 4] =
        [ArmKind::OneArmHalfplane, ArmKind::OneArmBox, ArmKind::TwoArmBox, ArmKind::FourArmAlternating];

    pub fn name(self) -> &'static str {
        match self {
            ArmKind::OneArmHalfplane => "one_arm_halfplane",
            ArmKind::OneArmBox => "one_arm_box",
            ArmKind::TwoArmBox => "two_arm_box",
            ArmKind::FourArmAlternating => "four_arm_alternating",
        }
    }
}

impl fmt::Display for ArmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ArmKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown arm kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSpec {
    pub kind: ArmKind,
    pub center: Site,
    pub radius: i64,
    /// Parameter for open arms.
    pub p: f64,
    /// Parameter for closed dual arms; an edge is closed iff it is not
    /// `p_dual`-open.
    pub p_dual: f64,
    /// Radius of the box the half-plane search is confined to; defaults to
    /// twice the arm radius.
    pub region_radius: Option<i64>,
}

impl ArmSpec {
    pub fn new(kind: ArmKind, radius: i64, p: f64) -> Self {
        ArmSpec { kind, center: Site::new(0, 0), radius, p, p_dual: P_C, region_radius: None }
    }

    pub fn at(mut self, center: Site) -> Self {
        self.center = center;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidArgument(format!("arm radius must be >= 1, got {}", self.radius)));
        }
        for q in [self.p, self.p_dual] {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidArgument(format!("parameter {q} outside [0,1]")));
            }
        }
        if let Some(r) = self.region_radius {
            if r < self.radius {
                return Err(Error::InvalidArgument(format!(
                    "region radius {r} smaller than arm radius {}",
                    self.radius
                )));
            }
        }
        Ok(())
    }
}

pub fn arm_event<W: WeightSource + ?Sized>(f: &W, spec: &ArmSpec) -> Result<bool> {
    let open = OpenAt::new(f, spec.p);
    let dual_open = OpenAt::new(f, spec.p_dual);
    arm_event_in(&open, &dual_open, spec)
}

/// Arm event for explicit edge states: `open` decides primal arms, and an
/// edge may carry a dual arm iff `dual_open` reports it closed.
pub fn arm_event_in<S: EdgeState + ?Sized, D: EdgeState + ?Sized>(
    open: &S,
    dual_open: &D,
    spec: &ArmSpec,
) -> Result<bool> {
    spec.validate()?;
    let c = spec.center;
    let n = spec.radius;
    let bx = BoxRegion::new(c, n);
    Ok(match spec.kind {
        ArmKind::OneArmBox => reaches(open, c, |s| bx.contains(s), |s| bx.on_boundary(s)),
        ArmKind::OneArmHalfplane => {
            let region = BoxRegion::new(c, spec.region_radius.unwrap_or(2 * n));
            reaches(open, c, |s| region.contains(s), |s| s.x - c.x >= n)
        }
        ArmKind::TwoArmBox => two_arms(open, &bx),
        ArmKind::FourArmAlternating => four_arms(open, dual_open, &bx),
    })
}

fn reaches<S: EdgeState + ?Sized>(
    state: &S,
    start: Site,
    inside: impl Fn(Site) -> bool,
    target: impl Fn(Site) -> bool,
) -> bool {
    if target(start) {
        return true;
    }
    let mut seen: FxHashSet<Site> = FxHashSet::default();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for d in 0..4 {
            let w = v.step(d);
            if !inside(w) || seen.contains(&w) || !state.is_open(Edge::from_dir(v, d)) {
                continue;
            }
            if target(w) {
                return true;
            }
            seen.insert(w);
            stack.push(w);
        }
    }
    false
}

fn two_arms<S: EdgeState + ?Sized>(state: &S, bx: &BoxRegion) -> bool {
    let c = bx.center;
    // the open cluster of the centre inside the box
    let mut index: FxHashMap<Site, usize> = FxHashMap::default();
    let mut order = vec![c];
    index.insert(c, 0);
    let mut head = 0;
    let mut touches = false;
    while head < order.len() {
        let v = order[head];
        head += 1;
        if bx.on_boundary(v) {
            touches = true;
            continue;
        }
        for d in 0..4 {
            let w = v.step(d);
            if !index.contains_key(&w) && state.is_open(Edge::from_dir(v, d)) {
                index.insert(w, order.len());
                order.push(w);
            }
        }
    }
    if !touches {
        return false;
    }
    let sink = order.len();
    let mut net = FlowNetwork::new(order.len() + 1);
    for (i, &v) in order.iter().enumerate() {
        if bx.on_boundary(v) {
            net.add_arc(i, sink, INF_CAP);
            continue;
        }
        for d in 0..4 {
            let w = v.step(d);
            if let Some(&j) = index.get(&w) {
                // interior-interior edges once, interior-boundary edges from the interior side
                if (bx.on_boundary(w) || i < j) && state.is_open(Edge::from_dir(v, d)) {
                    net.add_undirected(i, j, 1);
                }
            }
        }
    }
    net.max_flow(0, sink, 2) >= 2
}

enum Node {
    Primal(Site),
    Dual(DualSite),
}

struct Search {
    queue: VecDeque<Node>,
    done: bool,
}

/// Four searches advanced one node at a time in turn. Primal searches start at
/// the edge's endpoints and avoid the edge; dual searches start at the two
/// faces beside it and avoid crossing it. The event fails as soon as any
/// search runs dry, which keeps typical (failing) samples cheap.
fn four_arms<S: EdgeState + ?Sized, D: EdgeState + ?Sized>(open: &S, dual_open: &D, bx: &BoxRegion) -> bool {
    let c = bx.center;
    let e = Edge::from_dir(c, 0);
    let u = c;
    let v = c.step(0);
    let f1 = DualSite::new(c.x, c.y);
    let f2 = DualSite::new(c.x, c.y - 1);
    let outer2 = 2 * bx.radius + 1;
    let dual_norm = |f: DualSite| DualSite::new(f.i - c.x, f.j - c.y).norm_inf_doubled();

    let mut primal_seen: [FxHashSet<Site>; 2] = Default::default();
    let mut dual_seen: [FxHashSet<DualSite>; 2] = Default::default();
    let mut searches: Vec<Search> = Vec::with_capacity(4);
    for (k, s) in [u, v].into_iter().enumerate() {
        primal_seen[k].insert(s);
        let done = bx.on_boundary(s);
        searches.push(Search { queue: VecDeque::from([Node::Primal(s)]), done });
    }
    for (k, f) in [f1, f2].into_iter().enumerate() {
        dual_seen[k].insert(f);
        searches.push(Search { queue: VecDeque::from([Node::Dual(f)]), done: false });
    }

    loop {
        if searches.iter().all(|s| s.done) {
            return true;
        }
        for k in 0..4 {
            if searches[k].done {
                continue;
            }
            let Some(node) = searches[k].queue.pop_front() else {
                return false;
            };
            match node {
                Node::Primal(x) => {
                    let seen = &mut primal_seen[k];
                    for d in 0..4 {
                        let y = x.step(d);
                        let edge = Edge::from_dir(x, d);
                        if edge == e || !bx.contains(y) || seen.contains(&y) || !open.is_open(edge) {
                            continue;
                        }
                        if bx.on_boundary(y) {
                            searches[k].done = true;
                            break;
                        }
                        seen.insert(y);
                        searches[k].queue.push_back(Node::Primal(y));
                    }
                }
                Node::Dual(g) => {
                    let seen = &mut dual_seen[k - 2];
                    for d in 0..4 {
                        let edge = g.crossed_edge(d);
                        let (a, b) = edge.endpoints();
                        if edge == e || !bx.contains(a) || !bx.contains(b) || dual_open.is_open(edge) {
                            continue;
                        }
                        let h = g.step(d);
                        if seen.contains(&h) {
                            continue;
                        }
                        if dual_norm(h) == outer2 {
                            searches[k].done = true;
                            break;
                        }
                        seen.insert(h);
                        searches[k].queue.push_back(Node::Dual(h));
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightField;

    #[test]
    fn kind_names_round_trip() {
        for k in ArmKind::ALL {
            assert_eq!(k.name().parse::<ArmKind>().unwrap(), k);
        }
        assert!("five_arm".parse::<ArmKind>().is_err());
    }

    #[test]
    fn extremes() {
        let f = WeightField::new(2);
        for k in ArmKind::ALL {
            let mut spec = ArmSpec::new(k, 3, 0.0);
            spec.p_dual = 0.0;
            assert!(!arm_event(&f, &spec).unwrap(), "{k} at p=0");
        }
        for k in [ArmKind::OneArmHalfplane, ArmKind::OneArmBox, ArmKind::TwoArmBox] {
            assert!(arm_event(&f, &ArmSpec::new(k, 3, 1.0)).unwrap(), "{k} at p=1");
        }
    }

    #[test]
    fn zero_radius_rejected() {
        let f = WeightField::new(2);
        assert!(arm_event(&f, &ArmSpec::new(ArmKind::OneArmBox, 0, 0.5)).is_err());
    }

    #[test]
    fn four_arms_on_a_cross() {
        // open: the horizontal axis; everything else closed
        let open = |e: Edge| e.is_horizontal() && e.lower().y == 0;
        let spec = ArmSpec::new(ArmKind::FourArmAlternating, 4, 0.5);
        assert!(arm_event_in(&open, &open, &spec).unwrap());
        let all = |_: Edge| true;
        assert!(!arm_event_in(&all, &all, &spec).unwrap());
    }
}
