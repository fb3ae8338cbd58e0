use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::flow::{FlowNetwork, INF_CAP};
use crate::lattice::{Edge, Rect, Site};
use crate::weights::{EdgeState, OpenAt, WeightSource};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingDirection {
    /// Left side to right side.
    Horizontal,
    /// Bottom side to top side.
    Vertical,
}

/// A crossing question: is there a `p`-open path joining two opposite sides
/// of `rect`?
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingSpec {
    pub rect: Rect,
    pub direction: CrossingDirection,
    pub p: f64,
}

impl CrossingSpec {
    pub fn horizontal(rect: Rect, p: f64) -> Self {
        CrossingSpec { rect, direction: CrossingDirection::Horizontal, p }
    }

    pub fn vertical(rect: Rect, p: f64) -> Self {
        CrossingSpec { rect, direction: CrossingDirection::Vertical, p }
    }
}

fn on_start_side(rect: &Rect, dir: CrossingDirection, s: Site) -> bool {
    match dir {
        CrossingDirection::Horizontal => s.x == rect.x0,
        CrossingDirection::Vertical => s.y == rect.y0,
    }
}

fn on_end_side(rect: &Rect, dir: CrossingDirection, s: Site) -> bool {
    match dir {
        CrossingDirection::Horizontal => s.x == rect.x1,
        CrossingDirection::Vertical => s.y == rect.y1,
    }
}

fn start_side(rect: &Rect, dir: CrossingDirection) -> Vec<Site> {
    match dir {
        CrossingDirection::Horizontal => (rect.y0..=rect.y1).map(|y| Site::new(rect.x0, y)).collect(),
        CrossingDirection::Vertical => (rect.x0..=rect.x1).map(|x| Site::new(x, rect.y0)).collect(),
    }
}

pub fn has_crossing<W: WeightSource + ?Sized>(f: &W, spec: &CrossingSpec) -> bool {
    has_crossing_in(&OpenAt::new(f, spec.p), &spec.rect, spec.direction)
}

/// Depth-first search from the start side, trying the step towards the
/// target side first; returns as soon as the target side is reached.
pub fn has_crossing_in<S: EdgeState + ?Sized>(state: &S, rect: &Rect, dir: CrossingDirection) -> bool {
    // preferred step order: towards the target, sideways, backwards
    let order: [usize; 4] = match dir {
        CrossingDirection::Horizontal => [0, 1, 3, 2],
        CrossingDirection::Vertical => [1, 0, 2, 3],
    };
    let mut seen: FxHashSet<Site> = FxHashSet::default();
    let mut stack: Vec<Site> = Vec::new();
    for s in start_side(rect, dir).into_iter().rev() {
        if on_end_side(rect, dir, s) {
            return true;
        }
        seen.insert(s);
        stack.push(s);
    }
    while let Some(v) = stack.pop() {
        for &d in order.iter().rev() {
            let w = v.step(d);
            if !rect.contains(w) || seen.contains(&w) || !state.is_open(Edge::from_dir(v, d)) {
                continue;
            }
            if on_end_side(rect, dir, w) {
                return true;
            }
            seen.insert(w);
            stack.push(w);
        }
    }
    false
}

pub fn lowest_crossing<W: WeightSource + ?Sized>(f: &W, spec: &CrossingSpec) -> Result<Option<Vec<Site>>> {
    if spec.direction != CrossingDirection::Horizontal {
        return Err(Error::InvalidArgument("lowest crossing is defined for horizontal crossings".into()));
    }
    Ok(lowest_crossing_in(&OpenAt::new(f, spec.p), &spec.rect))
}

/// The lowest open left-right crossing of `rect`: the crossing whose
/// below-region (see [`below_region`]) is minimal.
///
/// Found by walking from the lowest left-side site that connects to the
/// right side while keeping the region below on the right hand, then
/// erasing loops from the walk.
pub fn lowest_crossing_in<S: EdgeState + ?Sized>(state: &S, rect: &Rect) -> Option<Vec<Site>> {
    let open = |v: Site, d: usize| {
        let w = v.step(d);
        rect.contains(w) && state.is_open(Edge::from_dir(v, d))
    };
    // sites connected to the right side
    let mut reach: FxHashSet<Site> = FxHashSet::default();
    let mut queue: VecDeque<Site> = VecDeque::new();
    for y in rect.y0..=rect.y1 {
        let s = Site::new(rect.x1, y);
        reach.insert(s);
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for d in 0..4 {
            let w = v.step(d);
            if open(v, d) && reach.insert(w) {
                queue.push_back(w);
            }
        }
    }
    let start = (rect.y0..=rect.y1).map(|y| Site::new(rect.x0, y)).find(|s| reach.contains(s))?;

    let mut walk = vec![start];
    let mut v = start;
    let mut heading = 0usize;
    let limit = 8 * rect.site_count() + 8;
    while v.x != rect.x1 {
        let d = [(heading + 3) % 4, heading, (heading + 1) % 4, (heading + 2) % 4]
            .into_iter()
            .find(|&d| open(v, d))
            .expect("start site has an open edge towards the right side");
        v = v.step(d);
        heading = d;
        walk.push(v);
        assert!(walk.len() <= limit, "wall follower failed to terminate");
    }
    Some(loop_erase(&walk))
}

/// Chronological loop erasure of a lattice walk.
pub(crate) fn loop_erase(walk: &[Site]) -> Vec<Site> {
    let mut path: Vec<Site> = Vec::with_capacity(walk.len());
    let mut pos: FxHashMap<Site, usize> = FxHashMap::default();
    for &s in walk {
        if let Some(&i) = pos.get(&s) {
            for t in path.drain(i + 1..) {
                pos.remove(&t);
            }
        } else {
            pos.insert(s, path.len());
            path.push(s);
        }
    }
    path
}

/// `J^-(path)`: every lattice edge with an endpoint that can be joined to the
/// bottom side of `rect` by a lattice path inside `rect` avoiding the sites of
/// `path`. Edge states are irrelevant here; this is pure geometry.
pub fn below_region(rect: &Rect, path: &[Site]) -> FxHashSet<Edge> {
    let blocked: FxHashSet<Site> = path.iter().copied().collect();
    let mut seen: FxHashSet<Site> = FxHashSet::default();
    let mut queue: VecDeque<Site> = VecDeque::new();
    for x in rect.x0..=rect.x1 {
        let s = Site::new(x, rect.y0);
        if !blocked.contains(&s) && seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in v.neighbors() {
            if rect.contains(w) && !blocked.contains(&w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    let mut edges = FxHashSet::default();
    for &s in &seen {
        for d in 0..4 {
            edges.insert(Edge::from_dir(s, d));
        }
    }
    edges
}

pub fn count_disjoint_crossings<W: WeightSource + ?Sized>(f: &W, spec: &CrossingSpec) -> Result<u32> {
    count_disjoint_crossings_in(&OpenAt::new(f, spec.p), &spec.rect, spec.direction)
}

/// Maximum number of pairwise edge-disjoint open crossings, as the value of
/// a unit-capacity flow between super-terminals glued to the two sides.
pub fn count_disjoint_crossings_in<S: EdgeState + ?Sized>(
    state: &S,
    rect: &Rect,
    dir: CrossingDirection,
) -> Result<u32> {
    let degenerate = match dir {
        CrossingDirection::Horizontal => rect.width() == 0,
        CrossingDirection::Vertical => rect.height() == 0,
    };
    if degenerate {
        return Err(Error::InvalidRegion("crossing count needs a rectangle of positive length".into()));
    }
    let sites: Vec<Site> = rect.sites().collect();
    let index: FxHashMap<Site, usize> = sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut net = FlowNetwork::new(sites.len() + 2);
    let (src, sink) = (sites.len(), sites.len() + 1);
    for (i, &s) in sites.iter().enumerate() {
        for d in [0usize, 1] {
            let t = s.step(d);
            if let Some(&j) = index.get(&t) {
                if state.is_open(Edge::from_dir(s, d)) {
                    net.add_undirected(i, j, 1);
                }
            }
        }
        if on_start_side(rect, dir, s) {
            net.add_arc(src, i, INF_CAP);
        }
        if on_end_side(rect, dir, s) {
            net.add_arc(i, sink, INF_CAP);
        }
    }
    Ok(net.max_flow(src, sink, INF_CAP) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightField;

    #[test]
    fn extremes() {
        let f = WeightField::new(11);
        let rect = Rect::with_size(5, 3).unwrap();
        assert!(has_crossing(&f, &CrossingSpec::horizontal(rect, 1.0)));
        assert!(!has_crossing(&f, &CrossingSpec::horizontal(rect, 0.0)));
        assert!(has_crossing(&f, &CrossingSpec::vertical(rect, 1.0)));
    }

    #[test]
    fn all_open_lowest_crossing_is_bottom_row() {
        let f = WeightField::new(0);
        let rect = Rect::with_size(4, 3).unwrap();
        let path = lowest_crossing(&f, &CrossingSpec::horizontal(rect, 1.0)).unwrap().unwrap();
        let bottom: Vec<Site> = (0..=4).map(|x| Site::new(x, 0)).collect();
        assert_eq!(path, bottom);
        assert!(below_region(&rect, &path).is_empty());
    }

    #[test]
    fn no_crossing_gives_none() {
        let f = WeightField::new(0);
        let rect = Rect::with_size(4, 3).unwrap();
        assert_eq!(lowest_crossing(&f, &CrossingSpec::horizontal(rect, 0.0)).unwrap(), None);
    }

    #[test]
    fn vertical_lowest_crossing_is_rejected() {
        let f = WeightField::new(0);
        let rect = Rect::with_size(2, 2).unwrap();
        assert!(lowest_crossing(&f, &CrossingSpec::vertical(rect, 1.0)).is_err());
    }

    #[test]
    fn all_open_crossing_count_is_row_count() {
        let f = WeightField::new(0);
        for h in 0..5 {
            let rect = Rect::with_size(6, h).unwrap();
            let k = count_disjoint_crossings(&f, &CrossingSpec::horizontal(rect, 1.0)).unwrap();
            assert_eq!(k, h as u32 + 1);
            assert_eq!(count_disjoint_crossings(&f, &CrossingSpec::horizontal(rect, 0.0)).unwrap(), 0);
        }
    }

    #[test]
    fn loop_erasure_removes_cycles() {
        let s = |x, y| Site::new(x, y);
        let walk = [s(0, 0), s(1, 0), s(1, 1), s(0, 1), s(0, 0), s(0, -1)];
        assert_eq!(loop_erase(&walk), vec![s(0, 0), s(0, -1)]);
    }
}
