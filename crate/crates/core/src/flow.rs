//! Small integer max-flow used for disjoint-path counting (Menger).
//!
//! Flows in this crate are tiny (a handful of units), so plain BFS
//! augmentation is the right tool.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i32,
}

/// Directed network with residual arcs stored in pairs (`2k`, `2k + 1`).
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    orig: Vec<i32>,
    out: Vec<Vec<usize>>,
}

/// Capacity used for "unbounded" arcs.
pub const INF_CAP: i32 = i32::MAX / 4;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), orig: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    pub fn add_node(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    /// Adds a directed arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i32) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap });
        self.arcs.push(Arc { to: from, cap: 0 });
        self.orig.extend([cap, 0]);
        self.out[from].push(id);
        self.out[to].push(id + 1);
        id
    }

    /// Adds an undirected edge of capacity `cap` in each direction.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: i32) {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap });
        self.arcs.push(Arc { to: u, cap });
        self.orig.extend([cap, cap]);
        self.out[u].push(id);
        self.out[v].push(id + 1);
    }

    /// Flow currently carried by the arc with id `arc` (as returned by
    /// [`add_arc`](Self::add_arc)).
    pub fn flow_on(&self, arc: usize) -> i32 {
        self.orig[arc] - self.arcs[arc].cap
    }

    fn augment(&mut self, s: usize, t: usize, prev: &mut [usize]) -> bool {
        prev.fill(usize::MAX);
        let mut queue = VecDeque::new();
        queue.push_back(s);
        prev[s] = usize::MAX - 1;
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &a in &self.out[v] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && prev[arc.to] == usize::MAX {
                    prev[arc.to] = a;
                    queue.push_back(arc.to);
                }
            }
        }
        if prev[t] == usize::MAX {
            return false;
        }
        let mut v = t;
        while v != s {
            let a = prev[v];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            v = self.arcs[a ^ 1].to;
        }
        true
    }

    /// Pushes unit augmenting paths from `s` to `t` until none remains or
    /// `limit` units have been sent. Returns the flow value.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: i32) -> i32 {
        if s == t {
            return limit;
        }
        let mut prev = vec![usize::MAX; self.out.len()];
        let mut flow = 0;
        while flow < limit && self.augment(s, t, &mut prev) {
            flow += 1;
        }
        flow
    }

    /// Decomposes the current flow into simple `s -> t` node paths, one per
    /// unit. Flow cycles are dropped. Consumes the flow stored in `self`.
    pub fn decompose_paths(&mut self, s: usize, t: usize) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        loop {
            let mut path = vec![s];
            let mut on_path = vec![false; self.out.len()];
            on_path[s] = true;
            let mut v = s;
            while v != t {
                let next = self.out[v].iter().copied().find(|&a| self.orig[a] - self.arcs[a].cap > 0);
                let Some(a) = next else {
                    return paths;
                };
                self.arcs[a].cap += 1;
                self.arcs[a ^ 1].cap -= 1;
                v = self.arcs[a].to;
                if on_path[v] {
                    while let Some(&last) = path.last() {
                        if last == v {
                            break;
                        }
                        on_path[last] = false;
                        path.pop();
                    }
                    continue;
                }
                on_path[v] = true;
                path.push(v);
            }
            paths.push(path);
        }
    }
}
