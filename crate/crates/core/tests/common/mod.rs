//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use percolab::{Edge, EdgeState, Rect, Site, SiteSubgraph};

/// Edge states from an explicit set of open edges.
pub struct OpenSet(pub HashSet<Edge>);

impl EdgeState for OpenSet {
    fn is_open(&self, e: Edge) -> bool {
        self.0.contains(&e)
    }
}

pub fn rect_edges(r: &Rect) -> Vec<Edge> {
    let mut out = Vec::new();
    for x in r.x0..=r.x1 {
        for y in r.y0..=r.y1 {
            if x < r.x1 {
                out.push(Edge::horizontal(x, y));
            }
            if y < r.y1 {
                out.push(Edge::vertical(x, y));
            }
        }
    }
    out
}

/// Union-find over arbitrary keys.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

/// Left-to-right open crossing by union-find.
pub fn crosses_horizontally(r: &Rect, open: &HashSet<Edge>) -> bool {
    let w = (r.x1 - r.x0 + 1) as usize;
    let h = (r.y1 - r.y0 + 1) as usize;
    let id = |s: Site| (s.x - r.x0) as usize + w * (s.y - r.y0) as usize;
    let mut d = Dsu::new(w * h + 2);
    let (left, right) = (w * h, w * h + 1);
    for y in r.y0..=r.y1 {
        d.union(id(Site::new(r.x0, y)), left);
        d.union(id(Site::new(r.x1, y)), right);
    }
    for e in open {
        let (a, b) = e.endpoints();
        if r.contains(a) && r.contains(b) {
            d.union(id(a), id(b));
        }
    }
    d.find(left) == d.find(right)
}

/// Every simple open path from the left side to the right side, or `None`
/// when there are more than `limit`.
pub fn all_crossings(r: &Rect, open: &HashSet<Edge>, limit: usize) -> Option<Vec<Vec<Site>>> {
    fn go(
        r: &Rect,
        open: &HashSet<Edge>,
        path: &mut Vec<Site>,
        on: &mut HashSet<Site>,
        out: &mut Vec<Vec<Site>>,
        limit: usize,
    ) -> bool {
        let v = *path.last().unwrap();
        if v.x == r.x1 {
            out.push(path.clone());
            return out.len() <= limit;
        }
        for w in v.neighbors() {
            if r.contains(w) && !on.contains(&w) && open.contains(&Edge::new(v, w).unwrap()) {
                path.push(w);
                on.insert(w);
                let ok = go(r, open, path, on, out, limit);
                on.remove(&w);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let mut out = Vec::new();
    for y in r.y0..=r.y1 {
        let s = Site::new(r.x0, y);
        let mut path = vec![s];
        let mut on = HashSet::from([s]);
        if !go(r, open, &mut path, &mut on, &mut out, limit) {
            return None;
        }
    }
    Some(out)
}

/// Sites of `r` reachable from its bottom row without touching `path`.
pub fn below_sites(r: &Rect, path: &[Site]) -> BTreeSet<Site> {
    let blocked: HashSet<Site> = path.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Site> = (r.x0..=r.x1).map(|x| Site::new(x, r.y0)).filter(|s| !blocked.contains(s)).collect();
    while let Some(v) = stack.pop() {
        if !r.contains(v) || blocked.contains(&v) || !seen.insert(v) {
            continue;
        }
        stack.extend(v.neighbors());
    }
    seen
}

/// Edge-disjoint left-right crossings via planar duality: the cheapest
/// top-to-bottom dual route, paying one per open edge crossed.
pub fn disjoint_crossings_dual(r: &Rect, open: &HashSet<Edge>) -> u32 {
    let (w, h) = (r.x1 - r.x0, r.y1 - r.y0);
    // faces (i, j) for 0 <= i < w, 0 <= j < h; BOTTOM and TOP outer faces
    let face = |i: i64, j: i64| (i * h.max(1) + j) as usize;
    let n = (w * h.max(1)) as usize;
    let (bottom, top) = (n, n + 1);
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n + 2];
    let mut link = |a: usize, b: usize, e: Edge| {
        let c = u32::from(open.contains(&e));
        adj[a].push((b, c));
        adj[b].push((a, c));
    };
    for i in 0..w {
        for y in 0..=h {
            let e = Edge::horizontal(r.x0 + i, r.y0 + y);
            let below = if y == 0 { bottom } else { face(i, y - 1) };
            let above = if y == h { top } else { face(i, y) };
            link(below, above, e);
        }
    }
    for x in 1..w {
        for j in 0..h {
            link(face(x - 1, j), face(x, j), Edge::vertical(r.x0 + x, r.y0 + j));
        }
    }
    let mut dist = vec![u32::MAX; n + 2];
    let mut dq = VecDeque::from([top]);
    dist[top] = 0;
    while let Some(v) = dq.pop_front() {
        for &(u, c) in &adj[v] {
            if dist[v] + c < dist[u] {
                dist[u] = dist[v] + c;
                if c == 0 {
                    dq.push_front(u);
                } else {
                    dq.push_back(u);
                }
            }
        }
    }
    dist[bottom]
}

/// Whether some open cluster inside the annulus `m <= |x| <= n` contains a
/// cycle winding around the origin. Each site carries the number of times
/// the spanning-tree path to it crosses the ray `{(x, 1/2) : x > 0}`.
pub fn winding_circuit(m: i64, n: i64, open: &dyn Fn(Edge) -> bool) -> bool {
    let inside = |s: Site| (m..=n).contains(&s.norm_inf());
    let crossing = |a: Site, b: Site| -> i64 {
        if a.x == b.x && a.x > 0 {
            match (a.y, b.y) {
                (0, 1) => 1,
                (1, 0) => -1,
                _ => 0,
            }
        } else {
            0
        }
    };
    let mut level: HashMap<Site, i64> = HashMap::new();
    for x in -n..=n {
        for y in -n..=n {
            let s0 = Site::new(x, y);
            if !inside(s0) || level.contains_key(&s0) {
                continue;
            }
            level.insert(s0, 0);
            let mut queue = VecDeque::from([s0]);
            while let Some(v) = queue.pop_front() {
                for w in v.neighbors() {
                    if !inside(w) || !open(Edge::new(v, w).unwrap()) {
                        continue;
                    }
                    let lw = level[&v] + crossing(v, w);
                    match level.get(&w) {
                        Some(&l) if l != lw => return true,
                        Some(_) => {}
                        None => {
                            level.insert(w, lw);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
    }
    false
}

/// All-pairs graph distances.
#[allow(clippy::needless_range_loop)]
pub fn floyd_warshall(g: &SiteSubgraph) -> Vec<Vec<u32>> {
    let k = g.site_count();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; k]; k];
    for i in 0..k {
        d[i][i] = 0;
        for j in g.neighbors(i as u32) {
            d[i][j as usize] = 1;
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Expected exit time from the box of radius `n` for the simple random walk
/// on `Z^2` started at the origin, from the harmonic system
/// `h(x) = 1 + mean of h over neighbours`, `h = 0` on the boundary.
pub fn exact_exit_time(n: i64) -> f64 {
    let side = (2 * n - 1) as usize;
    let idx = |s: Site| ((s.x + n - 1) as usize) + side * ((s.y + n - 1) as usize);
    let k = side * side;
    let mut a = DMatrix::<f64>::zeros(k, k);
    let b = DVector::<f64>::from_element(k, 1.0);
    for x in -(n - 1)..n {
        for y in -(n - 1)..n {
            let s = Site::new(x, y);
            let i = idx(s);
            a[(i, i)] = 1.0;
            for w in s.neighbors() {
                if w.norm_inf() < n {
                    a[(i, idx(w))] -= 0.25;
                }
            }
        }
    }
    let h = a.lu().solve(&b).expect("nonsingular");
    h[idx(Site::new(0, 0))]
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Rejection threshold of the two-sample KS test at level 1%.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// A path graph along the x axis from `-n` to `n`.
pub fn path_graph(n: i64) -> SiteSubgraph {
    let sites: Vec<Site> = (-n..=n).map(|x| Site::new(x, 0)).collect();
    let edges: Vec<Edge> = (-n..n).map(|x| Edge::horizontal(x, 0)).collect();
    SiteSubgraph::from_parts(sites, edges)
}
