//! Chemical distance and backbones on finite subgraphs.
//!
//! A site `x` belongs to the backbone between a source set `A` and a target
//! set `B` when it has two paths, vertex-disjoint except at `x`, one ending in
//! `A` and one ending in `B`. Equivalently, `x` lies on a simple path between
//! two super-terminals glued to `A` and `B`, which is what the block-cut tree
//! computes. Sites of `A` and `B` themselves are included whenever they are
//! connected to the other set.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::flow::FlowNetwork;
use crate::lattice::{Annulus, BoxRegion, Site};
use crate::subgraph::{SiteSet, SiteSubgraph};
use crate::{Error, Result};

/// Length in edges of a shortest path in `g` from `a` to `b`, or `None` when
/// no such path exists. Sites outside `g` are ignored.
pub fn chemical_distance(g: &SiteSubgraph, a: &[Site], b: &[Site]) -> Option<u32> {
    let targets: FxHashSet<u32> = b.iter().filter_map(|&s| g.index_of(s)).collect();
    let mut dist = vec![u32::MAX; g.site_count()];
    let mut queue = VecDeque::new();
    for i in a.iter().filter_map(|&s| g.index_of(s)) {
        if targets.contains(&i) {
            return Some(0);
        }
        if dist[i as usize] == u32::MAX {
            dist[i as usize] = 0;
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for w in g.neighbors(v) {
            if dist[w as usize] == u32::MAX {
                if targets.contains(&w) {
                    return Some(dv + 1);
                }
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Source and target sets of a backbone query on some subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackboneQuery {
    pub sources: Vec<Site>,
    pub targets: Vec<Site>,
}

impl BackboneQuery {
    pub fn new(sources: Vec<Site>, targets: Vec<Site>) -> Self {
        BackboneQuery { sources, targets }
    }

    /// Origin-to-`∂S(n)` query for a window of radius `n`.
    pub fn origin_to_boundary(g: &SiteSubgraph, n: i64) -> Self {
        let bx = BoxRegion::centered(n);
        let targets = g.sites().iter().copied().filter(|&s| bx.on_boundary(s)).collect();
        BackboneQuery { sources: vec![Site::new(0, 0)], targets }
    }

    /// Inner-boundary-to-outer-boundary query for an annulus window.
    pub fn annulus(g: &SiteSubgraph, a: &Annulus) -> Self {
        let sources = g.sites().iter().copied().filter(|&s| a.on_inner_boundary(s)).collect();
        let targets = g.sites().iter().copied().filter(|&s| a.on_outer_boundary(s)).collect();
        BackboneQuery { sources, targets }
    }

    fn indices(&self, g: &SiteSubgraph) -> Result<(Vec<u32>, Vec<u32>)> {
        let map = |v: &[Site]| -> Result<Vec<u32>> {
            v.iter().map(|&s| g.index_of(s).ok_or(Error::SiteNotInGraph(s))).collect()
        };
        Ok((map(&self.sources)?, map(&self.targets)?))
    }
}

/// Backbone via biconnected components: the union of the blocks on the
/// block-cut tree path between the two super-terminals. Empty when the
/// sources do not connect to the targets.
pub fn backbone(g: &SiteSubgraph, q: &BackboneQuery) -> Result<SiteSet> {
    let (src, dst) = q.indices(g)?;
    let n = g.site_count();
    let (s_star, t_star) = (n as u32, n as u32 + 1);
    let mut extra: Vec<Vec<u32>> = vec![Vec::new(); n + 2];
    for &a in &src {
        if !extra[n].contains(&a) {
            extra[n].push(a);
            extra[a as usize].push(s_star);
        }
    }
    for &b in &dst {
        if !extra[n + 1].contains(&b) {
            extra[n + 1].push(b);
            extra[b as usize].push(t_star);
        }
    }
    let neighbors = |v: u32| -> Vec<u32> {
        let mut out: Vec<u32> = if (v as usize) < n { g.neighbors(v).collect() } else { Vec::new() };
        out.extend_from_slice(&extra[v as usize]);
        out
    };
    let blocks = biconnected_blocks(n + 2, s_star, neighbors);

    // block-cut tree: vertex nodes 0..n+2, block nodes n+2..
    let nv = n + 2;
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (k, block) in blocks.iter().enumerate() {
        for &v in block {
            member_of[v as usize].push(k);
        }
    }
    let total = nv + blocks.len();
    let mut prev = vec![usize::MAX; total];
    let mut queue = VecDeque::from([s_star as usize]);
    prev[s_star as usize] = s_star as usize;
    while let Some(x) = queue.pop_front() {
        if x == t_star as usize {
            break;
        }
        let next: Vec<usize> = if x < nv {
            member_of[x].iter().map(|&k| nv + k).collect()
        } else {
            blocks[x - nv].iter().map(|&v| v as usize).collect()
        };
        for y in next {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut out = SiteSet::default();
    if prev[t_star as usize] == usize::MAX {
        return Ok(out);
    }
    let mut x = t_star as usize;
    while x != s_star as usize {
        if x >= nv {
            for &v in &blocks[x - nv] {
                if (v as usize) < n {
                    out.insert(g.site(v));
                }
            }
        }
        x = prev[x];
    }
    Ok(out)
}

/// Vertex sets of the biconnected components reachable from `root`
/// (iterative Tarjan).
fn biconnected_blocks(n: usize, root: u32, neighbors: impl Fn(u32) -> Vec<u32>) -> Vec<Vec<u32>> {
    const UNSEEN: u32 = u32::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut parent = vec![UNSEEN; n];
    let mut blocks = Vec::new();
    let mut vstack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, Vec<u32>, usize)> = Vec::new();
    let mut clock = 0u32;

    disc[root as usize] = clock;
    low[root as usize] = clock;
    clock += 1;
    vstack.push(root);
    frames.push((root, neighbors(root), 0));
    while let Some(frame) = frames.last_mut() {
        let v = frame.0;
        if frame.2 < frame.1.len() {
            let w = frame.1[frame.2];
            frame.2 += 1;
            if disc[w as usize] == UNSEEN {
                disc[w as usize] = clock;
                low[w as usize] = clock;
                clock += 1;
                parent[w as usize] = v;
                vstack.push(w);
                frames.push((w, neighbors(w), 0));
            } else if w != parent[v as usize] {
                low[v as usize] = low[v as usize].min(disc[w as usize]);
            }
        } else {
            frames.pop();
            let p = parent[v as usize];
            if p == UNSEEN {
                continue;
            }
            low[p as usize] = low[p as usize].min(low[v as usize]);
            if low[v as usize] >= disc[p as usize] {
                let mut block = vec![p];
                while let Some(u) = vstack.pop() {
                    block.push(u);
                    if u == v {
                        break;
                    }
                }
                blocks.push(block);
            }
        }
    }
    blocks
}

struct OracleNetwork {
    net: FlowNetwork,
    x: usize,
    sink: usize,
    s_star: usize,
    t_star: usize,
    // node id -> site index, for the "out" copy of each split vertex and for x
    owner: Vec<Option<u32>>,
}

fn oracle_network(g: &SiteSubgraph, src: &[u32], dst: &[u32], x: u32) -> OracleNetwork {
    let n = g.site_count();
    // node layout: in(v) = 2v, out(v) = 2v + 1 (x uses 2x for both), then s*, t*, Z
    let (s_star, t_star, sink) = (2 * n, 2 * n + 1, 2 * n + 2);
    let mut net = FlowNetwork::new(2 * n + 3);
    let mut owner = vec![None; 2 * n + 3];
    let node_in = |v: u32| 2 * v as usize;
    let node_out = |v: u32| if v == x { 2 * v as usize } else { 2 * v as usize + 1 };
    for v in 0..n as u32 {
        owner[node_out(v)] = Some(v);
        if v != x {
            net.add_arc(node_in(v), node_out(v), 1);
        }
        for w in g.neighbors(v) {
            net.add_arc(node_out(v), node_in(w), 1);
        }
    }
    let mut seen = FxHashSet::default();
    for &a in src {
        if seen.insert(a) {
            net.add_arc(node_out(a), s_star, 1);
        }
    }
    seen.clear();
    for &b in dst {
        if seen.insert(b) {
            net.add_arc(node_out(b), t_star, 1);
        }
    }
    net.add_arc(s_star, sink, 1);
    net.add_arc(t_star, sink, 1);
    OracleNetwork { net, x: node_in(x), sink, s_star, t_star, owner }
}

/// Independent check of backbone membership by vertex-capacitated max-flow:
/// `x` qualifies iff two units can leave `x`, one through the source
/// terminal and one through the target terminal, with every other vertex
/// used at most once.
pub fn backbone_flow_oracle(g: &SiteSubgraph, q: &BackboneQuery, x: Site) -> Result<bool> {
    let (src, dst) = q.indices(g)?;
    let xi = g.index_of(x).ok_or(Error::SiteNotInGraph(x))?;
    let mut on = oracle_network(g, &src, &dst, xi);
    Ok(on.net.max_flow(on.x, on.sink, 2) == 2)
}

/// The two certificate paths for a backbone site: `(to_source, to_target)`,
/// each starting at `x`, vertex-disjoint except at `x`.
pub fn backbone_certificate(g: &SiteSubgraph, q: &BackboneQuery, x: Site) -> Result<Option<(Vec<Site>, Vec<Site>)>> {
    let (src, dst) = q.indices(g)?;
    let xi = g.index_of(x).ok_or(Error::SiteNotInGraph(x))?;
    let mut on = oracle_network(g, &src, &dst, xi);
    if on.net.max_flow(on.x, on.sink, 2) < 2 {
        return Ok(None);
    }
    let mut to_source = None;
    let mut to_target = None;
    for path in on.net.decompose_paths(on.x, on.sink) {
        let sites: Vec<Site> = path.iter().filter_map(|&node| on.owner[node]).map(|v| g.site(v)).collect();
        let terminal = path[path.len() - 2];
        if terminal == on.s_star {
            to_source = Some(sites);
        } else if terminal == on.t_star {
            to_target = Some(sites);
        }
    }
    Ok(to_source.zip(to_target))
}

/// Backbone of an annulus window between its inner and outer boundaries.
pub fn annulus_backbone(g: &SiteSubgraph, a: &Annulus) -> Result<SiteSet> {
    backbone(g, &BackboneQuery::annulus(g, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Edge;

    fn path_graph(len: i64) -> SiteSubgraph {
        let sites: Vec<Site> = (0..=len).map(|x| Site::new(x, 0)).collect();
        let edges: Vec<Edge> = (0..len).map(|x| Edge::horizontal(x, 0)).collect();
        SiteSubgraph::from_parts(sites, edges)
    }

    #[test]
    fn distance_on_a_path() {
        let g = path_graph(7);
        assert_eq!(chemical_distance(&g, &[Site::new(0, 0)], &[Site::new(7, 0)]), Some(7));
        assert_eq!(chemical_distance(&g, &[Site::new(3, 0)], &[Site::new(3, 0)]), Some(0));
        assert_eq!(chemical_distance(&g, &[Site::new(0, 0)], &[Site::new(0, 5)]), None);
    }

    #[test]
    fn path_with_dangling_leaf() {
        let mut g = path_graph(4);
        g.add_site(Site::new(2, 1));
        g.add_edge(Edge::vertical(2, 0));
        let q = BackboneQuery::new(vec![Site::new(0, 0)], vec![Site::new(4, 0)]);
        let bb = backbone(&g, &q).unwrap();
        assert_eq!(bb.len(), 5);
        assert!(!bb.contains(&Site::new(2, 1)));
        for &s in g.sites() {
            assert_eq!(bb.contains(&s), backbone_flow_oracle(&g, &q, s).unwrap(), "{s}");
        }
    }

    #[test]
    fn disconnected_gives_empty() {
        let g = SiteSubgraph::from_parts([Site::new(0, 0), Site::new(5, 5)], []);
        let q = BackboneQuery::new(vec![Site::new(0, 0)], vec![Site::new(5, 5)]);
        assert!(backbone(&g, &q).unwrap().is_empty());
    }

    #[test]
    fn certificate_paths_are_disjoint() {
        // a square loop with a tail to the target
        let s = Site::new;
        let edges = [
            Edge::horizontal(0, 0),
            Edge::vertical(1, 0),
            Edge::horizontal(0, 1),
            Edge::vertical(0, 0),
            Edge::horizontal(1, 1),
        ];
        let g = SiteSubgraph::from_parts([s(0, 0), s(1, 0), s(1, 1), s(0, 1), s(2, 1)], edges);
        let q = BackboneQuery::new(vec![s(0, 0)], vec![s(2, 1)]);
        let (a, b) = backbone_certificate(&g, &q, s(0, 1)).unwrap().unwrap();
        assert_eq!(a.first(), Some(&s(0, 1)));
        assert_eq!(a.last(), Some(&s(0, 0)));
        assert_eq!(b.last(), Some(&s(2, 1)));
        let inner: FxHashSet<Site> = a[1..].iter().copied().collect();
        assert!(b[1..].iter().all(|t| !inner.contains(t)));
    }
}
