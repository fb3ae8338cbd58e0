//! Finite subgraphs of the square lattice.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::lattice::{Edge, Site};
use crate::weights::EdgeState;

pub type SiteSet = FxHashSet<Site>;

const NONE: u32 = u32::MAX;

/// A finite set of sites together with a set of lattice edges between them.
///
/// Sites are indexed densely in insertion order; adjacency is stored per
/// direction (E, N, W, S) so that edge membership is O(1).
#[derive(Debug, Clone, Default)]
pub struct SiteSubgraph {
    sites: Vec<Site>,
    index: FxHashMap<Site, u32>,
    adj: Vec<[u32; 4]>,
    degree: Vec<u8>,
    edge_count: usize,
}

impl SiteSubgraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a subgraph from sites and edges. Edges whose endpoints are not
    /// both listed are ignored.
    pub fn from_parts<I, J>(sites: I, edges: J) -> Self
    where
        I: IntoIterator<Item = Site>,
        J: IntoIterator<Item = Edge>,
    {
        let mut g = SiteSubgraph::new();
        for s in sites {
            g.add_site(s);
        }
        for e in edges {
            g.add_edge(e);
        }
        g
    }

    /// Sites plus every edge between them that is open in `state`.
    pub fn induced<S: EdgeState + ?Sized>(sites: impl IntoIterator<Item = Site>, state: &S) -> Self {
        let mut g = SiteSubgraph::new();
        for s in sites {
            g.add_site(s);
        }
        for i in 0..g.sites.len() {
            let s = g.sites[i];
            for dir in [0usize, 1] {
                let t = s.step(dir);
                if g.index.contains_key(&t) {
                    let e = Edge::from_dir(s, dir);
                    if state.is_open(e) {
                        g.add_edge(e);
                    }
                }
            }
        }
        g
    }

    /// Adds a site if absent and returns its index.
    pub fn add_site(&mut self, s: Site) -> u32 {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.sites.len() as u32;
        self.sites.push(s);
        self.index.insert(s, i);
        self.adj.push([NONE; 4]);
        self.degree.push(0);
        i
    }

    /// Adds an edge between two member sites. Returns `false` if an endpoint
    /// is missing or the edge is already present.
    pub fn add_edge(&mut self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        let (Some(&iu), Some(&iv)) = (self.index.get(&u), self.index.get(&v)) else {
            return false;
        };
        let du = u.direction_to(v).expect("edge endpoints are adjacent");
        if self.adj[iu as usize][du] != NONE {
            return false;
        }
        self.adj[iu as usize][du] = iv;
        self.adj[iv as usize][(du + 2) % 4] = iu;
        self.degree[iu as usize] += 1;
        self.degree[iv as usize] += 1;
        self.edge_count += 1;
        true
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        let (Some(&iu), Some(&iv)) = (self.index.get(&u), self.index.get(&v)) else {
            return false;
        };
        let du = u.direction_to(v).expect("edge endpoints are adjacent");
        if self.adj[iu as usize][du] == NONE {
            return false;
        }
        self.adj[iu as usize][du] = NONE;
        self.adj[iv as usize][(du + 2) % 4] = NONE;
        self.degree[iu as usize] -= 1;
        self.degree[iv as usize] -= 1;
        self.edge_count -= 1;
        true
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn site(&self, i: u32) -> Site {
        self.sites[i as usize]
    }

    pub fn index_of(&self, s: Site) -> Option<u32> {
        self.index.get(&s).copied()
    }

    pub fn contains(&self, s: Site) -> bool {
        self.index.contains_key(&s)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        let (u, v) = e.endpoints();
        match self.index.get(&u) {
            Some(&iu) => {
                let d = u.direction_to(v).expect("edge endpoints are adjacent");
                self.adj[iu as usize][d] != NONE
            }
            None => false,
        }
    }

    pub fn degree(&self, i: u32) -> usize {
        self.degree[i as usize] as usize
    }

    pub fn degree_of(&self, s: Site) -> usize {
        self.index_of(s).map_or(0, |i| self.degree(i))
    }

    /// Neighbour of node `i` in direction `dir`, if the edge is present.
    #[inline]
    pub fn neighbor_in(&self, i: u32, dir: usize) -> Option<u32> {
        let j = self.adj[i as usize][dir];
        (j != NONE).then_some(j)
    }

    /// Neighbours of node `i` in E, N, W, S order.
    #[inline]
    pub fn neighbors(&self, i: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[i as usize].iter().copied().filter(|&j| j != NONE)
    }

    /// The `k`-th present neighbour of node `i` (`k < degree`).
    #[inline]
    pub fn nth_neighbor(&self, i: u32, k: usize) -> u32 {
        self.neighbors(i).nth(k).expect("k < degree")
    }

    /// Every edge once, in site-insertion order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.sites.iter().enumerate().flat_map(move |(i, &s)| {
            [0usize, 1].into_iter().filter(move |&d| self.adj[i][d] != NONE).map(move |d| Edge::from_dir(s, d))
        })
    }

    /// Sorted edge list, convenient for comparisons.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut e: Vec<Edge> = self.edges().collect();
        e.sort_unstable();
        e
    }

    /// Sorted site list.
    pub fn sorted_sites(&self) -> Vec<Site> {
        let mut s = self.sites.clone();
        s.sort_unstable();
        s
    }

    /// Subgraph induced on the sites satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(Site) -> bool) -> SiteSubgraph {
        let sites: Vec<Site> = self.sites.iter().copied().filter(|&s| keep(s)).collect();
        let mut g = SiteSubgraph::from_parts(sites, std::iter::empty());
        for e in self.edges() {
            g.add_edge(e);
        }
        g
    }

    /// Node indices of the connected component containing `start`.
    pub fn component_of(&self, start: u32) -> Vec<u32> {
        let mut seen = vec![false; self.sites.len()];
        let mut out = vec![start];
        seen[start as usize] = true;
        let mut head = 0;
        while head < out.len() {
            let v = out[head];
            head += 1;
            for w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    out.push(w);
                }
            }
        }
        out
    }

    /// Order-independent fingerprint of the edge and site sets.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = self.sites.len() as u64;
        for s in &self.sites {
            h = h.wrapping_add(crate::weights::splitmix64(
                (s.x as u64).wrapping_mul(0x9E37_79B9) ^ (s.y as u64).rotate_left(32),
            ));
        }
        for e in self.edges() {
            let a = e.lower();
            let o = u64::from(!e.is_horizontal());
            h ^= crate::weights::splitmix64(
                (a.x as u64).wrapping_mul(0xA24B_AED4) ^ (a.y as u64).rotate_left(29) ^ (o << 63),
            );
        }
        h
    }
}

impl EdgeState for SiteSubgraph {
    fn is_open(&self, e: Edge) -> bool {
        self.has_edge(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoxRegion;

    #[test]
    fn full_box_counts() {
        let g = SiteSubgraph::induced(BoxRegion::centered(2).sites(), &|_e: Edge| true);
        assert_eq!(g.site_count(), 25);
        assert_eq!(g.edge_count(), 40);
        assert_eq!(g.edges().count(), 40);
        assert!(g.sites().iter().all(|&s| g.degree_of(s) <= 4));
    }

    #[test]
    fn add_and_remove_edge() {
        let a = Site::new(0, 0);
        let b = Site::new(0, 1);
        let mut g = SiteSubgraph::from_parts([a, b], []);
        assert!(g.add_edge(Edge::new(a, b).unwrap()));
        assert!(!g.add_edge(Edge::new(b, a).unwrap()));
        assert_eq!(g.degree_of(a), 1);
        assert!(g.remove_edge(Edge::new(a, b).unwrap()));
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn edges_with_missing_endpoint_are_ignored() {
        let mut g = SiteSubgraph::from_parts([Site::new(0, 0)], []);
        assert!(!g.add_edge(Edge::horizontal(0, 0)));
    }
}
