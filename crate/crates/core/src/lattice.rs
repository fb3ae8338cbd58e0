//! Geometry of the square lattice: sites, nearest-neighbour edges, the dual
//! lattice, boxes, annuli and rectangles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A vertex of the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

/// The origin `(0, 0)`.
pub const ORIGIN: Site = Site { x: 0, y: 0 };

/// Unit steps in the fixed order east, north, west, south.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

impl Site {
    pub const fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    /// Sup norm `max(|x|, |y|)`.
    pub fn norm_inf(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist_inf(self, other: Site) -> i64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn dist_l1(self, other: Site) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn offset(self, dx: i64, dy: i64) -> Site {
        Site::new(self.x + dx, self.y + dy)
    }

    /// Neighbour in direction `dir` (0 = E, 1 = N, 2 = W, 3 = S).
    pub fn step(self, dir: usize) -> Site {
        let (dx, dy) = DIRECTIONS[dir];
        self.offset(dx, dy)
    }

    /// The four nearest neighbours in the order E, N, W, S.
    pub fn neighbors(self) -> [Site; 4] {
        [self.step(0), self.step(1), self.step(2), self.step(3)]
    }

    /// Direction index of `other` relative to `self`, if adjacent.
    pub fn direction_to(self, other: Site) -> Option<usize> {
        match (other.x - self.x, other.y - self.y) {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            (-1, 0) => Some(2),
            (0, -1) => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Free function form of [`Site::neighbors`].
pub fn neighbors(s: Site) -> [Site; 4] {
    s.neighbors()
}

/// A nearest-neighbour edge in canonical form: `a < b` lexicographically,
/// so `b` is either `a + e1` or `a + e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    a: Site,
    b: Site,
}

impl Edge {
    /// Builds the canonical edge joining two adjacent sites, in either order.
    pub fn new(u: Site, v: Site) -> Result<Self> {
        if u.dist_l1(v) != 1 {
            return Err(Error::NotAdjacent(u, v));
        }
        Ok(Self::between(u, v))
    }

    /// Canonical edge between sites known to be adjacent.
    pub(crate) fn between(u: Site, v: Site) -> Self {
        debug_assert_eq!(u.dist_l1(v), 1);
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    /// Edge from `s` in direction `dir`.
    pub fn from_dir(s: Site, dir: usize) -> Self {
        Self::between(s, s.step(dir))
    }

    /// Horizontal edge `(x, y) - (x + 1, y)`.
    pub fn horizontal(x: i64, y: i64) -> Self {
        Edge { a: Site::new(x, y), b: Site::new(x + 1, y) }
    }

    /// Vertical edge `(x, y) - (x, y + 1)`.
    pub fn vertical(x: i64, y: i64) -> Self {
        Edge { a: Site::new(x, y), b: Site::new(x, y + 1) }
    }

    pub fn endpoints(self) -> (Site, Site) {
        (self.a, self.b)
    }

    pub fn lower(self) -> Site {
        self.a
    }

    pub fn upper(self) -> Site {
        self.b
    }

    pub fn is_horizontal(self) -> bool {
        self.a.y == self.b.y
    }

    /// The endpoint that is not `s`.
    pub fn other(self, s: Site) -> Site {
        if s == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(self, s: Site) -> bool {
        self.a == s || self.b == s
    }

    /// Canonicalisation is idempotent.
    pub fn canonical(self) -> Self {
        Self::between(self.a, self.b)
    }

    /// The dual edge crossing this one.
    pub fn dual(self) -> DualEdge {
        let Site { x, y } = self.a;
        if self.is_horizontal() {
            // crosses vertically between faces (x, y-1) and (x, y)
            DualEdge { a: DualSite::new(x, y - 1), b: DualSite::new(x, y) }
        } else {
            DualEdge { a: DualSite::new(x - 1, y), b: DualSite::new(x, y) }
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// A face of the square lattice, i.e. a site of the dual lattice. Face
/// `(i, j)` is centred at `(i + 1/2, j + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualSite {
    pub i: i64,
    pub j: i64,
}

impl DualSite {
    pub const fn new(i: i64, j: i64) -> Self {
        DualSite { i, j }
    }

    pub fn step(self, dir: usize) -> DualSite {
        let (dx, dy) = DIRECTIONS[dir];
        DualSite::new(self.i + dx, self.j + dy)
    }

    /// Twice the sup norm of the centre, `max(|2i + 1|, |2j + 1|)`.
    pub fn norm_inf_doubled(self) -> i64 {
        (2 * self.i + 1).abs().max((2 * self.j + 1).abs())
    }

    /// The primal edge crossed when stepping from this face in direction `dir`.
    pub fn crossed_edge(self, dir: usize) -> Edge {
        let (i, j) = (self.i, self.j);
        match dir {
            0 => Edge::vertical(i + 1, j),
            1 => Edge::horizontal(i, j + 1),
            2 => Edge::vertical(i, j),
            _ => Edge::horizontal(i, j),
        }
    }
}

/// A dual edge, stored with canonical (lexicographically ordered) endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualEdge {
    a: DualSite,
    b: DualSite,
}

impl DualEdge {
    pub fn endpoints(self) -> (DualSite, DualSite) {
        (self.a, self.b)
    }

    /// The primal edge this dual edge crosses; inverse of [`Edge::dual`].
    pub fn primal(self) -> Edge {
        let dir = if self.a.i == self.b.i { 1 } else { 0 };
        self.a.crossed_edge(dir)
    }
}

/// `S(n, v) = { x : |x - v|_inf <= n }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxRegion {
    pub center: Site,
    pub radius: i64,
}

impl BoxRegion {
    pub fn new(center: Site, radius: i64) -> Self {
        BoxRegion { center, radius }
    }

    /// `S(n)` centred at the origin.
    pub fn centered(radius: i64) -> Self {
        BoxRegion { center: ORIGIN, radius }
    }

    pub fn contains(&self, s: Site) -> bool {
        s.dist_inf(self.center) <= self.radius
    }

    /// Internal vertex boundary: sites of the box with a neighbour outside.
    pub fn on_boundary(&self, s: Site) -> bool {
        s.dist_inf(self.center) == self.radius
    }

    pub fn site_count(&self) -> usize {
        let side = (2 * self.radius + 1) as usize;
        side * side
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        let c = self.center;
        let r = self.radius;
        (-r..=r).flat_map(move |dy| (-r..=r).map(move |dx| c.offset(dx, dy)))
    }

    /// The `8n` boundary sites for `n >= 1`, or the centre for `n = 0`.
    pub fn boundary(&self) -> Vec<Site> {
        self.sites().filter(|s| self.on_boundary(*s)).collect()
    }
}

/// `S(n) \ S(m)°`: sites with `m <= |x - v|_inf <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annulus {
    pub center: Site,
    pub inner: i64,
    pub outer: i64,
}

impl Annulus {
    pub fn new(center: Site, inner: i64, outer: i64) -> Result<Self> {
        if inner < 0 || inner >= outer {
            return Err(Error::InvalidRegion(format!(
                "annulus needs 0 <= inner < outer, got inner={inner} outer={outer}"
            )));
        }
        Ok(Annulus { center, inner, outer })
    }

    pub fn centered(inner: i64, outer: i64) -> Result<Self> {
        Self::new(ORIGIN, inner, outer)
    }

    pub fn contains(&self, s: Site) -> bool {
        let d = s.dist_inf(self.center);
        self.inner <= d && d <= self.outer
    }

    pub fn on_inner_boundary(&self, s: Site) -> bool {
        s.dist_inf(self.center) == self.inner
    }

    pub fn on_outer_boundary(&self, s: Site) -> bool {
        s.dist_inf(self.center) == self.outer
    }

    pub fn site_count(&self) -> usize {
        let outer = (2 * self.outer + 1) as usize;
        let hole = if self.inner == 0 { 0 } else { (2 * self.inner - 1) as usize };
        outer * outer - hole * hole
    }
}

/// Axis-parallel rectangle `[x0, x1] x [y0, y1]` of lattice sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Rect {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<Self> {
        if x1 < x0 || y1 < y0 {
            return Err(Error::InvalidRegion(format!("empty rectangle [{x0},{x1}]x[{y0},{y1}]")));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    /// `[0, width] x [0, height]`.
    pub fn with_size(width: i64, height: i64) -> Result<Self> {
        Self::new(0, 0, width, height)
    }

    pub fn contains(&self, s: Site) -> bool {
        self.x0 <= s.x && s.x <= self.x1 && self.y0 <= s.y && s.y <= self.y1
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn site_count(&self) -> usize {
        ((self.width() + 1) * (self.height() + 1)) as usize
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| Site::new(x, y)))
    }
}

/// A finite region of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Box(BoxRegion),
    Annulus(Annulus),
    Rect(Rect),
}

impl Region {
    pub fn contains(&self, s: Site) -> bool {
        match self {
            Region::Box(b) => b.contains(s),
            Region::Annulus(a) => a.contains(s),
            Region::Rect(r) => r.contains(s),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Box(b) => b.radius < 0,
            Region::Annulus(a) => a.inner < 0 || a.inner >= a.outer,
            Region::Rect(r) => r.x1 < r.x0 || r.y1 < r.y0,
        }
    }

    /// Sites in row-major order (bottom row first).
    pub fn sites(&self) -> Vec<Site> {
        match self {
            Region::Box(b) => b.sites().collect(),
            Region::Annulus(a) => BoxRegion::new(a.center, a.outer).sites().filter(|s| a.contains(*s)).collect(),
            Region::Rect(r) => r.sites().collect(),
        }
    }

    /// Largest `|x|_inf` over the region.
    pub fn extent(&self) -> i64 {
        match self {
            Region::Box(b) => b.center.norm_inf() + b.radius,
            Region::Annulus(a) => a.center.norm_inf() + a.outer,
            Region::Rect(r) => [r.x0.abs(), r.x1.abs(), r.y0.abs(), r.y1.abs()].into_iter().max().unwrap_or(0),
        }
    }
}

impl From<BoxRegion> for Region {
    fn from(b: BoxRegion) -> Self {
        Region::Box(b)
    }
}

impl From<Annulus> for Region {
    fn from(a: Annulus) -> Self {
        Region::Annulus(a)
    }
}

impl From<Rect> for Region {
    fn from(r: Rect) -> Self {
        Region::Rect(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_of_origin_in_fixed_order() {
        assert_eq!(neighbors(ORIGIN), [Site::new(1, 0), Site::new(0, 1), Site::new(-1, 0), Site::new(0, -1)]);
    }

    #[test]
    fn neighbors_are_at_unit_distance_and_exclude_self() {
        let s = Site::new(2, -3);
        for t in s.neighbors() {
            assert_eq!(s.dist_l1(t), 1);
            assert_ne!(s, t);
        }
    }

    #[test]
    fn edge_rejects_non_adjacent() {
        assert!(Edge::new(ORIGIN, Site::new(1, 1)).is_err());
        assert!(Edge::new(ORIGIN, ORIGIN).is_err());
    }

    #[test]
    fn edge_canonical_order() {
        let e = Edge::new(Site::new(1, 0), ORIGIN).unwrap();
        assert_eq!(e.endpoints(), (ORIGIN, Site::new(1, 0)));
        assert_eq!(e.canonical(), e);
    }

    #[test]
    fn dual_round_trip_both_orientations() {
        for e in [Edge::horizontal(3, -2), Edge::vertical(-1, 4)] {
            assert_eq!(e.dual().primal(), e);
        }
    }

    #[test]
    fn boundary_has_8n_sites() {
        for n in 1..6 {
            assert_eq!(BoxRegion::centered(n).boundary().len(), 8 * n as usize);
        }
        assert_eq!(BoxRegion::centered(0).boundary(), vec![ORIGIN]);
    }

    #[test]
    fn annulus_site_count_matches_enumeration() {
        let a = Annulus::centered(2, 5).unwrap();
        assert_eq!(Region::Annulus(a).sites().len(), a.site_count());
        assert!(Annulus::centered(3, 3).is_err());
    }
}
