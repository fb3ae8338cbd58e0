//! The coupled edge-weight field.
//!
//! Every edge of the lattice carries a weight in `[0, 1)`; an edge is
//! `p`-open when its weight is `<= p`. Weights are never stored: they are
//! produced on demand by a keyed mixing function of `(seed, edge)`, so the
//! same field can be queried over an unbounded region and replayed exactly.

use crate::lattice::Edge;

/// Critical probability of bond percolation on the square lattice.
pub const P_C: f64 = 0.5;

/// Anything that assigns a weight to every edge.
pub trait WeightSource {
    fn weight(&self, e: Edge) -> f64;
}

/// Anything that decides whether an edge is open.
pub trait EdgeState {
    fn is_open(&self, e: Edge) -> bool;
}

#[inline]
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replica `index` of a run with master seed `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Lazy i.i.d. uniform weights keyed by a 64-bit seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightField {
    seed: u64,
}

impl WeightField {
    pub fn new(seed: u64) -> Self {
        WeightField { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Weight of `e`, a 53-bit uniform in `[0, 1)`.
    #[inline]
    pub fn weight(&self, e: Edge) -> f64 {
        let a = e.lower();
        let orient = if e.is_horizontal() { 0u64 } else { 1u64 };
        let mut h = splitmix64(self.seed ^ (a.x as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93));
        h = splitmix64(h ^ (a.y as u64).wrapping_mul(0xA076_1D64_78BD_642F));
        h = splitmix64(h ^ orient);
        (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` iff `weight(e) <= p`.
    #[inline]
    pub fn is_p_open(&self, e: Edge, p: f64) -> bool {
        self.weight(e) <= p
    }

    /// View of this field as a Bernoulli configuration at parameter `p`.
    pub fn at(&self, p: f64) -> OpenAt<'_, WeightField> {
        OpenAt { source: self, p }
    }
}

impl WeightSource for WeightField {
    #[inline]
    fn weight(&self, e: Edge) -> f64 {
        WeightField::weight(self, e)
    }
}

/// Free function form of [`WeightField::weight`].
pub fn weight(f: &WeightField, e: Edge) -> f64 {
    f.weight(e)
}

/// Free function form of [`WeightField::is_p_open`].
pub fn is_p_open(f: &WeightField, e: Edge, p: f64) -> bool {
    f.is_p_open(e, p)
}

/// The `p`-open configuration of a weight source.
#[derive(Debug, Clone, Copy)]
pub struct OpenAt<'a, W: ?Sized> {
    pub source: &'a W,
    pub p: f64,
}

impl<'a, W: WeightSource + ?Sized> OpenAt<'a, W> {
    pub fn new(source: &'a W, p: f64) -> Self {
        OpenAt { source, p }
    }
}

impl<W: WeightSource + ?Sized> EdgeState for OpenAt<'_, W> {
    #[inline]
    fn is_open(&self, e: Edge) -> bool {
        self.source.weight(e) <= self.p
    }
}

/// Complement of an edge state: closed edges become open.
#[derive(Debug, Clone, Copy)]
pub struct Complement<'a, S: ?Sized>(pub &'a S);

impl<S: EdgeState + ?Sized> EdgeState for Complement<'_, S> {
    #[inline]
    fn is_open(&self, e: Edge) -> bool {
        !self.0.is_open(e)
    }
}

impl<F: Fn(Edge) -> bool> EdgeState for F {
    #[inline]
    fn is_open(&self, e: Edge) -> bool {
        self(e)
    }
}

/// Weights read from a table, with a fallback for unlisted edges. Used for
/// hand-built configurations.
#[derive(Debug, Clone, Default)]
pub struct WeightTable {
    pub weights: rustc_hash::FxHashMap<Edge, f64>,
    pub default: f64,
}

impl WeightTable {
    pub fn new(default: f64) -> Self {
        WeightTable { weights: Default::default(), default }
    }

    pub fn set(&mut self, e: Edge, w: f64) {
        self.weights.insert(e, w);
    }
}

impl WeightSource for WeightTable {
    fn weight(&self, e: Edge) -> f64 {
        self.weights.get(&e).copied().unwrap_or(self.default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_is_deterministic_and_in_range() {
        let f = WeightField::new(7);
        let e = Edge::horizontal(3, 4);
        assert_eq!(f.weight(e).to_bits(), f.weight(e).to_bits());
        for x in -20..20 {
            let w = f.weight(Edge::vertical(x, -x));
            assert!((0.0..1.0).contains(&w));
        }
    }

    #[test]
    fn orientation_matters() {
        let f = WeightField::new(1);
        assert_ne!(f.weight(Edge::horizontal(0, 0)), f.weight(Edge::vertical(0, 0)));
    }

    #[test]
    fn p_one_is_always_open() {
        let f = WeightField::new(99);
        for x in 0..100 {
            assert!(f.is_p_open(Edge::horizontal(x, 1), 1.0));
        }
    }
}
