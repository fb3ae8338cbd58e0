use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::lattice::{Annulus, BoxRegion, DualSite};
use crate::weights::{EdgeState, OpenAt, WeightSource};
use crate::{Error, Result};

pub fn has_open_circuit<W: WeightSource + ?Sized>(f: &W, p: f64, a: &Annulus) -> Result<bool> {
    has_open_circuit_in(&OpenAt::new(f, p), a)
}

/// Whether an open circuit inside the annulus surrounds its hole.
///
/// Decided by planar duality: such a circuit exists iff no closed dual path,
/// crossing only edges of the annulus, joins the inner ring of faces to the
/// outer ring.
pub fn has_open_circuit_in<S: EdgeState + ?Sized>(state: &S, a: &Annulus) -> Result<bool> {
    if a.inner < 1 || a.inner >= a.outer {
        return Err(Error::InvalidRegion(format!(
            "circuit search needs 1 <= inner < outer, got {}..{}",
            a.inner, a.outer
        )));
    }
    let c = a.center;
    let inner2 = 2 * a.inner - 1;
    let outer2 = 2 * a.outer + 1;
    // faces relative to the centre
    let rel = |f: DualSite| DualSite::new(f.i - c.x, f.j - c.y);
    let mut seen: FxHashSet<DualSite> = FxHashSet::default();
    let mut queue: VecDeque<DualSite> = VecDeque::new();
    let hole = BoxRegion::new(c, a.inner);
    for s in hole.boundary() {
        // faces touching the inner boundary from inside have doubled norm inner2
        for (di, dj) in [(0, 0), (-1, 0), (0, -1), (-1, -1)] {
            let f = DualSite::new(s.x + di, s.y + dj);
            if rel(f).norm_inf_doubled() == inner2 && seen.insert(f) {
                queue.push_back(f);
            }
        }
    }
    while let Some(f) = queue.pop_front() {
        if rel(f).norm_inf_doubled() == outer2 {
            return Ok(false);
        }
        for d in 0..4 {
            let e = f.crossed_edge(d);
            let (u, v) = e.endpoints();
            if !a.contains(u) || !a.contains(v) || state.is_open(e) {
                continue;
            }
            let g = f.step(d);
            if seen.insert(g) {
                queue.push_back(g);
            }
        }
    }
    Ok(true)
}
