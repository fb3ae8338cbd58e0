use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::lattice::{BoxRegion, Edge, Site, ORIGIN};
use crate::subgraph::SiteSubgraph;
use crate::weights::{derive_seed, WeightField, WeightSource, P_C};
use crate::{Error, Result};

/// A critical configuration conditioned on `0 -> ∂S(l)`.
#[derive(Debug, Clone)]
pub struct IicSample {
    pub l: i64,
    pub n: i64,
    /// Seed of the accepted weight field.
    pub field_seed: u64,
    /// Draws used, including the accepted one.
    pub attempts: u64,
    /// The open cluster of the origin inside `S(l)`, restricted to `S(n)`.
    pub window: SiteSubgraph,
    /// An open path from the origin to `∂S(l)`.
    pub certificate: Vec<Site>,
}

impl IicSample {
    pub fn acceptance_rate(&self) -> f64 {
        1.0 / self.attempts as f64
    }
}

/// Rejection sampler: draws fields `derive_seed(seed, a)` for `a = 0, 1, ...`
/// until the origin's critical cluster in `S(l)` reaches `∂S(l)`.
pub fn iic_sample(l: i64, n: i64, max_attempts: u64, seed: u64) -> Result<IicSample> {
    if n < 1 || l < n {
        return Err(Error::InvalidArgument(format!("iic sampler needs 1 <= n <= l, got n={n}, l={l}")));
    }
    for a in 0..max_attempts {
        let field_seed = derive_seed(seed, a);
        let f = WeightField::new(field_seed);
        if let Some((cluster, certificate)) = conditioned_cluster(&f, l) {
            let bx = BoxRegion::centered(n);
            let sites: Vec<Site> = {
                let mut v: Vec<Site> = cluster.into_iter().filter(|s| bx.contains(*s)).collect();
                v.sort_unstable();
                v
            };
            let window = SiteSubgraph::induced(sites, &f.at(P_C));
            return Ok(IicSample { l, n, field_seed, attempts: a + 1, window, certificate });
        }
    }
    Err(Error::RejectionBudgetExhausted { attempts: max_attempts, accepted: 0, rate: 0.0 })
}

/// The critical open cluster of the origin in `S(l)` and a path to `∂S(l)`,
/// if it reaches the boundary.
fn conditioned_cluster<W: WeightSource>(f: &W, l: i64) -> Option<(Vec<Site>, Vec<Site>)> {
    let bx = BoxRegion::centered(l);
    let mut parent: FxHashMap<Site, Site> = FxHashMap::default();
    parent.insert(ORIGIN, ORIGIN);
    let mut order = vec![ORIGIN];
    let mut queue = VecDeque::from([ORIGIN]);
    let mut hit: Option<Site> = None;
    while let Some(v) = queue.pop_front() {
        if bx.on_boundary(v) {
            hit.get_or_insert(v);
            continue;
        }
        for d in 0..4 {
            let w = v.step(d);
            if !parent.contains_key(&w) && f.weight(Edge::from_dir(v, d)) <= P_C {
                parent.insert(w, v);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    let mut x = hit?;
    let mut path = vec![x];
    while x != ORIGIN {
        x = parent[&x];
        path.push(x);
    }
    path.reverse();
    Some((order, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_reaches_boundary() {
        let s = iic_sample(6, 3, 100_000, 5).unwrap();
        assert_eq!(s.certificate.first(), Some(&ORIGIN));
        assert_eq!(s.certificate.last().unwrap().norm_inf(), 6);
        assert!(s.window.contains(ORIGIN));
        assert!(s.certificate.windows(2).all(|w| w[0].dist_l1(w[1]) == 1));
    }

    #[test]
    fn precondition_and_budget() {
        assert!(iic_sample(2, 3, 10, 0).is_err());
        assert!(matches!(iic_sample(4, 2, 0, 3), Err(Error::RejectionBudgetExhausted { .. })));
    }
}
