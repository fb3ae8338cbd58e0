//! Views of the weight field as a Bernoulli configuration at a fixed
//! parameter: open subgraphs, crossings, circuits and arm events.
//!
//! Every query takes an [`EdgeState`] (or a weight source plus `p`) and only
//! inspects edges inside the supplied finite region. Disjointness is always
//! edge-disjointness checked by unit-capacity max-flow, except for the
//! four-arm event where planarity makes the arms automatically disjoint.

mod arms;
mod circuit;
mod crossing;

pub use arms::{arm_event, arm_event_in, ArmKind, ArmSpec};
pub use circuit::{has_open_circuit, has_open_circuit_in};
pub use crossing::{
    below_region, count_disjoint_crossings, count_disjoint_crossings_in, has_crossing, has_crossing_in,
    lowest_crossing, lowest_crossing_in, CrossingDirection, CrossingSpec,
};

use crate::lattice::Region;
use crate::subgraph::SiteSubgraph;
use crate::weights::{OpenAt, WeightSource};
use crate::{Error, Result};

/// The region's sites together with its `p`-open edges.
pub fn open_subgraph<W: WeightSource + ?Sized>(f: &W, p: f64, region: Region) -> Result<SiteSubgraph> {
    if region.is_empty() {
        return Err(Error::InvalidRegion(format!("{region:?} is empty")));
    }
    Ok(SiteSubgraph::induced(region.sites(), &OpenAt::new(f, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoxRegion, Rect};
    use crate::weights::WeightField;

    #[test]
    fn open_subgraph_extremes() {
        let f = WeightField::new(3);
        let full = open_subgraph(&f, 1.0, BoxRegion::centered(2).into()).unwrap();
        assert_eq!((full.site_count(), full.edge_count()), (25, 40));
        let empty = open_subgraph(&f, 0.0, BoxRegion::centered(2).into()).unwrap();
        assert_eq!((empty.site_count(), empty.edge_count()), (25, 0));
    }

    #[test]
    fn empty_region_is_an_error() {
        let f = WeightField::new(3);
        let r = Region::Rect(Rect { x0: 2, y0: 0, x1: 1, y1: 3 });
        assert!(open_subgraph(&f, 0.5, r).is_err());
    }
}
