//! # percolab
//!
//! A desk-scale laboratory for planar percolation: invasion percolation,
//! critical Bernoulli bond percolation on `Z^2`, and simple random walks on
//! the resulting random graphs.
//!
//! The crate is organised by capability:
//!
//! - [`lattice`] and [`weights`]: geometry and the lazily generated, seeded
//!   edge-weight field that couples all Bernoulli measures at once.
//! - [`percolation`]: open subgraphs, crossings, lowest crossings, disjoint
//!   crossing counts, circuits and arm events.
//! - [`invasion`]: greedy least-weight growth from the origin, windows of the
//!   invaded cluster, outlet statistics and the text snapshot format.
//! - [`metrics`]: chemical distance and backbone extraction.
//! - [`walk`]: random walks, exit times, local times and box-trajectory
//!   accounting for volume comparison.
//! - [`analysis`]: Monte Carlo estimators, power-law fits, correlation length,
//!   scale tables, exact exponent arithmetic and the conditioned sampler.
//! - [`harness`]: experiment configuration, orchestration and output files.
//!
//! Runnable examples for each capability live in `examples/`:
//!
//! ```bash
//! cargo run --release --example invasion_growth
//! cargo run --release --example exit_time_scan
//! ```

pub mod analysis;
pub mod flow;
pub mod harness;
pub mod invasion;
pub mod lattice;
pub mod metrics;
pub mod percolation;
pub mod subgraph;
pub mod walk;
pub mod weights;

pub use lattice::{Annulus, BoxRegion, DualSite, Edge, Rect, Region, Site, ORIGIN};
pub use subgraph::{SiteSet, SiteSubgraph};
pub use weights::{EdgeState, OpenAt, WeightField, WeightSource, P_C};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("sites {0} and {1} are not nearest neighbours")]
    NotAdjacent(Site, Site),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("site {0} has no neighbours in the host graph")]
    IsolatedSite(Site),
    #[error("site {0} is not in the host graph")]
    SiteNotInGraph(Site),
    #[error("window radius {requested} is not covered by exploration radius {explored}")]
    WindowBeyondExploration { requested: i64, explored: i64 },
    #[error("stop rule never terminates on its own: {0}")]
    UnboundedStopRule(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("rejection budget of {attempts} exhausted (accepted {accepted}, rate {rate:.4})")]
    RejectionBudgetExhausted { attempts: u64, accepted: u64, rate: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
