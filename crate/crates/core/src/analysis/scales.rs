use serde::{Deserialize, Serialize};

use super::estimate::{mc_samples, Estimate};
use crate::lattice::Rect;
use crate::percolation::{has_crossing, CrossingSpec};
use crate::weights::{WeightField, P_C};
use crate::{Error, Result};

/// Default `ε` for `L(p, ε)`.
pub const DEFAULT_EPS: f64 = 0.02;

/// Roughly geometric grid of box sizes from 4 to 1024.
pub fn default_grid() -> Vec<i64> {
    vec![4, 6, 8, 11, 16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationLength {
    pub p: f64,
    pub eps: f64,
    /// Smallest qualifying grid size, `None` when the grid is exhausted.
    pub value: Option<i64>,
    /// Crossing estimates for the grid sizes examined.
    pub estimates: Vec<(i64, Estimate)>,
}

/// Estimated square-crossing probability `σ(n, n, p)`; replica `r` uses the
/// same derived seed for every `n` and `p`.
pub fn crossing_probability(n: i64, p: f64, replicas: usize, master: u64) -> Result<Estimate> {
    let rect = Rect::with_size(n, n)?;
    let spec = CrossingSpec::horizontal(rect, p);
    let hits = mc_samples(replicas, master, |seed| has_crossing(&WeightField::new(seed), &spec));
    Estimate::from_bools(&hits)
}

/// `L̂(p, ε)`: the smallest grid size whose crossing estimate minus one
/// standard error reaches `1 − ε`.
pub fn correlation_length(p: f64, eps: f64, replicas: usize, grid: &[i64], master: u64) -> Result<CorrelationLength> {
    if !(p > P_C && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("correlation length needs 1/2 < p <= 1, got {p}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0,1), got {eps}")));
    }
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    let mut estimates = Vec::new();
    for n in grid {
        let e = crossing_probability(n, p, replicas, master)?;
        estimates.push((n, e));
        if e.mean - e.stderr >= 1.0 - eps {
            return Ok(CorrelationLength { p, eps, value: Some(n), estimates });
        }
    }
    Ok(CorrelationLength { p, eps, value: None, estimates })
}

/// `log^(j) n` in base 2.
pub fn iterated_log(n: f64, j: usize) -> f64 {
    (0..j).fold(n, |x, _| x.log2())
}

/// `min { j > 0 : log^(j) n <= 16 }`.
pub fn log_star(n: f64) -> usize {
    let mut j = 1;
    while iterated_log(n, j) > 16.0 {
        j += 1;
    }
    j
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub j: usize,
    pub log_j: f64,
    /// `n / (M log^(j) n)`.
    pub target: f64,
    /// `p_n(j)`, or `None` when even `p = 1` misses the target.
    pub p: Option<f64>,
    pub length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTable {
    pub n: f64,
    pub m: f64,
    pub rows: Vec<ScaleRow>,
}

/// Bisection tolerance in `p`.
pub const P_TOLERANCE: f64 = 1.0 / 4096.0;

/// Builds the scale table using `length(p)` as the correlation-length oracle
/// (`None` meaning "larger than anything measurable"). `length` must be
/// nonincreasing in `p`.
pub fn scale_table(n: f64, m: f64, length: impl Fn(f64) -> Option<f64>) -> Result<ScaleTable> {
    if n < 16.0 || m <= 0.0 {
        return Err(Error::InvalidArgument(format!("scale table needs n >= 16 and M > 0, got n={n}, M={m}")));
    }
    let fits = |p: f64, target: f64| length(p).is_some_and(|l| l <= target);
    let mut rows = Vec::new();
    for j in 1..=log_star(n) {
        let log_j = iterated_log(n, j);
        let target = n / (m * log_j);
        let row = if !fits(1.0, target) {
            ScaleRow { j, log_j, target, p: None, length: None }
        } else {
            let (mut lo, mut hi) = (P_C, 1.0);
            while hi - lo > P_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if fits(mid, target) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            ScaleRow { j, log_j, target, p: Some(hi), length: length(hi) }
        };
        rows.push(row);
    }
    Ok(ScaleTable { n, m, rows })
}

/// Tile size `floor(Q n^{η₂/2} / (log2 n)^{3/2})`.
pub fn compute_q(n: i64, eta2: f64, big_q: f64) -> Result<i64> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("compute_q needs n >= 16, got {n}")));
    }
    let nf = n as f64;
    let q = (big_q * nf.powf(eta2 / 2.0) / nf.log2().powf(1.5)).floor();
    if q < 1.0 {
        return Err(Error::InvalidArgument(format!("tile size {q} < 1 for n={n}, Q={big_q}")));
    }
    Ok(q as i64)
}
