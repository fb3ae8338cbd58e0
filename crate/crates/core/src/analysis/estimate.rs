use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::weights::derive_seed;
use crate::{Error, Result};

/// Monte Carlo mean with standard error `sd / sqrt(replicas)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
}

impl Estimate {
    /// Summarises samples. They are sorted before summation, so the result
    /// does not depend on the order in which replicas finished.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 replicas, got {}", samples.len())));
        }
        let mut v = samples.to_vec();
        v.sort_by(f64::total_cmp);
        let k = v.len() as f64;
        let mean = v.iter().sum::<f64>() / k;
        let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
        dev.sort_by(f64::total_cmp);
        let var = dev.iter().sum::<f64>() / (k - 1.0);
        Ok(Estimate { mean, stderr: (var / k).sqrt(), replicas: v.len() })
    }

    pub fn from_bools(hits: &[bool]) -> Result<Self> {
        let v: Vec<f64> = hits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Self::from_samples(&v)
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }

    /// Multiplies by an exact constant.
    pub fn scale(&self, c: f64) -> Estimate {
        Estimate { mean: self.mean * c, stderr: self.stderr * c.abs(), replicas: self.replicas }
    }

    /// Ratio of independent-ish estimates with first-order error propagation.
    pub fn ratio(&self, other: &Estimate) -> Estimate {
        let mean = self.mean / other.mean;
        let rel = ((self.stderr / self.mean).powi(2) + (other.stderr / other.mean).powi(2)).sqrt();
        Estimate { mean, stderr: (mean * rel).abs(), replicas: self.replicas.min(other.replicas) }
    }
}

/// Evaluates `statistic(seed)` for `replicas` seeds derived from `master` and
/// summarises. Replica `r` always sees `derive_seed(master, r)`.
pub fn mc_estimate<F>(replicas: usize, master: u64, statistic: F) -> Result<Estimate>
where
    F: Fn(u64) -> f64 + Sync,
{
    Estimate::from_samples(&mc_samples(replicas, master, statistic))
}

/// Raw per-replica values, in replica order.
pub fn mc_samples<T, F>(replicas: usize, master: u64, statistic: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    (0..replicas as u64).into_par_iter().map(|r| statistic(derive_seed(master, r))).collect()
}

/// Like [`mc_estimate`] for fallible statistics; failed replicas are dropped
/// and counted.
pub fn mc_try_estimate<F>(replicas: usize, master: u64, statistic: F) -> Result<(Estimate, usize)>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let raw = mc_samples(replicas, master, statistic);
    let failures = raw.iter().filter(|r| r.is_err()).count();
    let ok: Vec<f64> = raw.into_iter().filter_map(|r| r.ok()).collect();
    Ok((Estimate::from_samples(&ok)?, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_statistic() {
        let e = mc_estimate(10, 1, |_| 1.0).unwrap();
        assert_eq!((e.mean, e.stderr, e.replicas), (1.0, 0.0, 10));
    }

    #[test]
    fn one_replica_rejected() {
        assert!(mc_estimate(1, 1, |_| 1.0).is_err());
    }

    #[test]
    fn order_invariant() {
        let xs = [0.1, 3.0, 1e-9, 7.5, 2.25, 1e12];
        let mut ys = xs;
        ys.reverse();
        assert_eq!(Estimate::from_samples(&xs).unwrap(), Estimate::from_samples(&ys).unwrap());
    }
}
