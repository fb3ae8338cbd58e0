use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::{Error, Result};

/// Least-squares line through `(log2 n, log2 value)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub ci95: (f64, f64),
    /// The fitted `(log2 n, log2 value)` pairs.
    pub points: Vec<(f64, f64)>,
}

impl ExponentFit {
    pub fn ci_width(&self) -> f64 {
        self.ci95.1 - self.ci95.0
    }

    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci95.0 <= x && x <= self.ci95.1
    }
}

pub fn fit_exponent(points: &[(f64, f64)]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {}", points.len())));
    }
    let mut logs = Vec::with_capacity(points.len());
    for &(n, v) in points {
        if !(n > 0.0 && v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("nonpositive point ({n}, {v})")));
        }
        logs.push((n.log2(), v.log2()));
    }
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all points share one abscissa".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let df = k - 2.0;
    let se = (sse / df / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom").inverse_cdf(0.975);
    Ok(ExponentFit { slope, intercept, slope_stderr: se, ci95: (slope - t * se, slope + t * se), points: logs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n: &f64| (n, n.powi(3))).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-9);
        let pts: Vec<(f64, f64)> = [3.0, 5.0, 9.0].iter().map(|&n: &f64| (n, 7.0 * n * n)).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!((f.intercept - 7f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn bad_inputs() {
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }
}
