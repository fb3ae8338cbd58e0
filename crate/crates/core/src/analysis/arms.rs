use serde::{Deserialize, Serialize};

use super::estimate::{mc_samples, Estimate};
use super::scales::{correlation_length, CorrelationLength};
use crate::percolation::{arm_event, ArmKind, ArmSpec};
use crate::weights::{WeightField, P_C};
use crate::Result;

/// Monte Carlo arm probability at radius `n`.
pub fn arm_probability(kind: ArmKind, n: i64, p: f64, replicas: usize, master: u64) -> Result<Estimate> {
    let spec = ArmSpec::new(kind, n, p);
    spec.validate()?;
    let hits = mc_samples(replicas, master, |seed| arm_event(&WeightField::new(seed), &spec).unwrap_or(false));
    Estimate::from_bools(&hits)
}

/// Arm probabilities over several radii on shared replica seeds.
pub fn arm_scan(kind: ArmKind, radii: &[i64], p: f64, replicas: usize, master: u64) -> Result<Vec<(i64, Estimate)>> {
    radii.iter().map(|&n| Ok((n, arm_probability(kind, n, p, replicas, master)?))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub r: i64,
    pub s: i64,
    /// `ρ̂(r) r / (ρ̂(s) s)`.
    pub normalized: Estimate,
}

/// Normalised two-arm ratios for all pairs `r <= s` of the scan.
pub fn two_arm_ratios(scan: &[(i64, Estimate)]) -> Vec<RatioRow> {
    let mut out = Vec::new();
    for &(r, er) in scan {
        for &(s, es) in scan {
            if r <= s {
                out.push(RatioRow { r, s, normalized: er.ratio(&es).scale(r as f64 / s as f64) });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub p: f64,
    pub length: CorrelationLength,
    /// `π̂₄(L̂(p))` at `p_c`.
    pub pi4: Option<Estimate>,
    /// `(p − p_c) L̂² π̂₄(L̂)`.
    pub product: Option<Estimate>,
    /// Set when `L̂(p)` exceeded the grid.
    pub flagged: bool,
}

/// Near-critical scaling check over a grid of `p`.
pub fn scaling_relation(
    ps: &[f64],
    eps: f64,
    grid: &[i64],
    length_replicas: usize,
    pi4_replicas: usize,
    master: u64,
) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::new();
    for &p in ps {
        let length = correlation_length(p, eps, length_replicas, grid, master)?;
        let row = match length.value {
            Some(l) => {
                let pi4 = arm_probability(ArmKind::FourArmAlternating, l, P_C, pi4_replicas, master ^ 0x5eed_4a4d)?;
                let product = pi4.scale((p - P_C) * (l * l) as f64);
                ScalingRow { p, length, pi4: Some(pi4), product: Some(product), flagged: false }
            }
            None => ScalingRow { p, length, pi4: None, product: None, flagged: true },
        };
        rows.push(row);
    }
    Ok(rows)
}
