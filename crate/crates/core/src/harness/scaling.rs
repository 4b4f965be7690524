use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub mean_queries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// Least-squares slope of `log(queries)` against `log(n)`.
    pub raw_exponent: f64,
    /// Same slope after dividing queries by `log2(n)^3`.
    pub corrected_exponent: f64,
    pub points: Vec<ScalingPoint>,
}

/// Mean queries per distinct `n`, over all cells of the report.
pub fn scaling_points(report: &RunReport) -> Vec<ScalingPoint> {
    let mut by_n: std::collections::BTreeMap<usize, (f64, usize)> = Default::default();
    for row in &report.trials {
        let e = by_n.entry(row.n).or_default();
        e.0 += row.queries as f64;
        e.1 += 1;
    }
    by_n.into_iter()
        .map(|(n, (sum, k))| ScalingPoint {
            n,
            mean_queries: sum / k as f64,
        })
        .collect()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Needs at least five distinct `n` with largest over smallest at least 64,
/// and positive query means.
pub fn scaling_fit(points: &[ScalingPoint]) -> Result<ScalingFit> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 5 {
        return Err(Error::invalid(format!("scaling fit needs 5 distinct n, got {}", ns.len())));
    }
    if ns[0] < 2 || (*ns.last().unwrap() as f64) < 64.0 * ns[0] as f64 {
        return Err(Error::invalid("scaling fit needs n >= 2 spanning a factor of at least 64"));
    }
    if points.iter().any(|p| !(p.mean_queries > 0.0)) {
        return Err(Error::invalid("scaling fit needs positive query counts"));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let raw: Vec<f64> = points.iter().map(|p| p.mean_queries.ln()).collect();
    let corrected: Vec<f64> = points
        .iter()
        .map(|p| (p.mean_queries / (p.n as f64).log2().powi(3)).ln())
        .collect();
    Ok(ScalingFit {
        raw_exponent: slope(&xs, &raw),
        corrected_exponent: slope(&xs, &corrected),
        points: points.to_vec(),
    })
}
