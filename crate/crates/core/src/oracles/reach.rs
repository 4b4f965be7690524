use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, VertexId};
use crate::num::Probability;
use crate::walks::reach_probability_exact;

use super::sample::{sample_walks, SampleJob};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum ReachMethod {
    /// Absorbing-chain DP per target; `budget` caps `n * ell * d`.
    Exact { budget: usize },
    /// Empirical over `samples` walks. With `cyc_samples`, each walk is
    /// also labeled heavy or light from that many companion walks.
    MonteCarlo {
        samples: usize,
        seed: u64,
        cyc_samples: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Estimation {
    Exact,
    MonteCarlo { samples: u64, cyc_samples: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachProfile {
    pub s: VertexId,
    pub ell: usize,
    pub q: Vec<f64>,
    /// Reach mass of light walks; Monte Carlo with heaviness only.
    pub q_light: Option<Vec<f64>>,
    pub q_heavy: Option<Vec<f64>>,
    /// Reaching-walk counts behind `q`; Monte Carlo only.
    pub counts: Option<Vec<u64>>,
    pub estimation: Estimation,
}

impl ReachProfile {
    /// `z` standard errors of `q[v]`; zero for exact profiles.
    pub fn radius(&self, v: VertexId, z: f64) -> f64 {
        match self.estimation {
            Estimation::Exact => 0.0,
            Estimation::MonteCarlo { samples, .. } => {
                let q = self.q[v];
                z * (q * (1.0 - q) / samples as f64).sqrt()
            }
        }
    }
}

/// Exact `q_v` for every `v` in the chosen scalar.
pub fn reach_profile_exact<T: Probability>(
    g: &BoundedDegreeGraph,
    s: VertexId,
    ell: usize,
    budget: usize,
) -> Result<Vec<T>> {
    (0..g.n())
        .map(|v| reach_probability_exact(g, s, v, ell, budget))
        .collect()
}

pub fn reach_profile(g: &BoundedDegreeGraph, s: VertexId, ell: usize, method: ReachMethod) -> Result<ReachProfile> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: s, n: g.n() });
    }
    match method {
        ReachMethod::Exact { budget } => Ok(ReachProfile {
            s,
            ell,
            q: reach_profile_exact::<f64>(g, s, ell, budget)?,
            q_light: None,
            q_heavy: None,
            counts: None,
            estimation: Estimation::Exact,
        }),
        ReachMethod::MonteCarlo {
            samples,
            seed,
            cyc_samples,
        } => {
            if samples == 0 {
                return Err(Error::invalid("Monte Carlo reach needs at least one sample"));
            }
            let counts = sample_walks(
                g,
                &SampleJob {
                    s,
                    ell,
                    samples,
                    seed,
                    track_paths: false,
                    cyc_samples,
                },
            )?;
            let total = counts.samples as f64;
            let freq = |c: &[u64]| c.iter().map(|&k| k as f64 / total).collect::<Vec<_>>();
            let (q_light, q_heavy) = if cyc_samples.is_some() {
                let light: Vec<u64> = counts
                    .reach
                    .iter()
                    .zip(&counts.reach_heavy)
                    .map(|(r, h)| r - h)
                    .collect();
                (Some(freq(&light)), Some(freq(&counts.reach_heavy)))
            } else {
                (None, None)
            };
            Ok(ReachProfile {
                s,
                ell,
                q: freq(&counts.reach),
                q_light,
                q_heavy,
                counts: Some(counts.reach),
                estimation: Estimation::MonteCarlo {
                    samples: counts.samples,
                    cyc_samples,
                },
            })
        }
    }
}
