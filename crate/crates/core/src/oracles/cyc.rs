use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, QueryMeter, VertexId};
use crate::unionfind::DisjointSets;
use crate::walks::{lazy_walk, Walk};

use super::{wilson_interval, DEFAULT_Z};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heaviness {
    Heavy,
    Light,
    /// The threshold lies inside the confidence interval.
    Uncertain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkStats {
    pub walk: Walk,
    /// Fraction of sampled walks that close a cycle with `walk`.
    pub cyc: f64,
    pub hits: u64,
    pub samples: u64,
    /// Wilson interval at [`DEFAULT_Z`](super::DEFAULT_Z).
    pub interval: (f64, f64),
    /// `1 / sqrt(n)`.
    pub threshold: f64,
    pub heaviness: Heaviness,
}

impl WalkStats {
    /// Point-estimate heaviness, used where every walk must land on one side.
    pub fn is_heavy_estimate(&self) -> bool {
        self.cyc > self.threshold
    }
}

/// Whether `w` and `other` together contain a cycle. The union holds every
/// edge either walk traversed plus every graph edge joining a vertex of
/// `other` to a vertex of `w`; the latter need not have been walked.
pub fn creates_cycle(g: &BoundedDegreeGraph, w: &Walk, other: &Walk) -> bool {
    let mut ids: HashMap<VertexId, usize> = HashMap::new();
    for &v in w.steps().iter().chain(other.steps()) {
        let next = ids.len();
        ids.entry(v).or_insert(next);
    }
    let mut edges: Vec<(VertexId, VertexId)> = w.traversed_edges().chain(other.traversed_edges()).collect();
    let in_w: std::collections::HashSet<VertexId> = w.steps().iter().copied().collect();
    for &u in other.steps() {
        for &v in g.adjacent(u) {
            if in_w.contains(&v) {
                edges.push((u.min(v), u.max(v)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut sets = DisjointSets::new(ids.len());
    edges.iter().any(|(a, b)| !sets.union(ids[a], ids[b]))
}

/// Estimates `cyc_W` from `samples` independent walks of length `ell` from
/// the start of `w`, and labels `w` against the `1/sqrt(n)` threshold.
pub fn estimate_cyc<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    w: &Walk,
    ell: usize,
    samples: usize,
    rng: &mut R,
) -> Result<WalkStats> {
    if samples == 0 {
        return Err(Error::invalid("estimate_cyc needs at least one sample"));
    }
    if !w.is_valid_in(g) {
        return Err(Error::invalid("walk does not follow the graph"));
    }
    let mut meter = QueryMeter::new();
    let mut hits = 0u64;
    for _ in 0..samples {
        let other = lazy_walk(g, w.start(), ell, rng, &mut meter)?;
        if creates_cycle(g, w, &other) {
            hits += 1;
        }
    }
    let n_samples = samples as u64;
    let interval = wilson_interval(hits, n_samples, DEFAULT_Z);
    let threshold = 1.0 / (g.n() as f64).sqrt();
    let heaviness = if interval.0 > threshold {
        Heaviness::Heavy
    } else if interval.1 <= threshold {
        Heaviness::Light
    } else {
        Heaviness::Uncertain
    };
    Ok(WalkStats {
        walk: w.clone(),
        cyc: hits as f64 / samples as f64,
        hits,
        samples: n_samples,
        interval,
        threshold,
        heaviness,
    })
}
