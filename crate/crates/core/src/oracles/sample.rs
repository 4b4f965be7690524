//! Batched Monte Carlo walk sampling shared by the reach and classification
//! oracles. Batch `b` draws from stream `b` of the job seed, so counts do not
//! depend on the number of worker threads.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::{BoundedDegreeGraph, QueryMeter, VertexId};
use crate::seeded_rng;
use crate::walks::{lazy_walk, LoopEraser};

use super::cyc::{estimate_cyc, Heaviness};

const BATCH: usize = 2048;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SampleJob {
    pub s: VertexId,
    pub ell: usize,
    pub samples: usize,
    pub seed: u64,
    pub track_paths: bool,
    pub cyc_samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct WalkCounts {
    pub samples: u64,
    pub reach: Vec<u64>,
    /// Reaching walks with point-estimate `cyc > 1/sqrt(n)`.
    pub reach_heavy: Vec<u64>,
    /// Reaching walks certainly heavy.
    pub reach_heavy_sure: Vec<u64>,
    /// Reaching walks heavy or undecided.
    pub reach_heavy_maybe: Vec<u64>,
    /// First-arrival predecessor counts per vertex.
    pub arrivals: Vec<HashMap<VertexId, u64>>,
    /// Induced-path counts per vertex, when tracked.
    pub paths: Vec<HashMap<Vec<VertexId>, u64>>,
}

impl WalkCounts {
    fn new(n: usize) -> Self {
        Self {
            samples: 0,
            reach: vec![0; n],
            reach_heavy: vec![0; n],
            reach_heavy_sure: vec![0; n],
            reach_heavy_maybe: vec![0; n],
            arrivals: vec![HashMap::new(); n],
            paths: vec![HashMap::new(); n],
        }
    }

    fn merge(mut self, other: WalkCounts) -> Self {
        self.samples += other.samples;
        for v in 0..self.reach.len() {
            self.reach[v] += other.reach[v];
            self.reach_heavy[v] += other.reach_heavy[v];
            self.reach_heavy_sure[v] += other.reach_heavy_sure[v];
            self.reach_heavy_maybe[v] += other.reach_heavy_maybe[v];
        }
        for (mine, theirs) in self.arrivals.iter_mut().zip(other.arrivals) {
            for (k, c) in theirs {
                *mine.entry(k).or_insert(0) += c;
            }
        }
        for (mine, theirs) in self.paths.iter_mut().zip(other.paths) {
            for (k, c) in theirs {
                *mine.entry(k).or_insert(0) += c;
            }
        }
        self
    }
}

fn run_batch(g: &BoundedDegreeGraph, job: &SampleJob, batch: usize, count: usize) -> Result<WalkCounts> {
    let n = g.n();
    let mut rng = seeded_rng(job.seed, batch as u64);
    let mut meter = QueryMeter::new();
    let mut out = WalkCounts::new(n);
    let mut eraser = LoopEraser::new();
    let mut first = vec![false; n];
    let mut reached: Vec<VertexId> = Vec::new();
    for _ in 0..count {
        let walk = lazy_walk(g, job.s, job.ell, &mut rng, &mut meter)?;
        eraser.clear();
        reached.clear();
        let mut prev: Option<VertexId> = None;
        for &v in walk.steps() {
            eraser.push(v);
            if !first[v] {
                first[v] = true;
                reached.push(v);
                if let Some(u) = prev {
                    *out.arrivals[v].entry(u).or_insert(0) += 1;
                }
                if job.track_paths {
                    *out.paths[v].entry(eraser.path().to_vec()).or_insert(0) += 1;
                }
            }
            prev = Some(v);
        }
        let heaviness = match job.cyc_samples {
            Some(k) => Some(estimate_cyc(g, &walk, job.ell, k, &mut rng)?),
            None => None,
        };
        for &v in &reached {
            first[v] = false;
            out.reach[v] += 1;
            if let Some(st) = &heaviness {
                if st.is_heavy_estimate() {
                    out.reach_heavy[v] += 1;
                }
                match st.heaviness {
                    Heaviness::Heavy => {
                        out.reach_heavy_sure[v] += 1;
                        out.reach_heavy_maybe[v] += 1;
                    }
                    Heaviness::Uncertain => out.reach_heavy_maybe[v] += 1,
                    Heaviness::Light => {}
                }
            }
        }
        out.samples += 1;
    }
    Ok(out)
}

pub(crate) fn sample_walks(g: &BoundedDegreeGraph, job: &SampleJob) -> Result<WalkCounts> {
    let batches: Vec<(usize, usize)> = (0..job.samples.div_ceil(BATCH))
        .map(|b| (b, BATCH.min(job.samples - b * BATCH)))
        .collect();
    let parts: Vec<WalkCounts> = batches
        .par_iter()
        .map(|&(b, count)| run_batch(g, job, b, count))
        .collect::<Result<_>>()?;
    Ok(parts
        .into_iter()
        .fold(WalkCounts::new(g.n()), WalkCounts::merge))
}
