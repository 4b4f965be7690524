//! Seeded experiment grids over the instance families, with CSV and JSON
//! reports and a query-scaling fit.

mod scaling;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate, is_eps_far, Family, InstanceSpec};
use crate::graph::QueryMeter;
use crate::oracles::wilson_interval;
use crate::seeded_rng;
use crate::tester::{cycle_freeness_tester, verify_certificate, DeskPreset, Exploration, Outcome, TesterParams};

pub use scaling::{scaling_fit, scaling_points, ScalingFit, ScalingPoint};

/// `z` for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn wilson95(successes: u64, trials: u64) -> (f64, f64) {
    wilson_interval(successes, trials, Z95)
}

/// How tester parameters are derived for each cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum ParamPreset {
    Paper { c: f64 },
    Desk(DeskPreset),
    Explicit { ell: usize, m: usize, num_starts: usize },
}

impl Default for ParamPreset {
    fn default() -> Self {
        ParamPreset::Desk(DeskPreset::default())
    }
}

impl ParamPreset {
    pub fn resolve(&self, n: usize, d: usize, eps: f64) -> Result<TesterParams> {
        match *self {
            ParamPreset::Paper { c } => TesterParams::paper(n, d, eps, c),
            ParamPreset::Desk(preset) => TesterParams::desk(n, eps, preset),
            ParamPreset::Explicit { ell, m, num_starts } => TesterParams::explicit(eps, ell, m, num_starts),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub cells: Vec<CellSpec>,
    pub eps: f64,
    pub preset: ParamPreset,
    pub trials: usize,
    /// Trial `i` of every cell uses seed `seed_base + i`, both for the
    /// instance and (on stream 1) for the tester.
    pub seed_base: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub exploration: Exploration,
    /// Record per-trial wall time. Off by default so reports are reproducible.
    pub timings: bool,
}

impl ExperimentSpec {
    pub fn new(cells: Vec<CellSpec>, eps: f64, preset: ParamPreset, trials: usize, seed_base: u64) -> Self {
        Self {
            cells,
            eps,
            preset,
            trials,
            seed_base,
            workers: None,
            exploration: Exploration::default(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub cell: usize,
    pub trial: usize,
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    pub seed: u64,
    pub distance: usize,
    pub far: bool,
    pub outcome: Outcome,
    pub queries: u64,
    pub neighbor_queries: u64,
    pub degree_queries: u64,
    pub starts_run: usize,
    pub cert_len: Option<usize>,
    /// Certificate re-checked against the instance; empty on accept.
    pub cert_verified: Option<bool>,
    pub cert_within_cap: Option<bool>,
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub eps: f64,
    pub ell: usize,
    pub m: usize,
    pub num_starts: usize,
    pub trials: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub mean_cert_len: Option<f64>,
    pub far_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub spec: ExperimentSpec,
    pub cells: Vec<CellReport>,
    pub trials: Vec<TrialRow>,
}

/// Column order of [`RunReport::to_csv`].
pub const CELL_CSV_HEADER: &str = "family,n,d,eps,ell,m,num_starts,trials,rejections,rejection_rate,ci_low,ci_high,mean_queries,max_queries,mean_cert_len,far_fraction";

/// Column order of [`RunReport::trials_csv`].
pub const TRIAL_CSV_HEADER: &str = "cell,trial,family,n,d,eps,seed,distance,far,outcome,queries,neighbor_queries,degree_queries,starts_run,cert_len,cert_verified,cert_within_cap,elapsed_us";

fn to_csv<T: Serialize>(rows: &[T], header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::invalid(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    Ok(format!("{header}\n{}", String::from_utf8_lossy(&body)))
}

impl RunReport {
    /// One row per cell.
    pub fn to_csv(&self) -> Result<String> {
        to_csv(&self.cells, CELL_CSV_HEADER)
    }

    pub fn trials_csv(&self) -> Result<String> {
        to_csv(&self.trials, TRIAL_CSV_HEADER)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(e.to_string()))
    }

    /// Every reject carries a certificate that re-verified within the length cap.
    pub fn certificates_sound(&self) -> bool {
        self.trials.iter().all(|t| match t.outcome {
            Outcome::Accept => t.cert_len.is_none(),
            Outcome::Reject => t.cert_verified == Some(true) && t.cert_within_cap == Some(true),
        })
    }
}

fn run_trial(spec: &ExperimentSpec, cell_idx: usize, trial: usize) -> Result<TrialRow> {
    let cell = &spec.cells[cell_idx];
    let seed = spec.seed_base.wrapping_add(trial as u64);
    let inst = generate(&InstanceSpec {
        family: cell.family.clone(),
        n: cell.n,
        d: cell.d,
        seed,
    })?;
    let g = &inst.graph;
    let params = spec
        .preset
        .resolve(g.n(), g.d(), spec.eps)?
        .with_exploration(spec.exploration);
    let started = Instant::now();
    let verdict = cycle_freeness_tester(g, &params, &mut seeded_rng(seed, 1))?;
    let elapsed = started.elapsed();
    let cert = verdict.certificate.as_ref();
    Ok(TrialRow {
        cell: cell_idx,
        trial,
        family: cell.family.name().to_string(),
        n: g.n(),
        d: g.d(),
        eps: spec.eps,
        seed,
        distance: inst.distance,
        far: is_eps_far(g, spec.eps),
        outcome: verdict.outcome,
        queries: verdict.queries.total(),
        neighbor_queries: verdict.queries.neighbor_queries(),
        degree_queries: verdict.queries.degree_queries(),
        starts_run: verdict.starts.len(),
        cert_len: cert.map(|c| c.len()),
        cert_verified: cert.map(|c| verify_certificate(g, c, &mut QueryMeter::new())),
        cert_within_cap: cert.map(|c| c.len() <= params.cert_len_cap),
        elapsed_us: spec.timings.then(|| elapsed.as_micros() as u64),
    })
}

fn summarize(spec: &ExperimentSpec, cell_idx: usize, rows: &[TrialRow]) -> Result<CellReport> {
    let cell = &spec.cells[cell_idx];
    let params = spec.preset.resolve(cell.n, cell.d, spec.eps)?;
    let trials = rows.len();
    let rejections = rows.iter().filter(|r| r.outcome == Outcome::Reject).count();
    let (ci_low, ci_high) = wilson95(rejections as u64, trials as u64);
    let lens: Vec<usize> = rows.iter().filter_map(|r| r.cert_len).collect();
    let denom = trials.max(1) as f64;
    Ok(CellReport {
        family: cell.family.name().to_string(),
        n: cell.n,
        d: cell.d,
        eps: spec.eps,
        ell: params.ell,
        m: params.m,
        num_starts: params.num_starts,
        trials,
        rejections,
        rejection_rate: rejections as f64 / denom,
        ci_low,
        ci_high,
        mean_queries: rows.iter().map(|r| r.queries as f64).sum::<f64>() / denom,
        max_queries: rows.iter().map(|r| r.queries).max().unwrap_or(0),
        mean_cert_len: (!lens.is_empty()).then(|| lens.iter().sum::<usize>() as f64 / lens.len() as f64),
        far_fraction: rows.iter().filter(|r| r.far).count() as f64 / denom,
    })
}

/// Runs every (cell, trial) pair. Rows come back ordered by cell, then trial,
/// whatever the worker count.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunReport> {
    use rayon::prelude::*;

    if spec.cells.is_empty() || spec.trials == 0 {
        return Err(Error::invalid("experiment needs at least one cell and one trial"));
    }
    if !(spec.eps > 0.0 && spec.eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {}", spec.eps)));
    }
    let jobs: Vec<(usize, usize)> = (0..spec.cells.len())
        .flat_map(|c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let run = || -> Result<Vec<TrialRow>> {
        jobs.par_iter()
            .map(|&(c, t)| run_trial(spec, c, t))
            .collect()
    };
    let rows = match spec.workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::ResourceLimit(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let cells = (0..spec.cells.len())
        .map(|c| summarize(spec, c, &rows[c * spec.trials..(c + 1) * spec.trials]))
        .collect::<Result<_>>()?;
    Ok(RunReport {
        spec: spec.clone(),
        cells,
        trials: rows,
    })
}
