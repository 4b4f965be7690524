//! Cycle Finder and the cycle-freeness tester built on it.
//!
//! The finder runs `m` lazy walks of length `ell` from a start vertex, takes
//! the subgraph induced on every visited vertex and rejects iff that
//! subgraph has a cycle. The tester runs the finder from `num_starts`
//! uniformly sampled starts and rejects iff any run does. Both touch the
//! graph only through the metered oracle.

mod explore;
mod params;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, QueryMeter, VertexId};
use crate::walks::{lazy_step, Walk};

pub use explore::{extract_cycle, verify_certificate, CycleCertificate, ExploredSubgraph};
pub use params::{alpha_lower_bound, DeskPreset, Exploration, ParamMode, TesterParams};

use explore::CycleWatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Accept,
    Reject,
}

/// What happened at one start vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub start: VertexId,
    pub outcome: Outcome,
    /// Walks begun, including a final one cut short by an early reject.
    pub walks: usize,
    pub steps: u64,
    pub visited: usize,
    pub explored_edges: usize,
    pub queries: QueryMeter,
    pub certificate_len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub outcome: Outcome,
    /// Present iff the outcome is a reject.
    pub certificate: Option<CycleCertificate>,
    pub queries: QueryMeter,
    pub starts: Vec<StartSummary>,
}

impl TestVerdict {
    pub fn is_reject(&self) -> bool {
        self.outcome == Outcome::Reject
    }

    /// Distinct vertices explored, summed over starts.
    pub fn visited(&self) -> usize {
        self.starts.iter().map(|s| s.visited).sum()
    }
}

pub fn cycle_finder<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    s: VertexId,
    params: &TesterParams,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> Result<TestVerdict> {
    cycle_finder_observed(g, s, params, rng, meter, None)
}

/// [`cycle_finder`] that hands every finished (or interrupted) walk to
/// `observer`.
pub fn cycle_finder_observed<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    s: VertexId,
    params: &TesterParams,
    rng: &mut R,
    meter: &mut QueryMeter,
    mut observer: Option<&mut dyn FnMut(&Walk)>,
) -> Result<TestVerdict> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: s, n: g.n() });
    }
    let incremental = params.exploration == Exploration::Incremental;
    let before = *meter;
    let mut sub = ExploredSubgraph::new();
    let mut watch = CycleWatch::default();
    // first-visit order, only needed when G' is built after the walks
    let mut pending: Vec<VertexId> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut trace: Vec<VertexId> = Vec::new();
    let mut walks = 0usize;
    let mut steps = 0u64;
    let mut found = false;

    let mut visit = |v: VertexId,
                     sub: &mut ExploredSubgraph,
                     watch: &mut CycleWatch,
                     meter: &mut QueryMeter|
     -> Result<bool> {
        if incremental {
            if sub.contains(v) {
                return Ok(false);
            }
            let nbrs = g.neighbors(v, meter)?;
            sub.insert(v, nbrs);
            Ok(watch.update(sub))
        } else {
            if seen.insert(v) {
                pending.push(v);
            }
            Ok(false)
        }
    };

    found |= visit(s, &mut sub, &mut watch, meter)?;
    'walks: for _ in 0..params.m {
        if found {
            break;
        }
        walks += 1;
        let mut cur = s;
        if observer.is_some() {
            trace.clear();
            trace.push(s);
        }
        for _ in 0..params.ell {
            cur = lazy_step(g, cur, rng, meter)?;
            steps += 1;
            if observer.is_some() {
                trace.push(cur);
            }
            if visit(cur, &mut sub, &mut watch, meter)? {
                found = true;
                if let Some(obs) = observer.as_mut() {
                    obs(&Walk::from_steps(trace.clone())?);
                }
                break 'walks;
            }
        }
        if let Some(obs) = observer.as_mut() {
            obs(&Walk::from_steps(trace.clone())?);
        }
    }

    if !incremental {
        for &v in &pending {
            let nbrs = g.neighbors(v, meter)?;
            sub.insert(v, nbrs);
        }
        found = watch.update(&sub);
    }

    let bound = params.explored_edge_bound(g.d());
    assert!(
        sub.edge_count() <= bound,
        "explored {} edges, above d*m*ell = {bound}",
        sub.edge_count()
    );

    let certificate = if found { watch.certificate(&sub) } else { None };
    debug_assert_eq!(found, certificate.is_some());
    if let Some(cert) = &certificate {
        if cert.len() > params.cert_len_cap {
            log::warn!(
                "certificate of length {} exceeds cap {}",
                cert.len(),
                params.cert_len_cap
            );
        }
    }
    let outcome = if certificate.is_some() {
        Outcome::Reject
    } else {
        Outcome::Accept
    };
    let queries = meter.since(&before);
    Ok(TestVerdict {
        outcome,
        certificate: certificate.clone(),
        queries,
        starts: vec![StartSummary {
            start: s,
            outcome,
            walks,
            steps,
            visited: sub.vertex_count(),
            explored_edges: sub.edge_count(),
            queries,
            certificate_len: certificate.map(|c| c.len()),
        }],
    })
}

/// Samples `num_starts` start vertices uniformly with replacement and runs
/// [`cycle_finder`] from each, stopping at the first reject.
pub fn cycle_freeness_tester<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    params: &TesterParams,
    rng: &mut R,
) -> Result<TestVerdict> {
    cycle_freeness_tester_observed(g, params, rng, None)
}

/// [`cycle_freeness_tester`] with a walk observer shared by all starts.
pub fn cycle_freeness_tester_observed<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    params: &TesterParams,
    rng: &mut R,
    mut observer: Option<&mut dyn FnMut(&Walk)>,
) -> Result<TestVerdict> {
    let mut total = QueryMeter::new();
    let mut starts = Vec::with_capacity(params.num_starts);
    let mut certificate = None;
    for _ in 0..params.num_starts {
        let s = rng.random_range(0..g.n());
        let mut meter = QueryMeter::new();
        let obs = observer.as_mut().map(|o| &mut **o as &mut dyn FnMut(&Walk));
        let run = cycle_finder_observed(g, s, params, rng, &mut meter, obs)?;
        total.merge(&meter);
        starts.extend(run.starts);
        if run.certificate.is_some() {
            certificate = run.certificate;
            break;
        }
    }
    Ok(TestVerdict {
        outcome: if certificate.is_some() {
            Outcome::Reject
        } else {
            Outcome::Accept
        },
        certificate,
        queries: total,
        starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_forest;
    use crate::seeded_rng;

    fn triangle() -> BoundedDegreeGraph {
        BoundedDegreeGraph::from_edges(3, 2, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn forest_is_accepted() {
        let g = gen_forest(200, 3, 5).unwrap();
        let params = TesterParams::explicit(0.1, 30, 20, 5).unwrap();
        for seed in 0..20 {
            let v = cycle_freeness_tester(&g, &params, &mut seeded_rng(seed, 0)).unwrap();
            assert_eq!(v.outcome, Outcome::Accept);
            assert!(v.certificate.is_none());
            assert_eq!(v.starts.len(), 5);
        }
    }

    #[test]
    fn triangle_is_rejected_from_vertex_zero() {
        let g = triangle();
        let params = TesterParams::explicit(0.5, 6, 50, 1).unwrap();
        let mut rejects = 0;
        for seed in 0..100 {
            let mut meter = QueryMeter::new();
            let v = cycle_finder(&g, 0, &params, &mut seeded_rng(seed, 0), &mut meter).unwrap();
            if let Some(cert) = &v.certificate {
                rejects += 1;
                assert_eq!(cert.len(), 3);
                assert!(verify_certificate(&g, cert, &mut QueryMeter::new()));
            }
            assert_eq!(v.queries, meter);
        }
        assert!(rejects >= 99, "{rejects}");
    }

    #[test]
    fn single_vertex_is_accepted() {
        let g = BoundedDegreeGraph::new(1, 3).unwrap();
        let params = TesterParams::explicit(0.5, 10, 10, 3).unwrap();
        let v = cycle_freeness_tester(&g, &params, &mut seeded_rng(0, 0)).unwrap();
        assert_eq!(v.outcome, Outcome::Accept);
    }

    #[test]
    fn both_exploration_modes_agree() {
        let g = crate::generators::gen_planted(60, 3, 2, 8).unwrap();
        let params = TesterParams::explicit(0.1, 12, 8, 1).unwrap();
        for seed in 0..60 {
            let mut m1 = QueryMeter::new();
            let mut m2 = QueryMeter::new();
            let a = cycle_finder(&g, seed as usize % 60, &params, &mut seeded_rng(seed, 0), &mut m1).unwrap();
            let after = params.clone().with_exploration(Exploration::AfterWalks);
            let b = cycle_finder(&g, seed as usize % 60, &after, &mut seeded_rng(seed, 0), &mut m2).unwrap();
            assert_eq!(a.outcome, b.outcome, "seed {seed}");
            assert!(m1.total() <= m2.total());
            if let Outcome::Accept = a.outcome {
                assert_eq!(a.starts[0].visited, b.starts[0].visited);
                assert_eq!(a.starts[0].explored_edges, b.starts[0].explored_edges);
            }
        }
    }

    #[test]
    fn observer_sees_every_walk() {
        let g = gen_forest(30, 3, 1).unwrap();
        let params = TesterParams::explicit(0.5, 7, 4, 1).unwrap();
        let mut walks = Vec::new();
        let mut obs = |w: &Walk| walks.push(w.clone());
        let v = cycle_finder_observed(
            &g,
            0,
            &params,
            &mut seeded_rng(3, 0),
            &mut QueryMeter::new(),
            Some(&mut obs),
        )
        .unwrap();
        assert_eq!(v.outcome, Outcome::Accept);
        assert_eq!(walks.len(), 4);
        assert!(walks.iter().all(|w| w.len() == 7 && w.start() == 0 && w.is_valid_in(&g)));
    }

    #[test]
    fn query_bound_holds() {
        let g = crate::generators::gen_well_connected(100, 4, 2).unwrap();
        let params = TesterParams::explicit(0.1, 15, 10, 4).unwrap();
        for seed in 0..20 {
            let v = cycle_freeness_tester(&g, &params, &mut seeded_rng(seed, 0)).unwrap();
            let visited = v.starts.iter().map(|s| s.visited).max().unwrap();
            assert!(v.queries.total() <= params.query_bound(visited));
            let summed: u64 = v.starts.iter().map(|s| s.queries.total()).sum();
            assert_eq!(summed, v.queries.total());
        }
    }

    #[test]
    fn bad_start_is_an_error() {
        let params = TesterParams::explicit(0.5, 3, 3, 1).unwrap();
        let err = cycle_finder(&triangle(), 3, &params, &mut seeded_rng(0, 0), &mut QueryMeter::new());
        assert!(err.is_err());
    }
}
