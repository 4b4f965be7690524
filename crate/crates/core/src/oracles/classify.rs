use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, DirectedEdge, VertexId};

use super::sample::{sample_walks, SampleJob};
use super::{wilson_interval, DEFAULT_Z};

/// Outcome of comparing an estimate with a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Judgement {
    Yes,
    No,
    Uncertain,
}

impl Judgement {
    pub fn and(self, other: Judgement) -> Judgement {
        match (self, other) {
            (Judgement::No, _) | (_, Judgement::No) => Judgement::No,
            (Judgement::Yes, Judgement::Yes) => Judgement::Yes,
            _ => Judgement::Uncertain,
        }
    }

    pub fn not(self) -> Judgement {
        match self {
            Judgement::Yes => Judgement::No,
            Judgement::No => Judgement::Yes,
            Judgement::Uncertain => Judgement::Uncertain,
        }
    }

    pub fn is_yes(self) -> bool {
        self == Judgement::Yes
    }

    /// Yes or Uncertain.
    pub fn is_possible(self) -> bool {
        self != Judgement::No
    }

    pub fn is_conclusive(self) -> bool {
        self != Judgement::Uncertain
    }

    /// Whether `hits / trials > threshold`.
    pub fn above(hits: u64, trials: u64, threshold: f64, z: f64) -> Judgement {
        let (lo, hi) = wilson_interval(hits, trials, z);
        if lo > threshold {
            Judgement::Yes
        } else if hi <= threshold {
            Judgement::No
        } else {
            Judgement::Uncertain
        }
    }

    /// Whether `hits / trials < threshold`.
    pub fn below(hits: u64, trials: u64, threshold: f64, z: f64) -> Judgement {
        let (lo, hi) = wilson_interval(hits, trials, z);
        if hi < threshold {
            Judgement::Yes
        } else if lo >= threshold {
            Judgement::No
        } else {
            Judgement::Uncertain
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub alpha: f64,
    pub ell: usize,
    pub samples: usize,
    /// Standard errors behind every label.
    pub z: f64,
    /// The component `S`. `None` takes every vertex whose reach probability
    /// is certainly above `alpha`, plus the start.
    pub component: Option<Vec<VertexId>>,
    /// Companion walks per sample for heavy/light labels; `None` skips blue flags.
    pub cyc_samples: Option<usize>,
    pub seed: u64,
}

impl ClassifyConfig {
    pub fn new(alpha: f64, ell: usize, samples: usize) -> Self {
        Self {
            alpha,
            ell,
            samples,
            z: DEFAULT_Z,
            component: None,
            cyc_samples: None,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Smallest sample count whose worst-case confidence radius at `z` is
/// below `alpha / 8`.
pub fn required_samples(alpha: f64, z: f64) -> usize {
    (4.0 * z / alpha).powi(2).floor() as usize + 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexClass {
    pub vertex: VertexId,
    pub in_component: bool,
    pub q: f64,
    pub reach_count: u64,
    pub isolated: Judgement,
    /// Most frequent induced path, present when `isolated` is not `No`.
    pub dominant_path: Option<Vec<VertexId>>,
    /// Share of reaching walks inducing the top path.
    pub dominant_share: f64,
    /// Probability of reaching `v` by any other path.
    pub other_mass: f64,
    pub q_heavy: Option<f64>,
    pub blue: Option<Judgement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectedEdgeClass {
    pub edge: DirectedEdge,
    pub dominant: Judgement,
    /// Probability of reaching the head without taking this edge last.
    pub avoid_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UndirectedEdgeClass {
    pub u: VertexId,
    pub v: VertexId,
    pub recessive: Judgement,
}

/// Labels for the subgraph induced on the component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeClassification {
    pub s: VertexId,
    pub alpha: f64,
    pub ell: usize,
    pub samples: u64,
    pub z: f64,
    pub component: Vec<VertexId>,
    /// Whether every component vertex is reached with probability at least alpha.
    pub premise: Judgement,
    pub vertices: Vec<VertexClass>,
    /// Both orientations of every edge inside the component.
    pub directed: Vec<DirectedEdgeClass>,
    pub undirected: Vec<UndirectedEdgeClass>,
}

impl EdgeClassification {
    pub fn dominant(&self, tail: VertexId, head: VertexId) -> Option<Judgement> {
        let e = DirectedEdge::new(tail, head);
        self.directed.iter().find(|c| c.edge == e).map(|c| c.dominant)
    }

    pub fn certain_dominant(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        self.directed.iter().filter(|c| c.dominant.is_yes()).map(|c| c.edge)
    }

    /// Fraction of directed-edge labels that are conclusive; 1 when there are none.
    pub fn conclusive_fraction(&self) -> f64 {
        if self.directed.is_empty() {
            return 1.0;
        }
        let k = self.directed.iter().filter(|c| c.dominant.is_conclusive()).count();
        k as f64 / self.directed.len() as f64
    }

    pub fn is_conclusive(&self) -> bool {
        self.directed.iter().all(|c| c.dominant.is_conclusive())
    }
}

/// Monte Carlo dominant/recessive classification from start `s`.
pub fn classify_edges(g: &BoundedDegreeGraph, s: VertexId, cfg: &ClassifyConfig) -> Result<EdgeClassification> {
    let n = g.n();
    if s >= n {
        return Err(Error::VertexOutOfRange { vertex: s, n });
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0,1), got {}", cfg.alpha)));
    }
    let required = required_samples(cfg.alpha, cfg.z);
    if cfg.samples < required {
        return Err(Error::InsufficientSamples {
            given: cfg.samples,
            required,
        });
    }
    let counts = sample_walks(
        g,
        &SampleJob {
            s,
            ell: cfg.ell,
            samples: cfg.samples,
            seed: cfg.seed,
            track_paths: true,
            cyc_samples: cfg.cyc_samples,
        },
    )?;
    let total = counts.samples;
    let (alpha, z) = (cfg.alpha, cfg.z);
    let reach_at_least_alpha = |v: VertexId| {
        if v == s {
            Judgement::Yes
        } else {
            Judgement::above(counts.reach[v], total, alpha, z)
        }
    };

    let mut in_component = vec![false; n];
    let premise = match &cfg.component {
        Some(members) => {
            let mut premise = Judgement::Yes;
            for &v in members {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                in_component[v] = true;
                premise = premise.and(reach_at_least_alpha(v));
            }
            premise
        }
        None => {
            for (v, flag) in in_component.iter_mut().enumerate() {
                *flag = reach_at_least_alpha(v).is_yes();
            }
            Judgement::Yes
        }
    };

    let vertices: Vec<VertexClass> = (0..n)
        .map(|v| {
            let reach = counts.reach[v];
            let top = counts.paths[v]
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
                .map(|(p, &c)| (p.clone(), c));
            let (path, top_count) = top.unwrap_or_default();
            let others = reach - top_count;
            let isolated = if reach == 0 {
                Judgement::No
            } else {
                Judgement::above(top_count, reach, 0.5, z).and(Judgement::below(others, total, alpha / 2.0, z))
            };
            let (q_heavy, blue) = if cfg.cyc_samples.is_some() {
                let sure = Judgement::above(counts.reach_heavy_sure[v], total, alpha / 4.0, z);
                let maybe = Judgement::above(counts.reach_heavy_maybe[v], total, alpha / 4.0, z);
                let blue = match (sure, maybe) {
                    (Judgement::Yes, _) => Judgement::Yes,
                    (_, Judgement::No) => Judgement::No,
                    _ => Judgement::Uncertain,
                };
                (Some(counts.reach_heavy[v] as f64 / total as f64), Some(blue))
            } else {
                (None, None)
            };
            VertexClass {
                vertex: v,
                in_component: in_component[v],
                q: reach as f64 / total as f64,
                reach_count: reach,
                isolated,
                dominant_path: isolated.is_possible().then_some(path),
                dominant_share: if reach == 0 { 0.0 } else { top_count as f64 / reach as f64 },
                other_mass: others as f64 / total as f64,
                q_heavy,
                blue,
            }
        })
        .collect();

    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for (u, v) in g.edges() {
        if !(in_component[u] && in_component[v]) {
            continue;
        }
        let mut pair = [Judgement::No; 2];
        for (k, (tail, head)) in [(u, v), (v, u)].into_iter().enumerate() {
            let via = counts.arrivals[head].get(&tail).copied().unwrap_or(0);
            let avoid = counts.reach[head] - via;
            let dominant = vertices[head]
                .isolated
                .and(Judgement::below(avoid, total, alpha / 2.0, z));
            pair[k] = dominant;
            directed.push(DirectedEdgeClass {
                edge: DirectedEdge::new(tail, head),
                dominant,
                avoid_mass: avoid as f64 / total as f64,
            });
        }
        undirected.push(UndirectedEdgeClass {
            u,
            v,
            recessive: pair[0].not().and(pair[1].not()),
        });
    }

    Ok(EdgeClassification {
        s,
        alpha,
        ell: cfg.ell,
        samples: total,
        z,
        component: (0..n).filter(|&v| in_component[v]).collect(),
        premise,
        vertices,
        directed,
        undirected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph::from_edges(leaves + 1, leaves, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn judgement_algebra() {
        use Judgement::*;
        assert_eq!(Yes.and(Yes), Yes);
        assert_eq!(Yes.and(Uncertain), Uncertain);
        assert_eq!(Uncertain.and(No), No);
        assert_eq!(Uncertain.not(), Uncertain);
        assert_eq!(Judgement::above(900, 1000, 0.5, 5.0), Yes);
        assert_eq!(Judgement::above(500, 1000, 0.5, 5.0), Uncertain);
        assert_eq!(Judgement::below(0, 1000, 0.1, 5.0), Yes);
        assert_eq!(Judgement::below(500, 1000, 0.1, 5.0), No);
    }

    #[test]
    fn too_few_samples_reports_requirement() {
        let cfg = ClassifyConfig::new(0.5, 5, 10);
        match classify_edges(&star(3), 0, &cfg) {
            Err(Error::InsufficientSamples { given, required }) => {
                assert_eq!(given, 10);
                assert_eq!(required, required_samples(0.5, DEFAULT_Z));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn star_edges_point_away_from_center() {
        let g = star(3);
        let cls = classify_edges(&g, 0, &ClassifyConfig::new(0.3, 12, 20_000).with_seed(1)).unwrap();
        assert_eq!(cls.component, vec![0, 1, 2, 3]);
        for leaf in 1..=3 {
            assert_eq!(cls.dominant(0, leaf), Some(Judgement::Yes));
            assert_eq!(cls.dominant(leaf, 0), Some(Judgement::No));
            assert_eq!(cls.vertices[leaf].dominant_path, Some(vec![0, leaf]));
        }
        assert!(cls.undirected.iter().all(|e| e.recessive == Judgement::No));
    }

    #[test]
    fn path_from_end_has_no_recessive_edges() {
        let g = BoundedDegreeGraph::from_edges(4, 2, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let cls = classify_edges(&g, 0, &ClassifyConfig::new(0.2, 40, 20_000).with_seed(2)).unwrap();
        assert!(cls.is_conclusive());
        let dom: Vec<_> = cls.certain_dominant().collect();
        for e in &dom {
            assert!(e.tail < e.head, "{e}");
        }
        assert_eq!(dom.len(), cls.undirected.len());
        assert!(cls.undirected.iter().all(|e| e.recessive == Judgement::No));
    }

    #[test]
    fn triangle_has_a_recessive_edge() {
        let g = BoundedDegreeGraph::from_edges(3, 2, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cls = classify_edges(&g, 0, &ClassifyConfig::new(0.2, 30, 20_000).with_seed(3)).unwrap();
        assert!(cls.undirected.iter().any(|e| e.recessive == Judgement::Yes));
    }

    #[test]
    fn supplied_component_premise() {
        let g = BoundedDegreeGraph::from_edges(4, 2, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut cfg = ClassifyConfig::new(0.9, 2, 20_000);
        cfg.component = Some(vec![0, 1, 2, 3]);
        let cls = classify_edges(&g, 0, &cfg).unwrap();
        assert_eq!(cls.premise, Judgement::No);
    }
}
