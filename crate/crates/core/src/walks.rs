//! Lazy random walks and loop-erased path induction.
//!
//! A lazy step from `v` moves to each neighbor with probability exactly
//! `1/(2d)` and stays put with the remaining `1 - deg(v)/(2d) >= 1/2`.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, QueryMeter, VertexId};
use crate::num::Probability;

/// Default cap on `n * ell * d` for the exact reach-probability DP.
pub const DEFAULT_EXACT_BUDGET: usize = 200_000_000;

/// A lazy-walk trajectory. `steps[0]` is the start; consecutive entries are
/// equal (self-loop) or adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    steps: Vec<VertexId>,
}

impl Walk {
    pub fn from_steps(steps: Vec<VertexId>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::invalid("a walk has at least its start vertex"));
        }
        Ok(Self { steps })
    }

    pub fn start(&self) -> VertexId {
        self.steps[0]
    }

    pub fn end(&self) -> VertexId {
        *self.steps.last().expect("non-empty")
    }

    /// Number of steps taken (trajectory length minus one).
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.steps.len() == 1
    }

    pub fn steps(&self) -> &[VertexId] {
        &self.steps
    }

    /// True if every move follows an edge of `g`.
    pub fn is_valid_in(&self, g: &BoundedDegreeGraph) -> bool {
        self.steps.iter().all(|&v| v < g.n())
            && self
                .steps
                .windows(2)
                .all(|p| p[0] == p[1] || g.has_edge(p[0], p[1]))
    }

    /// Undirected edges actually traversed, as `(min, max)`; self-loops omitted.
    pub fn traversed_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.steps
            .windows(2)
            .filter(|p| p[0] != p[1])
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
    }

    /// One vertex id per line, for debug dumps.
    pub fn to_debug_text(&self) -> String {
        let mut s = String::with_capacity(self.steps.len() * 4);
        for v in &self.steps {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s
    }
}

/// Simple path from a walk's start to some endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InducedPath {
    vertices: Vec<VertexId>,
}

impl InducedPath {
    pub fn from_vertices(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        Self { vertices }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("non-empty")
    }

    /// Edge count.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices.windows(2).map(|p| (p[0], p[1]))
    }

    /// Whether the undirected edge `{u, v}` lies on the path.
    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges().any(|(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }
}

/// One lazy step from `v`. Always charges one degree query, plus one
/// neighbor query when the walk moves.
pub fn lazy_step<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    v: VertexId,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> Result<VertexId> {
    let deg = g.degree(v, meter)?;
    let slot = rng.random_range(0..2 * g.d());
    if slot < deg {
        Ok(g.neighbors(v, meter)?[slot])
    } else {
        Ok(v)
    }
}

pub fn lazy_walk<R: Rng + ?Sized>(
    g: &BoundedDegreeGraph,
    s: VertexId,
    ell: usize,
    rng: &mut R,
    meter: &mut QueryMeter,
) -> Result<Walk> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: s, n: g.n() });
    }
    let mut steps = Vec::with_capacity(ell + 1);
    steps.push(s);
    let mut cur = s;
    for _ in 0..ell {
        cur = lazy_step(g, cur, rng, meter)?;
        steps.push(cur);
    }
    Ok(Walk { steps })
}

/// Exact one-step distribution from `v`: every neighbor at `1/(2d)` and `v`
/// itself at the remaining mass (omitted when zero).
pub fn step_distribution<T: Probability>(g: &BoundedDegreeGraph, v: VertexId) -> Vec<(VertexId, T)> {
    let deg = g.adjacent(v).len();
    let two_d = 2 * g.d();
    let mut out: Vec<(VertexId, T)> = g
        .adjacent(v)
        .iter()
        .map(|&w| (w, T::ratio(1, two_d)))
        .collect();
    if deg < two_d {
        out.push((v, T::ratio(two_d - deg, two_d)));
    }
    out
}

/// Online chronological loop erasure. Feed vertices in walk order; the
/// current path is always simple.
#[derive(Debug, Default, Clone)]
pub struct LoopEraser {
    path: Vec<VertexId>,
    position: HashMap<VertexId, usize>,
}

impl LoopEraser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.path.clear();
        self.position.clear();
    }

    pub fn push(&mut self, v: VertexId) {
        if let Some(&i) = self.position.get(&v) {
            for w in self.path.drain(i + 1..) {
                self.position.remove(&w);
            }
        } else {
            self.position.insert(v, self.path.len());
            self.path.push(v);
        }
    }

    pub fn path(&self) -> &[VertexId] {
        &self.path
    }
}

/// Loop erasure of a whole vertex sequence.
pub fn loop_erase(steps: &[VertexId]) -> Vec<VertexId> {
    let mut eraser = LoopEraser::new();
    for &v in steps {
        eraser.push(v);
    }
    eraser.path
}

/// Path induced by `w` up to its first visit of `target`, or `None` if the
/// walk never gets there.
pub fn induce_path(w: &Walk, target: VertexId) -> Option<InducedPath> {
    let first = w.steps.iter().position(|&v| v == target)?;
    Some(InducedPath {
        vertices: loop_erase(&w.steps[..=first]),
    })
}

/// Exact probability that a lazy walk of `ell` steps from `s` visits `v`
/// (step 0 included, so `v == s` gives one).
pub fn reach_probability_exact<T: Probability>(
    g: &BoundedDegreeGraph,
    s: VertexId,
    v: VertexId,
    ell: usize,
    budget: usize,
) -> Result<T> {
    for x in [s, v] {
        if x >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: g.n() });
        }
    }
    check_budget(g, ell, budget)?;
    if s == v {
        return Ok(T::one());
    }
    Ok(absorbed_mass(g, s, v, ell))
}

pub(crate) fn check_budget(g: &BoundedDegreeGraph, ell: usize, budget: usize) -> Result<()> {
    let cost = g.n().saturating_mul(ell).saturating_mul(g.d());
    if cost > budget {
        return Err(Error::ResourceLimit(format!(
            "exact DP cost n*ell*d = {cost} exceeds budget {budget}"
        )));
    }
    Ok(())
}

fn absorbed_mass<T: Probability>(g: &BoundedDegreeGraph, s: VertexId, target: VertexId, ell: usize) -> T {
    let n = g.n();
    let two_d = 2 * g.d();
    let move_p = T::ratio(1, two_d);
    let stay: Vec<T> = (0..n)
        .map(|u| T::ratio(two_d - g.adjacent(u).len(), two_d))
        .collect();
    let mut mass = vec![T::zero(); n];
    mass[s] = T::one();
    let mut absorbed = T::zero();
    for _ in 0..ell {
        let mut next = vec![T::zero(); n];
        for (u, m) in mass.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            next[u] = next[u].clone() + m.clone() * stay[u].clone();
            let out = m.clone() * move_p.clone();
            for &w in g.adjacent(u) {
                if w == target {
                    absorbed = absorbed + out.clone();
                } else {
                    next[w] = next[w].clone() + out.clone();
                }
            }
        }
        mass = next;
    }
    absorbed
}
