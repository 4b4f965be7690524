//! Instance families with exact ground truth.
//!
//! Every generator is a pure function of its parameters and seed. The
//! distance to cycle-freeness is the circuit rank `|E| - n + components`,
//! which [`distance_to_cycle_freeness`] computes exactly at any scale.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BoundedDegreeGraph, VertexId};
use crate::seeded_rng;
use crate::unionfind::DisjointSets;

/// Instance family plus its family-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    UniformForest,
    /// `n / cycle_len` vertex-disjoint cycles of length `cycle_len`; the
    /// `n % cycle_len` leftover vertices lengthen some cycles by one.
    DisjointCycles { cycle_len: usize },
    ForestPlusPlantedCycles { planted: usize },
    WellConnectedCyclic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::UniformForest => "uniform-forest",
            Family::DisjointCycles { .. } => "disjoint-cycles",
            Family::ForestPlusPlantedCycles { .. } => "forest-plus-planted-cycles",
            Family::WellConnectedCyclic => "well-connected-cyclic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

/// A generated graph with its exact distance to cycle-freeness.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub graph: BoundedDegreeGraph,
    pub distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarLabel {
    pub eps: f64,
    /// `eps * n * d`; the instance is far iff distance is strictly above it.
    pub threshold: f64,
    pub far: bool,
}

/// Sidecar record written next to a generated edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    #[serde(flatten)]
    pub spec: InstanceSpec,
    pub edges: usize,
    pub components: usize,
    pub distance: usize,
    pub far_labels: Vec<FarLabel>,
}

impl Instance {
    pub fn metadata(&self, eps_values: &[f64]) -> InstanceMetadata {
        let g = &self.graph;
        InstanceMetadata {
            spec: self.spec.clone(),
            edges: g.edge_count(),
            components: component_count(g),
            distance: self.distance,
            far_labels: eps_values
                .iter()
                .map(|&eps| FarLabel {
                    eps,
                    threshold: eps * (g.n() * g.d()) as f64,
                    far: is_eps_far(g, eps),
                })
                .collect(),
        }
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Instance> {
    let graph = match spec.family {
        Family::UniformForest => gen_forest(spec.n, spec.d, spec.seed)?,
        Family::DisjointCycles { cycle_len } => disjoint_cycles(cycle_len, spec.n, spec.d, spec.seed)?,
        Family::ForestPlusPlantedCycles { planted } => gen_planted(spec.n, spec.d, planted, spec.seed)?,
        Family::WellConnectedCyclic => gen_well_connected(spec.n, spec.d, spec.seed)?,
    };
    let distance = distance_to_cycle_freeness(&graph);
    Ok(Instance {
        spec: spec.clone(),
        graph,
        distance,
    })
}

/// Random recursive forest under the degree cap: vertex `v` either starts a
/// new tree or attaches to a uniformly chosen earlier vertex with spare degree.
pub fn gen_forest(n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    attachment_forest(n, d, seed, false)
}

/// Like [`gen_forest`] but every vertex attaches, giving a single tree.
pub fn gen_tree(n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if d == 1 && n > 2 {
        return Err(Error::invalid(format!("no tree on {n} vertices has max degree 1")));
    }
    attachment_forest(n, d, seed, true)
}

fn attachment_forest(n: usize, d: usize, seed: u64, connected: bool) -> Result<BoundedDegreeGraph> {
    let mut g = BoundedDegreeGraph::new(n, d)?;
    let mut rng = seeded_rng(seed, 0);
    // vertices that still have spare degree
    let mut open: Vec<VertexId> = vec![0];
    for v in 1..n {
        let choices = if connected { open.len() } else { open.len() + 1 };
        let pick = if choices == 0 { None } else { Some(rng.random_range(0..choices)) };
        match pick {
            Some(i) if i < open.len() => {
                let parent = open[i];
                g.add_edge(parent, v)?;
                if g.adjacent(parent).len() == d {
                    open.swap_remove(i);
                }
                if g.adjacent(v).len() < d {
                    open.push(v);
                }
            }
            _ => open.push(v),
        }
    }
    Ok(g)
}

/// `1/eps` as an integer cycle length, if it is one and at least 3.
pub fn cycle_len_for_eps(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    let inv = 1.0 / eps;
    let k = inv.round();
    if (inv - k).abs() > 1e-9 * inv || k < 3.0 {
        return Err(Error::invalid(format!("1/eps = {inv} is not an integer >= 3")));
    }
    Ok(k as usize)
}

/// `eps * n` disjoint cycles of length `1/eps`, degree cap 2. `n` must be
/// a multiple of `1/eps`.
pub fn gen_disjoint_cycles(eps: f64, n: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    let len = cycle_len_for_eps(eps)?;
    if n == 0 || n % len != 0 {
        return Err(Error::invalid(format!("n = {n} is not a positive multiple of {len}")));
    }
    disjoint_cycles(len, n, 2, seed)
}

/// `n / cycle_len` disjoint cycles over a seeded relabeling of `0..n`, of
/// length `cycle_len` when it divides `n`. Otherwise the leftover vertices
/// are spread round-robin, so a few cycles are longer.
pub fn disjoint_cycles(cycle_len: usize, n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if cycle_len < 3 {
        return Err(Error::invalid("cycles need length at least 3"));
    }
    if n < cycle_len {
        return Err(Error::invalid(format!("n = {n} is below the cycle length {cycle_len}")));
    }
    if d < 2 {
        return Err(Error::invalid("cycles need degree bound at least 2"));
    }
    let mut labels: Vec<VertexId> = (0..n).collect();
    labels.shuffle(&mut seeded_rng(seed, 0));
    let mut g = BoundedDegreeGraph::new(n, d)?;
    let count = n / cycle_len;
    let mut lens = vec![cycle_len; count];
    for i in 0..n % cycle_len {
        lens[i % count] += 1;
    }
    let mut rest = &labels[..];
    for len in lens {
        let (cycle, tail) = rest.split_at(len);
        rest = tail;
        for i in 0..len {
            g.add_edge(cycle[i], cycle[(i + 1) % len])?;
        }
    }
    Ok(g)
}

/// A random tree plus `k` extra edges, each between two vertices of spare
/// degree, so the circuit rank is exactly `k`.
pub fn gen_planted(n: usize, d: usize, k: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    let mut g = gen_tree(n, d, seed)?;
    if k == 0 {
        return Ok(g);
    }
    let mut rng = seeded_rng(seed, 1);
    let attempts = 64 * (k + n);
    let mut added = 0;
    for _ in 0..attempts {
        if added == k {
            break;
        }
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if chord_ok(&g, u, v) {
            g.add_edge(u, v)?;
            added += 1;
        }
    }
    // Random probing can miss when few vertices have spare degree.
    while added < k {
        let open: Vec<VertexId> = (0..n).filter(|&v| g.adjacent(v).len() < d).collect();
        let pair = open
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| open[i + 1..].iter().map(move |&v| (u, v)))
            .find(|&(u, v)| chord_ok(&g, u, v));
        match pair {
            Some((u, v)) => {
                g.add_edge(u, v)?;
                added += 1;
            }
            None => {
                return Err(Error::invalid(format!(
                    "cannot plant {k} cycles in a tree on {n} vertices with degree bound {d}"
                )))
            }
        }
    }
    Ok(g)
}

fn chord_ok(g: &BoundedDegreeGraph, u: VertexId, v: VertexId) -> bool {
    u != v && g.adjacent(u).len() < g.d() && g.adjacent(v).len() < g.d() && !g.has_edge(u, v)
}

/// A Hamiltonian cycle over a random vertex order, thickened with random
/// edges until most vertices reach the degree cap.
pub fn gen_well_connected(n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if n < 3 || d < 2 {
        return Err(Error::invalid("well-connected instances need n >= 3 and d >= 2"));
    }
    let mut rng = seeded_rng(seed, 0);
    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut g = BoundedDegreeGraph::new(n, d)?;
    for i in 0..n {
        g.add_edge(order[i], order[(i + 1) % n])?;
    }
    for _ in 0..4 * n * d {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if chord_ok(&g, u, v) {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

pub fn component_count(g: &BoundedDegreeGraph) -> usize {
    let mut ds = DisjointSets::new(g.n());
    for (u, v) in g.edges() {
        ds.union(u, v);
    }
    ds.set_count()
}

/// Minimum number of edge deletions that leave a forest: `|E| - n + c`.
pub fn distance_to_cycle_freeness(g: &BoundedDegreeGraph) -> usize {
    g.edge_count() + component_count(g) - g.n()
}

/// Whether more than `eps * n * d` edges must go. The boundary is not far.
pub fn is_eps_far(g: &BoundedDegreeGraph, eps: f64) -> bool {
    distance_to_cycle_freeness(g) as f64 > eps * (g.n() * g.d()) as f64
}
