//! Bounded-degree simple graphs and the metered neighbor oracle.
//!
//! Vertices are dense ids `0..n`. Neighbor lists are kept sorted, so the
//! oracle answers deterministically and all randomness lives in the walk
//! sampler. Sublinear algorithms must go through [`BoundedDegreeGraph::neighbors`]
//! and [`BoundedDegreeGraph::degree`], which charge a [`QueryMeter`].
//! [`BoundedDegreeGraph::adjacent`] is the unmetered path for generators and
//! analysis oracles.

mod io;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{parse_edge_list, read_edge_list, write_edge_list};

pub type VertexId = usize;

/// Oracle call counters. Only ever grows, unless [`QueryMeter::reset`] is called.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryMeter {
    neighbor_queries: u64,
    degree_queries: u64,
}

impl QueryMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn neighbor_queries(&self) -> u64 {
        self.neighbor_queries
    }

    pub fn degree_queries(&self) -> u64 {
        self.degree_queries
    }

    pub fn total(&self) -> u64 {
        self.neighbor_queries + self.degree_queries
    }

    /// Adds another meter's counts into this one.
    pub fn merge(&mut self, other: &QueryMeter) {
        self.neighbor_queries += other.neighbor_queries;
        self.degree_queries += other.degree_queries;
    }

    /// Calls made since `earlier`, a snapshot of this same meter.
    pub fn since(&self, earlier: &QueryMeter) -> QueryMeter {
        QueryMeter {
            neighbor_queries: self.neighbor_queries - earlier.neighbor_queries,
            degree_queries: self.degree_queries - earlier.degree_queries,
        }
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// `⟨tail, head⟩`: one orientation of an undirected edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl DirectedEdge {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Self { tail, head }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.head, self.tail)
    }

    /// The undirected edge as an ordered pair `(min, max)`.
    pub fn undirected(self) -> (VertexId, VertexId) {
        if self.tail < self.head {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.tail, self.head)
    }
}

/// First broken invariant found by [`BoundedDegreeGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    SelfLoop { vertex: VertexId },
    NeighborOutOfRange { vertex: VertexId, neighbor: VertexId },
    DuplicateEdge { u: VertexId, v: VertexId },
    DegreeCap { vertex: VertexId, degree: usize, cap: usize },
    Asymmetric { u: VertexId, v: VertexId },
    VertexCount { declared: usize, lists: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { vertex } => write!(f, "self-loop at {vertex}"),
            Violation::NeighborOutOfRange { vertex, neighbor } => {
                write!(f, "vertex {vertex} lists out-of-range neighbor {neighbor}")
            }
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u},{v})"),
            Violation::DegreeCap { vertex, degree, cap } => {
                write!(f, "vertex {vertex} has degree {degree} above cap {cap}")
            }
            Violation::Asymmetric { u, v } => {
                write!(f, "{v} is listed at {u} but {u} is not listed at {v}")
            }
            Violation::VertexCount { declared, lists } => {
                write!(f, "{declared} vertices declared but {lists} adjacency lists")
            }
        }
    }
}

/// Simple undirected graph whose degrees never exceed `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedDegreeGraph {
    n: usize,
    d: usize,
    adjacency: Vec<Vec<VertexId>>,
}

impl BoundedDegreeGraph {
    /// Edgeless graph on `n ≥ 1` vertices with degree cap `d ≥ 1`.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph needs at least one vertex"));
        }
        if d == 0 {
            return Err(Error::invalid("degree bound must be positive"));
        }
        Ok(Self {
            n,
            d,
            adjacency: vec![Vec::new(); n],
        })
    }

    pub fn from_edges<I>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new(n, d)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Wraps raw adjacency lists without checking anything. Used to feed
    /// malformed inputs to [`validate`](Self::validate).
    pub fn from_adjacency_unchecked(n: usize, d: usize, adjacency: Vec<Vec<VertexId>>) -> Self {
        Self { n, d, adjacency }
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidGraph(Violation::SelfLoop { vertex: u }));
        }
        let pos_u = match self.adjacency[u].binary_search(&v) {
            Ok(_) => return Err(Error::InvalidGraph(Violation::DuplicateEdge { u, v })),
            Err(p) => p,
        };
        for w in [u, v] {
            if self.adjacency[w].len() >= self.d {
                return Err(Error::InvalidGraph(Violation::DegreeCap {
                    vertex: w,
                    degree: self.adjacency[w].len() + 1,
                    cap: self.d,
                }));
            }
        }
        self.adjacency[u].insert(pos_u, v);
        let pos_v = self.adjacency[v].binary_search(&u).unwrap_err();
        self.adjacency[v].insert(pos_v, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Unmetered neighbor list. Not for use inside the tester.
    pub fn adjacent(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Metered neighbor query.
    pub fn neighbors(&self, v: VertexId, meter: &mut QueryMeter) -> Result<&[VertexId]> {
        self.check_vertex(v)?;
        meter.neighbor_queries += 1;
        Ok(&self.adjacency[v])
    }

    /// Metered degree query.
    pub fn degree(&self, v: VertexId, meter: &mut QueryMeter) -> Result<usize> {
        self.check_vertex(v)?;
        meter.degree_queries += 1;
        Ok(self.adjacency[v].len())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Full scan of the simplicity, degree-cap and symmetry invariants.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.adjacency.len() != self.n {
            return Err(Violation::VertexCount {
                declared: self.n,
                lists: self.adjacency.len(),
            });
        }
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            for &w in nbrs {
                if w == v {
                    return Err(Violation::SelfLoop { vertex: v });
                }
                if w >= self.n {
                    return Err(Violation::NeighborOutOfRange { vertex: v, neighbor: w });
                }
            }
            let mut sorted = nbrs.clone();
            sorted.sort_unstable();
            if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
                return Err(Violation::DuplicateEdge { u: v, v: pair[0] });
            }
            if nbrs.len() > self.d {
                return Err(Violation::DegreeCap {
                    vertex: v,
                    degree: nbrs.len(),
                    cap: self.d,
                });
            }
        }
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            for &w in nbrs {
                if !self.adjacency[w].contains(&v) {
                    return Err(Violation::Asymmetric { u: v, v: w });
                }
            }
        }
        Ok(())
    }
}
