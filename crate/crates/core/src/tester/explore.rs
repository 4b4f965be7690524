//! The explored subgraph `G'` and cycle extraction from it.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{BoundedDegreeGraph, QueryMeter, VertexId};
use crate::unionfind::DisjointSets;

/// Simple cycle `v_0, ..., v_{k-1}`; the closing edge `(v_{k-1}, v_0)` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub cycle: Vec<VertexId>,
}

impl CycleCertificate {
    pub fn new(cycle: Vec<VertexId>) -> Self {
        Self { cycle }
    }

    /// Number of vertices (equivalently, edges) on the cycle.
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Cycle edges including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let k = self.cycle.len();
        (0..k).map(move |i| (self.cycle[i], self.cycle[(i + 1) % k]))
    }
}

/// Checks through the metered oracle that `cert` is a simple cycle of length
/// at least 3 in `g`.
pub fn verify_certificate(g: &BoundedDegreeGraph, cert: &CycleCertificate, meter: &mut QueryMeter) -> bool {
    let k = cert.cycle.len();
    if k < 3 {
        return false;
    }
    let mut seen = cert.cycle.clone();
    seen.sort_unstable();
    if seen.windows(2).any(|p| p[0] == p[1]) {
        return false;
    }
    cert.edges().all(|(u, v)| match g.neighbors(u, meter) {
        Ok(nbrs) => nbrs.binary_search(&v).is_ok(),
        Err(_) => false,
    })
}

/// Subgraph induced by a set of visited vertices, grown one vertex at a time.
/// Edges are stored in the order they appeared.
#[derive(Debug, Clone, Default)]
pub struct ExploredSubgraph {
    index: HashMap<VertexId, usize>,
    vertices: Vec<VertexId>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl ExploredSubgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges as graph vertex ids, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a], self.vertices[b]))
    }

    /// Adds `v` given its full neighbor list, keeping the edges to vertices
    /// already present. Returns `v`'s local id, or `None` if it was already
    /// present.
    pub fn insert(&mut self, v: VertexId, neighbors: &[VertexId]) -> Option<usize> {
        if self.contains(v) {
            return None;
        }
        let id = self.vertices.len();
        self.index.insert(v, id);
        self.vertices.push(v);
        self.adjacency.push(Vec::new());
        for w in neighbors {
            if let Some(&j) = self.index.get(w) {
                self.adjacency[id].push(j);
                self.adjacency[j].push(id);
                self.edges.push((j, id));
            }
        }
        Some(id)
    }

    /// Shortest cycle through local edge `(a, b)`: a BFS path from `a` to
    /// `b` avoiding that edge, closed by it.
    fn shortest_cycle_through(&self, a: usize, b: usize) -> Option<CycleCertificate> {
        let mut parent = vec![usize::MAX; self.vertices.len()];
        let mut queue = VecDeque::new();
        parent[a] = a;
        queue.push_back(a);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &self.adjacency[x] {
                if (x == a && y == b) || (x == b && y == a) || parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                queue.push_back(y);
            }
        }
        if parent[b] == usize::MAX {
            return None;
        }
        let mut cycle = vec![self.vertices[b]];
        let mut x = b;
        while x != a {
            x = parent[x];
            cycle.push(self.vertices[x]);
        }
        cycle.reverse();
        Some(CycleCertificate::new(cycle))
    }
}

/// Incremental connectivity over an [`ExploredSubgraph`]: remembers the first
/// edge whose endpoints were already connected.
#[derive(Debug, Default)]
pub(crate) struct CycleWatch {
    sets: DisjointSets,
    scanned: usize,
    closing: Option<(usize, usize)>,
}

impl CycleWatch {
    /// Scans edges added since the last call. Returns true once a closing
    /// edge has been seen.
    pub(crate) fn update(&mut self, sub: &ExploredSubgraph) -> bool {
        while self.sets.len() < sub.vertices.len() {
            self.sets.push();
        }
        while self.closing.is_none() && self.scanned < sub.edges.len() {
            let (a, b) = sub.edges[self.scanned];
            self.scanned += 1;
            if !self.sets.union(a, b) {
                self.closing = Some((a, b));
            }
        }
        self.closing.is_some()
    }

    pub(crate) fn certificate(&self, sub: &ExploredSubgraph) -> Option<CycleCertificate> {
        let (a, b) = self.closing?;
        sub.shortest_cycle_through(a, b)
    }
}

/// Returns a cycle if `sub` has one: the shortest cycle through the first
/// edge (in insertion order) that joins two already-connected vertices.
pub fn extract_cycle(sub: &ExploredSubgraph) -> Option<CycleCertificate> {
    let mut watch = CycleWatch::default();
    watch.update(sub);
    watch.certificate(sub)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(g: &BoundedDegreeGraph, order: &[VertexId]) -> ExploredSubgraph {
        let mut sub = ExploredSubgraph::new();
        for &v in order {
            sub.insert(v, g.adjacent(v));
        }
        sub
    }

    #[test]
    fn forest_has_no_cycle() {
        let g = BoundedDegreeGraph::from_edges(5, 3, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let sub = build(&g, &[0, 1, 2, 3, 4]);
        assert_eq!(sub.edge_count(), 4);
        assert!(extract_cycle(&sub).is_none());
    }

    #[test]
    fn triangle_yields_three_cycle() {
        let g = BoundedDegreeGraph::from_edges(3, 2, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let cert = extract_cycle(&build(&g, &[0, 1, 2])).unwrap();
        assert_eq!(cert.len(), 3);
        assert!(verify_certificate(&g, &cert, &mut QueryMeter::new()));
    }

    #[test]
    fn square_with_chord_yields_triangle() {
        let g = BoundedDegreeGraph::from_edges(4, 3, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        for order in [[0, 1, 2, 3], [1, 3, 0, 2], [3, 2, 1, 0]] {
            let cert = extract_cycle(&build(&g, &order)).unwrap();
            assert_eq!(cert.len(), 3, "order {order:?}");
            assert!(verify_certificate(&g, &cert, &mut QueryMeter::new()));
        }
    }

    #[test]
    fn induced_edges_only_between_present_vertices() {
        let g = BoundedDegreeGraph::from_edges(4, 2, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sub = build(&g, &[0, 1, 2]);
        assert_eq!(sub.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(extract_cycle(&sub).is_none());
        assert!(!sub.contains(3));
    }

    #[test]
    fn verify_rejects_malformed_certificates() {
        let g = BoundedDegreeGraph::from_edges(4, 3, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let mut meter = QueryMeter::new();
        assert!(verify_certificate(&g, &CycleCertificate::new(vec![0, 1, 2]), &mut meter));
        assert_eq!(meter.neighbor_queries(), 3);
        assert!(!verify_certificate(&g, &CycleCertificate::new(vec![0, 1, 2, 1]), &mut meter));
        assert!(!verify_certificate(&g, &CycleCertificate::new(vec![0, 1, 2, 3]), &mut meter));
        assert!(!verify_certificate(&g, &CycleCertificate::new(vec![0, 1]), &mut meter));
        assert!(!verify_certificate(&g, &CycleCertificate::new(vec![0, 1, 9]), &mut meter));
    }
}
