use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::{BoundedDegreeGraph, DirectedEdge, VertexId};
use crate::unionfind::DisjointSets;

use super::classify::{EdgeClassification, Judgement};

/// Result of a structural check over the certain labels. A violation among
/// certain labels stands on its own; a clean pass only counts when no
/// uncertain label could have changed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CheckOutcome<V> {
    Ok,
    Violation { witness: V },
    Inconclusive { uncertain: usize },
}

impl<V> CheckOutcome<V> {
    pub fn is_ok(&self) -> bool {
        matches!(self, CheckOutcome::Ok)
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, CheckOutcome::Violation { .. })
    }

    fn settle(uncertain: usize) -> Self {
        if uncertain == 0 {
            CheckOutcome::Ok
        } else {
            CheckOutcome::Inconclusive { uncertain }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ForestViolation {
    Indegree { vertex: VertexId, tails: Vec<VertexId> },
    Cycle { vertices: Vec<VertexId> },
}

fn uncertain_dominant(cls: &EdgeClassification) -> usize {
    cls.directed
        .iter()
        .filter(|c| c.dominant == Judgement::Uncertain)
        .count()
}

/// Certain-dominant edges: no vertex with two in-edges, no undirected cycle.
pub fn check_dominant_forest(cls: &EdgeClassification) -> CheckOutcome<ForestViolation> {
    let dominant: Vec<DirectedEdge> = cls.certain_dominant().collect();
    let mut tails: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in &dominant {
        tails.entry(e.head).or_default().push(e.tail);
    }
    let mut heads: Vec<_> = tails.into_iter().filter(|(_, t)| t.len() >= 2).collect();
    heads.sort();
    if let Some((vertex, mut tails)) = heads.into_iter().next() {
        tails.sort_unstable();
        return CheckOutcome::Violation {
            witness: ForestViolation::Indegree { vertex, tails },
        };
    }

    let mut index: HashMap<VertexId, usize> = HashMap::new();
    for e in &dominant {
        for v in [e.tail, e.head] {
            let next = index.len();
            index.entry(v).or_insert(next);
        }
    }
    let mut sets = DisjointSets::new(index.len());
    for (i, e) in dominant.iter().enumerate() {
        if !sets.union(index[&e.tail], index[&e.head]) {
            return CheckOutcome::Violation {
                witness: ForestViolation::Cycle {
                    vertices: cycle_through(&dominant[..i], *e),
                },
            };
        }
    }
    CheckOutcome::settle(uncertain_dominant(cls))
}

/// Vertices of the cycle formed by `closing` and a path in `forest`.
fn cycle_through(forest: &[DirectedEdge], closing: DirectedEdge) -> Vec<VertexId> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in forest {
        adj.entry(e.tail).or_default().push(e.head);
        adj.entry(e.head).or_default().push(e.tail);
    }
    let mut parent: HashMap<VertexId, VertexId> = HashMap::from([(closing.tail, closing.tail)]);
    let mut stack = vec![closing.tail];
    while let Some(x) = stack.pop() {
        for &y in adj.get(&x).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(y) {
                slot.insert(x);
                stack.push(y);
            }
        }
    }
    let mut cycle = vec![closing.head];
    let mut x = closing.head;
    while x != closing.tail {
        x = parent[&x];
        cycle.push(x);
    }
    cycle
}

/// No edge is certain-dominant in both directions.
pub fn check_no_bidirectional_dominance(cls: &EdgeClassification) -> CheckOutcome<(VertexId, VertexId)> {
    let mut uncertain = 0;
    for e in &cls.undirected {
        let a = cls.dominant(e.u, e.v).unwrap_or(Judgement::No);
        let b = cls.dominant(e.v, e.u).unwrap_or(Judgement::No);
        if a.is_yes() && b.is_yes() {
            return CheckOutcome::Violation { witness: (e.u, e.v) };
        }
        if a.is_possible() && b.is_possible() {
            uncertain += 1;
        }
    }
    CheckOutcome::settle(uncertain)
}

/// Every certain-dominant `<u,v>` lies on the recorded dominant path to `v`.
pub fn check_dominant_path_through_edge(cls: &EdgeClassification) -> CheckOutcome<DirectedEdge> {
    let through = |e: DirectedEdge| {
        cls.vertices[e.head]
            .dominant_path
            .as_ref()
            .is_some_and(|p| p.windows(2).any(|w| w[0] == e.tail && w[1] == e.head))
    };
    let mut uncertain = 0;
    for c in &cls.directed {
        match c.dominant {
            Judgement::Yes if !through(c.edge) => return CheckOutcome::Violation { witness: c.edge },
            Judgement::Uncertain if !through(c.edge) => uncertain += 1,
            _ => {}
        }
    }
    CheckOutcome::settle(uncertain)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecessiveReport {
    pub component_vertices: usize,
    pub component_edges: usize,
    pub certain_recessive: usize,
    pub uncertain: usize,
    /// Circuit rank of the subgraph induced on the component: every forest
    /// of dominant edges leaves at least this many edges recessive.
    pub lower_bound: usize,
}

pub fn count_recessive_vs_bound(g: &BoundedDegreeGraph, cls: &EdgeClassification) -> RecessiveReport {
    let index: HashMap<VertexId, usize> = cls.component.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut sets = DisjointSets::new(index.len());
    let mut edges = 0;
    for (u, v) in g.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
            sets.union(a, b);
            edges += 1;
        }
    }
    let components = if index.is_empty() { 0 } else { sets.set_count() };
    RecessiveReport {
        component_vertices: index.len(),
        component_edges: edges,
        certain_recessive: cls.undirected.iter().filter(|e| e.recessive.is_yes()).count(),
        uncertain: cls
            .undirected
            .iter()
            .filter(|e| e.recessive == Judgement::Uncertain)
            .count(),
        lower_bound: edges + components - index.len(),
    }
}
