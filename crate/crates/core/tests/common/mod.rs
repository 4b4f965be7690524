//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use cyclefree::generators::gen_tree;
use cyclefree::BoundedDegreeGraph;
use rand::Rng;

/// DFS cycle check over an explicit edge list.
pub fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        // (vertex, edge used to enter it)
        let mut stack = vec![(root, usize::MAX)];
        while let Some((x, via)) = stack.pop() {
            if seen[x] {
                return true;
            }
            seen[x] = true;
            for &(y, e) in &adj[x] {
                if e != via {
                    if seen[y] {
                        return true;
                    }
                    stack.push((y, e));
                }
            }
        }
    }
    false
}

fn removal_exists(n: usize, edges: &[(usize, usize)], k: usize, from: usize, kept: &mut Vec<bool>) -> bool {
    if k == 0 {
        let rest: Vec<_> = edges
            .iter()
            .zip(kept.iter())
            .filter(|(_, &keep)| keep)
            .map(|(&e, _)| e)
            .collect();
        return !has_cycle(n, &rest);
    }
    for i in from..edges.len() {
        kept[i] = false;
        if removal_exists(n, edges, k - 1, i + 1, kept) {
            kept[i] = true;
            return true;
        }
        kept[i] = true;
    }
    false
}

/// Fewest edge deletions leaving a forest, by trying removal sets of size
/// 0, 1, 2, ... in turn.
pub fn brute_force_distance(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut kept = vec![true; edges.len()];
    (0..=edges.len())
        .find(|&k| removal_exists(n, edges, k, 0, &mut kept))
        .expect("removing every edge leaves a forest")
}

/// Connectivity by BFS.
pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Every labeled simple graph on `n` vertices, as edge lists.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << slots.len();
    (0..total).map(move |mask| {
        slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect()
    })
}

/// Random connected graph: a random spanning tree plus `extra` random chords.
pub fn random_connected<R: Rng>(n: usize, extra: usize, rng: &mut R) -> BoundedDegreeGraph {
    let tree = gen_tree(n, n - 1, rng.random()).unwrap();
    let mut g = tree;
    let mut added = 0;
    while added < extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        if u != v && !g.has_edge(u, v) && g.add_edge(u, v).is_ok() {
            added += 1;
        }
        if g.edge_count() == n * (n - 1) / 2 {
            break;
        }
    }
    g
}
