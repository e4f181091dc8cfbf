//! Directed graphs and the exact connectivity oracles.
//!
//! Everything else in the crate is validated against the three oracles in
//! this module: [`Digraph::is_acyclic`], [`Digraph::is_strongly_connected`]
//! and [`Digraph::reaches_all`]. They are exact, run in O(V+E), and are pure
//! functions of the edge *set* (insertion order never matters).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index into a contiguous vertex range `0..vertex_count`.
pub type VertexId = usize;

/// A directed edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
}

impl Edge {
    pub const fn new(from: VertexId, to: VertexId) -> Self {
        Self { from, to }
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((from, to): (VertexId, VertexId)) -> Self {
        Self { from, to }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge:?} has an endpoint outside 0..{vertex_count}")]
    EdgeOutOfRange { edge: Edge, vertex_count: usize },
    #[error("vertex {vertex} is outside 0..{vertex_count}")]
    VertexOutOfRange { vertex: VertexId, vertex_count: usize },
}

/// An immutable directed graph. Duplicate edges collapse at construction;
/// self-loops are allowed (and count as cycles).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: BTreeSet<Edge>,
}

impl Digraph {
    /// Builds a graph from an edge sequence, collapsing duplicates.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for edge in edges {
            if edge.from >= vertex_count || edge.to >= vertex_count {
                return Err(GraphError::EdgeOutOfRange { edge, vertex_count });
            }
            set.insert(edge);
        }
        Ok(Self { vertex_count, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains_edge(&self, edge: Edge) -> bool {
        self.edges.contains(&edge)
    }

    fn successors(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    fn predecessors(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.to].push(e.from);
        }
        adj
    }

    /// True iff the graph has no directed cycle (Kahn elimination).
    pub fn is_acyclic(&self) -> bool {
        let n = self.vertex_count;
        let adj = self.successors();
        let mut indegree = vec![0usize; n];
        for e in &self.edges {
            indegree[e.to] += 1;
        }
        let mut ready: Vec<VertexId> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut eliminated = ready.len();
        while let Some(v) = ready.pop() {
            for &w in &adj[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                    eliminated += 1;
                }
            }
        }
        eliminated == n
    }

    /// True iff every ordered vertex pair is joined by a directed path:
    /// vertex 0 must reach everything and be reached by everything.
    /// Graphs with at most one vertex are vacuously strongly connected.
    pub fn is_strongly_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        full_sweep(0, &self.successors()) && full_sweep(0, &self.predecessors())
    }

    /// True iff a search from `s` visits every vertex.
    pub fn reaches_all(&self, s: VertexId) -> Result<bool, GraphError> {
        if s >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange { vertex: s, vertex_count: self.vertex_count });
        }
        Ok(full_sweep(s, &self.successors()))
    }
}

/// Depth-first sweep from `start`; true iff it visits every vertex.
fn full_sweep(start: VertexId, adj: &[Vec<VertexId>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                visited += 1;
                stack.push(w);
            }
        }
    }
    visited == adj.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn graph(vertex_count: usize, edges: &[(usize, usize)]) -> Digraph {
        Digraph::from_edges(vertex_count, edges.iter().map(|&e| Edge::from(e))).unwrap()
    }

    /// Independent cycle oracle: enumerate simple paths and look for one that
    /// closes back on its start vertex.
    fn has_cycle_brute(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            adj[u].push(v);
        }
        fn extend(adj: &[Vec<usize>], start: usize, v: usize, on_path: &mut Vec<bool>) -> bool {
            for &w in &adj[v] {
                if w == start {
                    return true;
                }
                if !on_path[w] {
                    on_path[w] = true;
                    if extend(adj, start, w, on_path) {
                        return true;
                    }
                    on_path[w] = false;
                }
            }
            false
        }
        (0..vertex_count).any(|start| {
            let mut on_path = vec![false; vertex_count];
            on_path[start] = true;
            extend(&adj, start, start, &mut on_path)
        })
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = graph(2, &[(0, 1), (0, 1)]);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn out_of_range_endpoint_is_rejected() {
        let err = Digraph::from_edges(3, [Edge::new(0, 3)]).unwrap_err();
        assert_eq!(err, GraphError::EdgeOutOfRange { edge: Edge::new(0, 3), vertex_count: 3 });
    }

    #[test]
    fn acyclicity_basics() {
        assert!(graph(5, &[]).is_acyclic());
        assert!(!graph(2, &[(0, 1), (1, 0)]).is_acyclic());
        assert!(!graph(1, &[(0, 0)]).is_acyclic());
        assert!(graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).is_acyclic());
    }

    #[test]
    fn strong_connectivity_basics() {
        assert!(graph(1, &[]).is_strongly_connected());
        assert!(graph(0, &[]).is_strongly_connected());
        assert!(graph(3, &[(0, 1), (1, 2), (2, 0)]).is_strongly_connected());
        assert!(!graph(3, &[(0, 1), (1, 2)]).is_strongly_connected());
        assert!(!graph(2, &[]).is_strongly_connected());
    }

    #[test]
    fn reaches_all_basics() {
        assert_eq!(graph(1, &[]).reaches_all(0), Ok(true));
        assert_eq!(graph(3, &[(0, 1)]).reaches_all(0), Ok(false));
        assert_eq!(graph(3, &[(0, 1), (1, 2)]).reaches_all(0), Ok(true));
        assert!(graph(3, &[]).reaches_all(3).is_err());
    }

    // Every subset of a fixed 10-edge pool on 6 vertices, checked against the
    // brute-force simple-cycle search.
    #[test]
    fn acyclicity_matches_brute_force_on_edge_pool() {
        let pool = [
            (0, 1),
            (1, 2),
            (2, 0),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 3),
            (1, 4),
            (4, 2),
            (5, 0),
        ];
        for mask in 0u32..1 << pool.len() {
            let edges: Vec<(usize, usize)> = pool
                .iter()
                .enumerate()
                .filter(|&(idx, _)| mask >> idx & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = graph(6, &edges);
            assert_eq!(
                g.is_acyclic(),
                !has_cycle_brute(6, &edges),
                "disagreement on subset mask {mask:#b}"
            );
        }
    }

    // The three characterizations of strong connectivity agree on random
    // graphs: the two-sweep check, reachability from every vertex, and the
    // forward/reverse pair of sweeps from vertex 0.
    #[test]
    fn strong_connectivity_characterizations_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x5cc_aa11);
        for round in 0..400 {
            let n = rng.random_range(1..=12);
            let edge_count = rng.random_range(0..=3 * n);
            let edges: Vec<(usize, usize)> = (0..edge_count)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
                .collect();
            let g = graph(n, &edges);
            let by_sweeps = g.is_strongly_connected();
            let by_all_sources = (0..n).all(|v| g.reaches_all(v).unwrap());
            let reversed = Digraph::from_edges(n, g.edges().map(|e| Edge::new(e.to, e.from))).unwrap();
            let by_reversal = g.reaches_all(0).unwrap() && reversed.reaches_all(0).unwrap();
            assert_eq!(by_sweeps, by_all_sources, "round {round}");
            assert_eq!(by_sweeps, by_reversal, "round {round}");
        }
    }

    // Oracles only see the edge set, so any permutation of the input
    // sequence gives identical answers.
    #[test]
    fn oracles_are_order_invariant() {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.random_range(1..=8);
            let edge_count = rng.random_range(0..=2 * n);
            let mut edges: Vec<(usize, usize)> = (0..edge_count)
                .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
                .collect();
            let g = graph(n, &edges);
            let baseline = (g.is_acyclic(), g.is_strongly_connected(), g.reaches_all(0).unwrap());
            for _ in 0..4 {
                edges.shuffle(&mut rng);
                let h = graph(n, &edges);
                assert_eq!(g, h);
                assert_eq!(
                    baseline,
                    (h.is_acyclic(), h.is_strongly_connected(), h.reaches_all(0).unwrap())
                );
            }
        }
    }
}
