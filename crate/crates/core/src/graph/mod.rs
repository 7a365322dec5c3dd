//! Simple undirected graphs on dense vertex indices `0..n`.

mod distance;
mod io;
mod star;

use std::sync::OnceLock;

use thiserror::Error;

pub use distance::{DistanceMatrix, UNREACHABLE};
pub use io::{encode_edge_list, encode_graph6, parse_edge_list, parse_graph6, ParseError, ParsedEdgeList};
pub use star::{find_induced_star, is_induced_star, InducedStar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
}

/// Immutable simple graph. Adjacency is kept both as sorted neighbor lists and
/// as a bit matrix so that `has_edge` is O(1).
#[derive(Debug)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    bits: Vec<u64>,
    words: usize,
    edge_count: usize,
    distances: OnceLock<DistanceMatrix>,
}

impl Clone for Graph {
    fn clone(&self) -> Self {
        Graph {
            adj: self.adj.clone(),
            bits: self.bits.clone(),
            words: self.words,
            edge_count: self.edge_count,
            distances: OnceLock::new(),
        }
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges (in either
    /// orientation) are collapsed; the number collapsed is returned alongside.
    pub fn with_duplicates<I>(n: usize, edges: I) -> Result<(Graph, usize), GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        let mut adj = vec![Vec::new(); n];
        let mut duplicates = 0;
        let mut edge_count = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if bits[u * words + v / 64] >> (v % 64) & 1 == 1 {
                duplicates += 1;
                continue;
            }
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let graph = Graph {
            adj,
            bits,
            words,
            edge_count,
            distances: OnceLock::new(),
        };
        Ok((graph, duplicates))
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::with_duplicates(n, edges).map(|(g, _)| g)
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_edges(n, std::iter::empty()).expect("edgeless graph is always valid")
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph is always valid")
    }

    pub fn path(n: usize) -> Graph {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is always valid")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is always valid")
    }

    pub fn star(leaves: usize) -> Graph {
        Self::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is always valid")
    }

    /// Number of vertices, `|G|`.
    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && v < self.order() && self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True iff every vertex is reachable from vertex 0. The empty graph is
    /// reported as disconnected since it has no spanning tree.
    pub fn is_connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// All-pairs hop distances, computed on first use and cached.
    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| DistanceMatrix::compute(self))
    }

    #[inline]
    pub fn distance(&self, u: usize, v: usize) -> Option<u32> {
        self.distances().get(u, v)
    }
}

/// Free-function form of [`Graph::is_connected`].
pub fn is_connected(g: &Graph) -> bool {
    g.is_connected()
}

/// Free-function form of [`Graph::distances`]; always recomputes.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    DistanceMatrix::compute(g)
}
