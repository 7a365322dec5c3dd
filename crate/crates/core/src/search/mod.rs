//! Solvers for "does `G` have a spanning tree whose stem has at most `l`
//! leaves", plus independent checkers for their outputs.

mod certificate;
mod exact;
mod local;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::tree::TreeState;

pub use certificate::{
    extract_certificate, validate_certificate, Certificate, CertificateCheck, CertificateKind, ExtractionAudit,
    ExtractionError,
};
pub use exact::{exact_solve, DEFAULT_TREE_LIMIT};
pub use local::{initial_tree, initial_tree_from, local_search_solve, Move, DEFAULT_MOVE_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("input graph is not connected")]
    Disconnected,
    #[error("t must be at least 3, got {0}")]
    InvalidT(usize),
    #[error("l must be at least 1")]
    InvalidL,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    CertifiedFail,
    Exhausted,
    Limit,
}

impl Status {
    pub fn is_found(self) -> bool {
        self == Status::Found
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Exact,
    Local,
}

/// `Φ(T) = (|V(T)|, |Leaf(T)|)`, compared lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Potential {
    pub order: usize,
    pub leaves: usize,
}

impl Potential {
    pub fn of(tree: &TreeState<'_>) -> Self {
        Potential {
            order: tree.order(),
            leaves: tree.decompose().leaves.len(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Complete spanning trees examined by the exact solver.
    pub trees_enumerated: u64,
    /// Branches cut by the stem-leaf lower bound.
    pub pruned: u64,
    pub moves_applied: u64,
    /// Climbs started from a root other than vertex 0.
    pub restarts: u64,
    /// Applied move counts, indexed M1..M6.
    pub move_counts: [u64; 6],
    /// Potential after the initial tree and after every applied move of the
    /// climb that produced the outcome.
    pub trace: Vec<Potential>,
    /// `|N(v1) ∩ (Leaf(T) - Y)|` recorded during certificate extraction.
    pub q: Option<usize>,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome<'g> {
    pub solver: Solver,
    pub status: Status,
    pub tree: Option<TreeState<'g>>,
    pub certificate: Option<Certificate<'g>>,
    pub stats: SearchStats,
    /// Set when the local search got stuck but no certificate could be built.
    pub diagnostic: Option<String>,
}

impl SearchOutcome<'_> {
    pub fn is_found(&self) -> bool {
        self.status.is_found()
    }
}

/// Outcome of an independent re-check. `failed` names the first check that
/// did not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub failed: Option<&'static str>,
}

impl Validation {
    pub(crate) fn ok() -> Self {
        Validation {
            valid: true,
            failed: None,
        }
    }

    pub(crate) fn fail(check: &'static str) -> Self {
        Validation {
            valid: false,
            failed: Some(check),
        }
    }
}

/// Re-checks a claimed solution from its raw edge set: host edges only,
/// acyclic, connected, spanning, and at most `l` stem leaves.
pub fn verify_tree(g: &Graph, l: usize, tree: &TreeState<'_>) -> Validation {
    let n = g.order();
    let edges: Vec<(usize, usize)> = tree.edges().iter().map(|e| e.ends()).collect();
    if edges.iter().any(|&(u, v)| !g.has_edge(u, v)) {
        return Validation::fail("not-host-edge");
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(u, v) in &edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return Validation::fail("cyclic");
        }
        parent[a] = b;
    }

    let mut covered = vec![false; n];
    for &(u, v) in &edges {
        covered[u] = true;
        covered[v] = true;
    }
    for &v in tree.vertices() {
        covered[v] = true;
    }
    let roots: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| covered[v]).map(|v| find(&mut parent, v)).collect();
    if roots.len() > 1 {
        return Validation::fail("disconnected");
    }
    if covered.iter().any(|c| !c) {
        return Validation::fail("not-spanning");
    }

    let mut deg = vec![0usize; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let stem: Vec<usize> = (0..n).filter(|&v| deg[v] != 1).collect();
    let stem_leaves = match stem.len() {
        0 | 1 => stem.len(),
        _ => stem
            .iter()
            .filter(|&&v| {
                edges
                    .iter()
                    .filter(|&&(a, b)| (a == v && deg[b] > 1) || (b == v && deg[a] > 1))
                    .count()
                    == 1
            })
            .count(),
    };
    if stem_leaves > l {
        return Validation::fail("stem-leaves");
    }
    Validation::ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Edge;

    #[test]
    fn verify_accepts_star_in_k4() {
        let g = Graph::complete(4);
        let out = exact_solve(&g, 2, DEFAULT_TREE_LIMIT).unwrap();
        assert_eq!(out.status, Status::Found);
        assert_eq!(verify_tree(&g, 2, out.tree.as_ref().unwrap()), Validation::ok());
    }

    #[test]
    fn verify_rejects_non_spanning() {
        let host = Graph::path(6);
        let p5 = TreeState::from_edges(&host, (0..4).map(|i| Edge::new(i, i + 1))).unwrap();
        assert_eq!(verify_tree(&host, 2, &p5).failed, Some("not-spanning"));
    }

    #[test]
    fn verify_rejects_spider_stem() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let t = TreeState::bfs(&g, 0).unwrap();
        assert_eq!(verify_tree(&g, 2, &t).failed, Some("stem-leaves"));
        assert!(verify_tree(&g, 3, &t).valid);
    }

    #[test]
    fn verify_rejects_foreign_edges() {
        let big = Graph::complete(4);
        let t = TreeState::bfs(&big, 0).unwrap();
        assert_eq!(verify_tree(&Graph::path(4), 3, &t).failed, Some("not-host-edge"));
    }

    #[test]
    fn potential_order_is_lexicographic() {
        let a = Potential { order: 3, leaves: 9 };
        let b = Potential { order: 4, leaves: 0 };
        assert!(a < b);
        assert!(Potential { order: 4, leaves: 1 } > b);
    }
}
