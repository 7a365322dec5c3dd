//! Trees embedded in a host graph, and their leaf/stem decomposition.
//!
//! Stem-leaf conventions for small stems:
//! - empty stem (a single-edge tree): 0 stem leaves
//! - one-vertex stem: 1 stem leaf, empty core
//! - two-vertex stem: both vertices are stem leaves
//! - otherwise: vertices of degree 1 inside the stem
//!
//! A single-vertex tree has no leaves and a one-vertex stem.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Undirected edge stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b, "edges join distinct vertices");
        Edge {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn ends(self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn touches(self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(self, v: usize) -> usize {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }
}

impl From<[usize; 2]> for Edge {
    fn from([a, b]: [usize; 2]) -> Self {
        Edge::new(a, b)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.lo, e.hi]
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::new(a, b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Defect {
    Cyclic,
    Disconnected,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("edge {0} is not an edge of the host graph")]
    NotHostEdge(Edge),
    #[error("vertex {0} is not in the host graph")]
    NoSuchVertex(usize),
    #[error("edge {0} to remove is not in the tree")]
    NotInTree(Edge),
    #[error("edge {0} to add is already in the tree")]
    AlreadyInTree(Edge),
    #[error("an edge-less tree needs exactly one vertex")]
    EmptyTree,
    #[error("exchange rejected ({defect:?}): added {added:?}, removed {removed:?}")]
    ExchangeRejected {
        defect: Defect,
        added: Vec<Edge>,
        removed: Vec<Edge>,
    },
    #[error("edge set is not a tree ({0:?})")]
    NotATree(Defect),
}

/// A tree inside a host graph, stored as its edge set plus its vertex set.
#[derive(Clone)]
pub struct TreeState<'g> {
    host: &'g Graph,
    edges: BTreeSet<Edge>,
    vertices: BTreeSet<usize>,
}

impl PartialEq for TreeState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.host, other.host) && self.edges == other.edges && self.vertices == other.vertices
    }
}

impl Eq for TreeState<'_> {}

impl fmt::Debug for TreeState<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreeState")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Serialize for TreeState<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TreeState", 3)?;
        st.serialize_field("n", &self.vertices.len())?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}

impl<'g> TreeState<'g> {
    /// The one-vertex tree `{root}`.
    pub fn single(host: &'g Graph, root: usize) -> Result<Self, TreeError> {
        if root >= host.order() {
            return Err(TreeError::NoSuchVertex(root));
        }
        Ok(TreeState {
            host,
            edges: BTreeSet::new(),
            vertices: BTreeSet::from([root]),
        })
    }

    /// Builds a tree from a non-empty edge set, checking it is a tree of the host.
    pub fn from_edges<I, E>(host: &'g Graph, edges: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let edges: BTreeSet<Edge> = edges.into_iter().map(Into::into).collect();
        if edges.is_empty() {
            return Err(TreeError::EmptyTree);
        }
        for &e in &edges {
            let (u, v) = e.ends();
            if !host.has_edge(u, v) {
                return Err(TreeError::NotHostEdge(e));
            }
        }
        let vertices = edges.iter().flat_map(|e| [e.lo, e.hi]).collect();
        let tree = TreeState { host, edges, vertices };
        match tree.defect() {
            None => Ok(tree),
            Some(d) => Err(TreeError::NotATree(d)),
        }
    }

    /// Breadth-first spanning tree of the component containing `root`.
    pub fn bfs(host: &'g Graph, root: usize) -> Result<Self, TreeError> {
        let mut tree = Self::single(host, root)?;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in host.neighbors(u) {
                if tree.vertices.insert(v) {
                    tree.edges.insert(Edge::new(u, v));
                    queue.push_back(v);
                }
            }
        }
        Ok(tree)
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    /// `|V(T)|`.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    /// True iff the tree covers every host vertex.
    pub fn is_spanning(&self) -> bool {
        self.vertices.len() == self.host.order()
    }

    /// Degree of every host vertex inside the tree (0 outside it).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.host.order()];
        for e in &self.edges {
            deg[e.lo] += 1;
            deg[e.hi] += 1;
        }
        deg
    }

    /// Tree adjacency lists indexed by host vertex.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.host.order()];
        for e in &self.edges {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
        }
        adj
    }

    pub fn decompose(&self) -> StemDecomposition {
        StemDecomposition::of(self)
    }

    pub fn stem_leaf_count(&self) -> usize {
        self.decompose().stem_leaf_count
    }

    /// True iff the stem has at most `l` leaves.
    pub fn has_l_ended_stem(&self, l: usize) -> bool {
        self.stem_leaf_count() <= l
    }

    /// Removes `remove`, adds `add`, and checks that the result is still a
    /// tree. The new vertex set is `V(T)` together with the endpoints of the
    /// added edges; an exchange never drops a vertex.
    pub fn apply_exchange(&self, add: &[Edge], remove: &[Edge]) -> Result<TreeState<'g>, TreeError> {
        let mut edges = self.edges.clone();
        for &e in remove {
            if !edges.remove(&e) {
                return Err(TreeError::NotInTree(e));
            }
        }
        let mut vertices = self.vertices.clone();
        for &e in add {
            let (u, v) = e.ends();
            if !self.host.has_edge(u, v) {
                return Err(TreeError::NotHostEdge(e));
            }
            if self.edges.contains(&e) || !edges.insert(e) {
                return Err(TreeError::AlreadyInTree(e));
            }
            vertices.insert(u);
            vertices.insert(v);
        }
        let next = TreeState {
            host: self.host,
            edges,
            vertices,
        };
        match next.defect() {
            None => Ok(next),
            Some(defect) => Err(TreeError::ExchangeRejected {
                defect,
                added: add.to_vec(),
                removed: remove.to_vec(),
            }),
        }
    }

    /// `|E| = |V| - 1` plus connectivity; reports which property fails.
    fn defect(&self) -> Option<Defect> {
        if self.edges.len() >= self.vertices.len() {
            return Some(Defect::Cyclic);
        }
        if self.edges.len() + 1 < self.vertices.len() {
            return Some(Defect::Disconnected);
        }
        let adj = self.adjacency();
        let start = *self.vertices.first()?;
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        // With |E| = |V| - 1, connected is equivalent to acyclic.
        (seen.len() != self.vertices.len()).then_some(Defect::Disconnected)
    }

    /// Edge list in the same text format used for graphs: `n m` then `u v`
    /// lines, where `n` is the host order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.host.order(), self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.lo, e.hi));
        }
        out
    }
}

/// `Leaf(T)`, `Stem(T)`, the stem leaves `x_i`, and the core `Stem(Stem(T))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StemDecomposition {
    pub leaves: Vec<usize>,
    pub stem: Vec<usize>,
    pub stem_leaves: Vec<usize>,
    pub core: Vec<usize>,
    pub stem_leaf_count: usize,
}

impl StemDecomposition {
    fn of(tree: &TreeState<'_>) -> Self {
        if tree.order() == 1 {
            let v: Vec<usize> = tree.vertices.iter().copied().collect();
            return StemDecomposition {
                leaves: Vec::new(),
                stem: v.clone(),
                stem_leaves: v,
                core: Vec::new(),
                stem_leaf_count: 1,
            };
        }
        let deg = tree.degrees();
        let (leaves, stem): (Vec<usize>, Vec<usize>) = tree.vertices.iter().partition(|&&v| deg[v] == 1);

        let mut stem_deg: BTreeMap<usize, usize> = stem.iter().map(|&v| (v, 0)).collect();
        for e in &tree.edges {
            if deg[e.lo] > 1 && deg[e.hi] > 1 {
                *stem_deg.get_mut(&e.lo).expect("stem vertex") += 1;
                *stem_deg.get_mut(&e.hi).expect("stem vertex") += 1;
            }
        }
        let stem_leaves: Vec<usize> = match stem.len() {
            0 => Vec::new(),
            1 => stem.clone(),
            _ => stem.iter().copied().filter(|v| stem_deg[v] == 1).collect(),
        };
        let core = stem.iter().copied().filter(|v| !stem_leaves.contains(v)).collect();
        StemDecomposition {
            stem_leaf_count: stem_leaves.len(),
            leaves,
            stem,
            stem_leaves,
            core,
        }
    }
}

/// Free-function form of [`TreeState::decompose`].
pub fn decompose(tree: &TreeState<'_>) -> StemDecomposition {
    tree.decompose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b)
    }

    fn spider() -> Graph {
        // center 0; legs 0-1-2, 0-3-4, 0-5-6
        Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap()
    }

    #[test]
    fn path_decomposition() {
        let g = Graph::path(5);
        let t = TreeState::bfs(&g, 0).unwrap();
        let d = t.decompose();
        assert_eq!(d.leaves, vec![0, 4]);
        assert_eq!(d.stem, vec![1, 2, 3]);
        assert_eq!(d.stem_leaves, vec![1, 3]);
        assert_eq!(d.core, vec![2]);
        assert_eq!(d.stem_leaf_count, 2);
        assert!(t.has_l_ended_stem(2));
    }

    #[test]
    fn star_uses_single_vertex_convention() {
        let g = Graph::star(4);
        let t = TreeState::bfs(&g, 0).unwrap();
        let d = t.decompose();
        assert_eq!(d.leaves, vec![1, 2, 3, 4]);
        assert_eq!(d.stem, vec![0]);
        assert_eq!(d.stem_leaf_count, 1);
        assert!(d.core.is_empty());
        assert!(t.has_l_ended_stem(1));
        assert!(t.has_l_ended_stem(2));
    }

    #[test]
    fn spider_decomposition() {
        let g = spider();
        let t = TreeState::bfs(&g, 0).unwrap();
        let d = t.decompose();
        assert_eq!(d.leaves, vec![2, 4, 6]);
        assert_eq!(d.stem, vec![0, 1, 3, 5]);
        assert_eq!(d.stem_leaves, vec![1, 3, 5]);
        assert_eq!(d.core, vec![0]);
        assert_eq!(d.stem_leaf_count, 3);
        assert!(!t.has_l_ended_stem(2));
    }

    #[test]
    fn small_tree_conventions() {
        let g = Graph::path(4);
        let edge = TreeState::from_edges(&g, [e(0, 1)]).unwrap();
        let d = edge.decompose();
        assert_eq!(d.leaves, vec![0, 1]);
        assert!(d.stem.is_empty());
        assert_eq!(d.stem_leaf_count, 0);

        let p4 = TreeState::bfs(&g, 0).unwrap();
        let d = p4.decompose();
        assert_eq!(d.stem_leaves, vec![1, 2]);
        assert_eq!(d.stem_leaf_count, 2);

        let single = TreeState::single(&g, 2).unwrap();
        let d = single.decompose();
        assert!(d.leaves.is_empty());
        assert_eq!(d.stem, vec![2]);
        assert_eq!(d.stem_leaf_count, 1);
    }

    #[test]
    fn spanning_predicate() {
        let k4 = Graph::complete(4);
        assert!(TreeState::bfs(&k4, 2).unwrap().is_spanning());
        let p5 = Graph::path(5);
        let p3 = TreeState::from_edges(&p5, [e(0, 1), e(1, 2)]).unwrap();
        assert!(!p3.is_spanning());
        let k1 = Graph::empty(1);
        assert!(TreeState::single(&k1, 0).unwrap().is_spanning());
    }

    #[test]
    fn exchange_with_chord() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        let t = TreeState::from_edges(&g, [e(0, 1), e(1, 2), e(2, 3), e(3, 4)]).unwrap();
        let next = t.apply_exchange(&[e(1, 3)], &[e(2, 3)]).unwrap();
        assert_eq!(next.decompose().leaves, vec![0, 2, 4]);
        assert_eq!(next.edges().len(), next.order() - 1);
    }

    #[test]
    fn exchange_rejects_cycles_and_disconnection() {
        let g = Graph::complete(3);
        let t = TreeState::from_edges(&g, [e(0, 1), e(1, 2)]).unwrap();
        let err = t.apply_exchange(&[e(0, 2)], &[]).unwrap_err();
        assert!(matches!(
            err,
            TreeError::ExchangeRejected {
                defect: Defect::Cyclic,
                ..
            }
        ));
        let err = t.apply_exchange(&[], &[e(0, 1)]).unwrap_err();
        assert!(matches!(
            err,
            TreeError::ExchangeRejected {
                defect: Defect::Disconnected,
                ..
            }
        ));
        assert!(matches!(
            t.apply_exchange(&[e(0, 1)], &[]),
            Err(TreeError::AlreadyInTree(_))
        ));
        assert!(matches!(
            t.apply_exchange(&[], &[e(0, 2)]),
            Err(TreeError::NotInTree(_))
        ));
    }

    #[test]
    fn exchange_identity() {
        let g = Graph::path(4);
        let t = TreeState::bfs(&g, 0).unwrap();
        assert_eq!(t.apply_exchange(&[], &[]).unwrap(), t);
    }

    #[test]
    fn from_edges_validates() {
        let g = Graph::path(4);
        assert!(matches!(
            TreeState::from_edges(&g, [e(0, 2)]),
            Err(TreeError::NotHostEdge(_))
        ));
        assert!(matches!(
            TreeState::from_edges(&g, [e(0, 1), e(2, 3)]),
            Err(TreeError::NotATree(Defect::Disconnected))
        ));
        assert!(matches!(
            TreeState::from_edges(&g, Vec::<Edge>::new()),
            Err(TreeError::EmptyTree)
        ));
    }

    #[test]
    fn serializes_as_edge_list() {
        let g = Graph::path(3);
        let t = TreeState::bfs(&g, 0).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["edges"], serde_json::json!([[0, 1], [1, 2]]));
        assert_eq!(t.to_edge_list(), "3 2\n0 1\n1 2\n");
    }
}
