//! Local search over trees with `l`-ended stems.
//!
//! The search keeps a tree whose stem has at most `l` leaves and applies the
//! first applicable exchange from an ordered move list. Every accepted move
//! strictly increases `Φ(T) = (|V(T)|, |Leaf(T)|)`, so the search terminates.
//! When no move applies and the tree is not spanning, the search restarts
//! from the BFS tree of the next root; once every root is stuck, the stuck
//! trees are handed to certificate extraction in root order.
//!
//! Moves, in priority order:
//! - M1 extend: attach an outside vertex to the tree.
//! - M2 relocate leaves: reattach every leaf hanging off a stem leaf `x` to
//!   another stem vertex, turning `x` into a leaf.
//! - M3 splice to a stem-leaf child: join an outside vertex to a leaf `y`
//!   hanging off a stem leaf by a path through leaves and outside vertices,
//!   detaching the path's leaves from the stem.
//! - M4 splice to a stem leaf: the same with the path ending at the stem
//!   leaf itself.
//! - M5 leaf cycle swap: join the pendant parts of two stem leaves by such a
//!   path, break the resulting cycle at a stem edge, then extend.
//! - M6 core swaps: `T + s v2 + v2 v1 - s v3` and
//!   `T + x s + x v3 + v2 v1 - s v3` around core vertices `s, v3`.
//!
//! Every candidate goes through `apply_exchange` and the stem-leaf predicate;
//! invalid candidates are skipped.

use std::collections::VecDeque;
use std::time::Instant;

use serde::Serialize;

use super::certificate::extract_certificate;
use super::{Potential, SearchError, SearchOutcome, SearchStats, Solver, Status};
use crate::graph::Graph;
use crate::tree::{Edge, StemDecomposition, TreeState};

pub const DEFAULT_MOVE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Move {
    #[serde(rename = "M1-extend")]
    Extend,
    #[serde(rename = "M2-relocate-leaves")]
    RelocateLeaves,
    #[serde(rename = "M3-splice-to-stem-leaf-child")]
    SpliceToLeafChild,
    #[serde(rename = "M4-splice-to-stem-leaf")]
    SpliceToStemLeaf,
    #[serde(rename = "M5-leaf-cycle-swap")]
    LeafCycleSwap,
    #[serde(rename = "M6-core-swap")]
    CoreSwap,
}

impl Move {
    pub const ALL: [Move; 6] = [
        Move::Extend,
        Move::RelocateLeaves,
        Move::SpliceToLeafChild,
        Move::SpliceToStemLeaf,
        Move::LeafCycleSwap,
        Move::CoreSwap,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Move::Extend => "M1-extend",
            Move::RelocateLeaves => "M2-relocate-leaves",
            Move::SpliceToLeafChild => "M3-splice-to-stem-leaf-child",
            Move::SpliceToStemLeaf => "M4-splice-to-stem-leaf",
            Move::LeafCycleSwap => "M5-leaf-cycle-swap",
            Move::CoreSwap => "M6-core-swap",
        }
    }
}

pub fn local_search_solve<'g>(
    g: &'g Graph,
    t: usize,
    l: usize,
    move_budget: u64,
) -> Result<SearchOutcome<'g>, SearchError> {
    if t < 3 {
        return Err(SearchError::InvalidT(t));
    }
    if l == 0 {
        return Err(SearchError::InvalidL);
    }
    if !g.is_connected() {
        return Err(SearchError::Disconnected);
    }
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let done = |status, tree, certificate, diagnostic, mut stats: SearchStats| {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        SearchOutcome {
            solver: Solver::Local,
            status,
            tree,
            certificate,
            stats,
            diagnostic,
        }
    };

    // One climb per root; a stuck climb restarts from the next root.
    let mut stuck: Vec<(TreeState<'g>, Vec<Potential>)> = Vec::new();
    for root in 0..g.order() {
        if root > 0 {
            stats.restarts += 1;
        }
        let mut tree = initial_tree_from(g, l, root);
        let mut trace = vec![Potential::of(&tree)];
        loop {
            if tree.is_spanning() {
                stats.trace = trace;
                return Ok(done(Status::Found, Some(tree), None, None, stats));
            }
            if stats.moves_applied >= move_budget {
                stats.trace = trace;
                return Ok(done(Status::Limit, None, None, None, stats));
            }
            let view = View::new(&tree);
            let Some((mv, next)) = find_move(&view, l) else {
                break;
            };
            let phi = Potential::of(&next);
            debug_assert!(phi > view.potential, "{} did not increase the potential", mv.label());
            stats.moves_applied += 1;
            stats.move_counts[mv.index()] += 1;
            trace.push(phi);
            log::trace!("root {root}: {} -> {:?}", mv.label(), phi);
            tree = next;
        }
        stuck.push((tree, trace));
    }

    // Certify from the first stuck tree that yields a certificate.
    let mut first_error = None;
    for (tree, trace) in &stuck {
        match extract_certificate(g, t, l, tree) {
            Ok(cert) => {
                stats.q = cert.audit.q;
                stats.trace = trace.clone();
                return Ok(done(Status::CertifiedFail, None, Some(cert), None, stats));
            }
            Err(err) => {
                first_error.get_or_insert(err);
            }
        }
    }
    stats.trace = stuck.swap_remove(0).1;
    let diagnostic = first_error.map(|e| e.to_string());
    Ok(done(Status::Exhausted, None, None, diagnostic, stats))
}

/// [`initial_tree_from`] rooted at vertex 0.
pub fn initial_tree(g: &Graph, l: usize) -> TreeState<'_> {
    initial_tree_from(g, l, 0)
}

/// BFS tree from `root`, trimmed until its stem has at most `l` leaves by
/// repeatedly deleting the stem leaf farthest from the root together with
/// the leaves hanging off it.
pub fn initial_tree_from(g: &Graph, l: usize, root: usize) -> TreeState<'_> {
    let fallback = || TreeState::single(g, root).expect("root in range");
    let Ok(mut tree) = TreeState::bfs(g, root) else {
        return fallback();
    };
    let dist0 = g.distances().row(root).to_vec();
    loop {
        let dec = tree.decompose();
        if dec.stem_leaf_count <= l {
            return tree;
        }
        if dec.stem.len() < 2 {
            return fallback();
        }
        let &x = dec
            .stem_leaves
            .iter()
            .max_by_key(|&&x| (dist0[x], x))
            .expect("stem leaves exist");
        let adj = tree.adjacency();
        let dropped: Vec<usize> = std::iter::once(x)
            .chain(adj[x].iter().copied().filter(|&y| adj[y].len() == 1))
            .collect();
        let kept: Vec<Edge> = tree
            .edges()
            .iter()
            .copied()
            .filter(|e| !dropped.iter().any(|&d| e.touches(d)))
            .collect();
        tree = if kept.is_empty() {
            let survivor = adj[x].iter().copied().find(|y| !dropped.contains(y));
            match survivor {
                Some(s) => TreeState::single(g, s).expect("vertex in range"),
                None => return fallback(),
            }
        } else {
            match TreeState::from_edges(g, kept) {
                Ok(t) => t,
                Err(_) => return fallback(),
            }
        };
    }
}

/// Precomputed membership data for one tree.
pub(crate) struct View<'t, 'g> {
    pub tree: &'t TreeState<'g>,
    pub g: &'g Graph,
    pub dec: StemDecomposition,
    pub in_tree: Vec<bool>,
    pub is_leaf: Vec<bool>,
    pub is_stem: Vec<bool>,
    pub is_core: Vec<bool>,
    pub adj: Vec<Vec<usize>>,
    pub potential: Potential,
}

impl<'t, 'g> View<'t, 'g> {
    pub fn new(tree: &'t TreeState<'g>) -> Self {
        let g = tree.host();
        let n = g.order();
        let dec = tree.decompose();
        let mark = |vs: &[usize]| {
            let mut m = vec![false; n];
            vs.iter().for_each(|&v| m[v] = true);
            m
        };
        let mut in_tree = vec![false; n];
        tree.vertices().iter().for_each(|&v| in_tree[v] = true);
        View {
            tree,
            g,
            is_leaf: mark(&dec.leaves),
            is_stem: mark(&dec.stem),
            is_core: mark(&dec.core),
            in_tree,
            adj: tree.adjacency(),
            potential: Potential {
                order: tree.order(),
                leaves: dec.leaves.len(),
            },
            dec,
        }
    }

    /// Tree leaves whose only tree neighbor is `x`.
    pub fn attached(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[x].iter().copied().filter(|&y| self.is_leaf[y])
    }

    /// The unique tree edge of a leaf.
    fn leaf_edge(&self, y: usize) -> Edge {
        Edge::new(y, self.adj[y][0])
    }

    /// Leaves and outside vertices: the vertices a splice path may cross.
    fn passable(&self, v: usize) -> bool {
        !self.in_tree[v] || self.is_leaf[v]
    }

    fn outside(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.g.order()).filter(|&v| !self.in_tree[v])
    }

    fn accepts(&self, cand: &TreeState<'g>, l: usize) -> bool {
        cand.has_l_ended_stem(l) && Potential::of(cand) > self.potential
    }

    fn try_exchange(&self, add: &[Edge], remove: &[Edge], l: usize) -> Option<TreeState<'g>> {
        self.tree
            .apply_exchange(add, remove)
            .ok()
            .filter(|cand| self.accepts(cand, l))
    }
}

pub(crate) fn find_move<'g>(view: &View<'_, 'g>, l: usize) -> Option<(Move, TreeState<'g>)> {
    if let Some(t) = extend(view, l) {
        return Some((Move::Extend, t));
    }
    if let Some(t) = relocate_leaves(view, l) {
        return Some((Move::RelocateLeaves, t));
    }
    let searches: Vec<Bfs> = view.outside().map(|s| Bfs::from(view, s)).collect();
    if let Some(t) = splice_to_leaf_child(view, &searches, l) {
        return Some((Move::SpliceToLeafChild, t));
    }
    if let Some(t) = splice_to_stem_leaf(view, &searches, l) {
        return Some((Move::SpliceToStemLeaf, t));
    }
    if let Some(t) = leaf_cycle_swap(view, l) {
        return Some((Move::LeafCycleSwap, t));
    }
    if let Some(t) = core_swap(view, l) {
        return Some((Move::CoreSwap, t));
    }
    None
}

/// M1.
pub(crate) fn extend<'g>(view: &View<'_, 'g>, l: usize) -> Option<TreeState<'g>> {
    view.tree.vertices().iter().find_map(|&u| {
        view.g
            .neighbors(u)
            .iter()
            .filter(|&&v| !view.in_tree[v])
            .find_map(|&v| view.try_exchange(&[Edge::new(u, v)], &[], l))
    })
}

/// M2.
pub(crate) fn relocate_leaves<'g>(view: &View<'_, 'g>, l: usize) -> Option<TreeState<'g>> {
    if view.dec.stem.len() < 2 {
        return None;
    }
    view.dec.stem_leaves.iter().find_map(|&x| {
        let ys: Vec<usize> = view.attached(x).collect();
        if ys.is_empty() {
            return None;
        }
        let mut add = Vec::with_capacity(ys.len());
        let mut remove = Vec::with_capacity(ys.len());
        for &y in &ys {
            let z = view
                .g
                .neighbors(y)
                .iter()
                .copied()
                .find(|&z| z != x && view.is_stem[z])?;
            add.push(Edge::new(y, z));
            remove.push(Edge::new(y, x));
        }
        view.try_exchange(&add, &remove, l)
    })
}

/// Shortest paths from one source through passable vertices.
struct Bfs {
    dist: Vec<usize>,
    parent: Vec<usize>,
}

impl Bfs {
    const UNSEEN: usize = usize::MAX;

    fn from(view: &View<'_, '_>, source: usize) -> Self {
        let n = view.g.order();
        let mut dist = vec![Self::UNSEEN; n];
        let mut parent = vec![Self::UNSEEN; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in view.g.neighbors(u) {
                if dist[v] == Self::UNSEEN && view.passable(v) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        Bfs { dist, parent }
    }

    fn reached(&self, v: usize) -> bool {
        self.dist[v] != Self::UNSEEN
    }

    /// Path from the source to `v`, source first.
    fn path_to(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while self.dist[cur] != 0 {
            cur = self.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Shortest path from the source to a non-passable target `x`, entering
    /// `x` from its closest reached neighbor (ties to the smaller index).
    fn path_into(&self, g: &Graph, x: usize) -> Option<Vec<usize>> {
        let w = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&w| self.reached(w))
            .min_by_key(|&w| (self.dist[w], w))?;
        let mut path = self.path_to(w);
        path.push(x);
        Some(path)
    }
}

/// Adds the path and detaches every leaf on it, except the last vertex,
/// from its old stem neighbor. Path edges already in the tree are kept.
fn path_exchange(view: &View<'_, '_>, path: &[usize], keep_last: bool) -> (Vec<Edge>, Vec<Edge>) {
    let path_edges: Vec<Edge> = path.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
    let add: Vec<Edge> = path_edges
        .iter()
        .copied()
        .filter(|&e| !view.tree.contains_edge(e))
        .collect();
    let detach = if keep_last { &path[..path.len() - 1] } else { path };
    let remove = detach
        .iter()
        .filter(|&&q| view.in_tree[q] && view.is_leaf[q])
        .map(|&q| view.leaf_edge(q))
        .filter(|e| !path_edges.contains(e))
        .collect();
    (add, remove)
}

/// M3.
fn splice_to_leaf_child<'g>(view: &View<'_, 'g>, searches: &[Bfs], l: usize) -> Option<TreeState<'g>> {
    searches.iter().find_map(|bfs| {
        view.dec.stem_leaves.iter().find_map(|&x| {
            view.attached(x).filter(|&y| bfs.reached(y)).find_map(|y| {
                let (add, remove) = path_exchange(view, &bfs.path_to(y), true);
                view.try_exchange(&add, &remove, l)
            })
        })
    })
}

/// M4.
fn splice_to_stem_leaf<'g>(view: &View<'_, 'g>, searches: &[Bfs], l: usize) -> Option<TreeState<'g>> {
    searches.iter().find_map(|bfs| {
        view.dec.stem_leaves.iter().find_map(|&x| {
            let path = bfs.path_into(view.g, x)?;
            let (add, remove) = path_exchange(view, &path, true);
            view.try_exchange(&add, &remove, l)
        })
    })
}

/// M5.
fn leaf_cycle_swap<'g>(view: &View<'_, 'g>, l: usize) -> Option<TreeState<'g>> {
    let xs = &view.dec.stem_leaves;
    if view.dec.stem.len() < 2 {
        return None;
    }
    let stem_deg: Vec<usize> = (0..view.g.order())
        .map(|v| {
            if view.is_stem[v] {
                view.adj[v].iter().filter(|&&w| view.is_stem[w]).count()
            } else {
                0
            }
        })
        .collect();

    for (i, &xi) in xs.iter().enumerate() {
        for &xj in &xs[i + 1..] {
            let ends_i: Vec<usize> = std::iter::once(xi).chain(view.attached(xi)).collect();
            let ends_j: Vec<usize> = std::iter::once(xj).chain(view.attached(xj)).collect();
            for &a in &ends_i {
                let bfs = Bfs::from(view, a);
                for &b in &ends_j {
                    let path = if view.is_leaf[b] {
                        if !bfs.reached(b) {
                            continue;
                        }
                        bfs.path_to(b)
                    } else {
                        match bfs.path_into(view.g, b) {
                            Some(p) => p,
                            None => continue,
                        }
                    };
                    if let Some(t) = break_cycle(view, &path, xi, xj, &stem_deg, l) {
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

fn break_cycle<'g>(
    view: &View<'_, 'g>,
    path: &[usize],
    xi: usize,
    xj: usize,
    stem_deg: &[usize],
    l: usize,
) -> Option<TreeState<'g>> {
    let path_edges: Vec<Edge> = path.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
    let add: Vec<Edge> = path_edges
        .iter()
        .copied()
        .filter(|&e| !view.tree.contains_edge(e))
        .collect();
    if add.is_empty() {
        return None;
    }
    let interior = &path[1..path.len() - 1];
    let remove_leaves: Vec<Edge> = interior
        .iter()
        .filter(|&&q| view.in_tree[q] && view.is_leaf[q])
        .map(|&q| view.leaf_edge(q))
        .filter(|e| !path_edges.contains(e))
        .collect();

    // Stem edges on the tree path between the two stem leaves lie on the
    // cycle closed by the new path. Edges at stem branch vertices go first.
    let mut cycle_stem: Vec<Edge> = stem_path(view, xi, xj)
        .windows(2)
        .map(|w| Edge::new(w[0], w[1]))
        .collect();
    cycle_stem.sort_by_key(|e| {
        let (u, v) = e.ends();
        (stem_deg[u] < 3 && stem_deg[v] < 3, *e)
    });

    for e in cycle_stem {
        let mut remove = remove_leaves.clone();
        remove.push(e);
        let Ok(cand) = view.tree.apply_exchange(&add, &remove) else {
            continue;
        };
        if view.accepts(&cand, l) {
            return Some(cand);
        }
        for &u in cand.vertices() {
            for &v in view.g.neighbors(u) {
                if cand.contains(v) {
                    continue;
                }
                if let Ok(ext) = cand.apply_exchange(&[Edge::new(u, v)], &[]) {
                    if view.accepts(&ext, l) {
                        return Some(ext);
                    }
                }
            }
        }
    }
    None
}

/// Tree path between two stem vertices (it stays inside the stem).
fn stem_path(view: &View<'_, '_>, from: usize, to: usize) -> Vec<usize> {
    let n = view.g.order();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &v in &view.adj[u] {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// M6.
fn core_swap<'g>(view: &View<'_, 'g>, l: usize) -> Option<TreeState<'g>> {
    let g = view.g;
    for v1 in view.outside() {
        for &v2 in g.neighbors(v1).iter().filter(|&&v| view.is_leaf[v]) {
            let grow = Edge::new(v2, v1);
            for &v3 in g.neighbors(v2).iter().filter(|&&v| view.is_core[v]) {
                for &s in view.adj[v3].iter().filter(|&&s| view.is_core[s]) {
                    let cut = Edge::new(s, v3);
                    // T + s v2 + v2 v1 - s v3
                    if g.has_edge(s, v2) && !view.tree.contains_edge(Edge::new(s, v2)) {
                        if let Some(t) = view.try_exchange(&[Edge::new(s, v2), grow], &[cut], l) {
                            return Some(t);
                        }
                    }
                    // T + x s + x v3 + v2 v1 - s v3
                    for &x in view
                        .dec
                        .stem_leaves
                        .iter()
                        .filter(|&&x| g.has_edge(x, s) && g.has_edge(x, v3))
                    {
                        let mut add = vec![Edge::new(x, s), grow];
                        if !view.tree.contains_edge(Edge::new(x, v3)) {
                            add.push(Edge::new(x, v3));
                        }
                        if let Some(t) = view.try_exchange(&add, &[cut], l) {
                            return Some(t);
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{verify_tree, Validation};

    #[test]
    fn path_grows_by_extension_only() {
        let g = Graph::path(5);
        // Start from a single vertex by asking for the 1-ended stem first:
        let out = local_search_solve(&g, 3, 2, DEFAULT_MOVE_BUDGET).unwrap();
        assert_eq!(out.status, Status::Found);
        assert!(out.stats.move_counts[1..].iter().all(|&c| c == 0));
        assert_eq!(verify_tree(&g, 2, out.tree.as_ref().unwrap()), Validation::ok());
    }

    #[test]
    fn complete_graph_finds_star() {
        let g = Graph::complete(4);
        let out = local_search_solve(&g, 3, 2, DEFAULT_MOVE_BUDGET).unwrap();
        assert_eq!(out.status, Status::Found);
        assert_eq!(out.tree.unwrap().stem_leaf_count(), 1);
    }

    #[test]
    fn initial_tree_is_l_ended() {
        let spider = Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let t = initial_tree(&spider, 2);
        assert!(t.has_l_ended_stem(2));
        assert!(!t.is_spanning());
        // The far leg (largest index among the farthest stem leaves) is cut.
        assert!(!t.contains(5) && !t.contains(6));
    }

    #[test]
    fn trace_is_strictly_increasing() {
        let g = Graph::cycle(9);
        let out = local_search_solve(&g, 3, 2, DEFAULT_MOVE_BUDGET).unwrap();
        assert!(out.stats.trace.windows(2).all(|w| w[0] < w[1]));
        assert!(out.stats.trace.len() <= 81);
    }

    #[test]
    fn budget_is_respected() {
        let g = Graph::path(12);
        let spider = initial_tree(&g, 2);
        assert!(spider.order() >= 1);
        let out = local_search_solve(&g, 3, 2, 0).unwrap();
        // BFS tree of a path is already spanning and 2-ended.
        assert_eq!(out.status, Status::Found);
        let star_of_paths = Graph::from_edges(
            10,
            [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5), (5, 6), (0, 7), (7, 8), (8, 9)],
        )
        .unwrap();
        let out = local_search_solve(&star_of_paths, 4, 2, 1).unwrap();
        assert!(matches!(
            out.status,
            Status::Limit | Status::CertifiedFail | Status::Exhausted
        ));
        assert!(out.stats.moves_applied <= 1);
    }

    #[test]
    fn parameter_errors() {
        let g = Graph::path(3);
        assert_eq!(local_search_solve(&g, 2, 2, 10).unwrap_err(), SearchError::InvalidT(2));
        assert_eq!(local_search_solve(&g, 3, 0, 10).unwrap_err(), SearchError::InvalidL);
        assert_eq!(
            local_search_solve(&Graph::empty(3), 3, 2, 10).unwrap_err(),
            SearchError::Disconnected
        );
    }
}
