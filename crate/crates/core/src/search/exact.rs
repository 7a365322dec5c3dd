//! Exact decision by spanning-tree enumeration.
//!
//! The tree is grown from vertex 0. At each node the first frontier edge
//! (tree vertex in insertion order, then smallest outside neighbor) is either
//! included or excluded; exclusion is only taken when the remaining edges
//! still connect the graph, so every search leaf is a spanning tree or a
//! pruned branch. Branches are pruned when a lower bound on the final number
//! of stem leaves already exceeds `l`.

use std::time::Instant;

use super::{SearchError, SearchOutcome, SearchStats, Solver, Status};
use crate::graph::Graph;
use crate::tree::{Edge, TreeState};

/// Default budget on search leaves (spanning trees plus pruned branches).
pub const DEFAULT_TREE_LIMIT: u64 = 10_000_000;

pub fn exact_solve<'g>(g: &'g Graph, l: usize, limit: u64) -> Result<SearchOutcome<'g>, SearchError> {
    if !g.is_connected() {
        return Err(SearchError::Disconnected);
    }
    let start = Instant::now();
    let mut stats = SearchStats::default();
    if g.order() == 1 {
        stats.trees_enumerated = 1;
        let tree = TreeState::single(g, 0).expect("vertex 0 exists");
        return Ok(finish(Status::Found, Some(tree), stats, start));
    }

    let mut search = Enumerator::new(g, l, limit);
    let control = search.run();
    stats.trees_enumerated = search.trees;
    stats.pruned = search.pruned;
    Ok(match control {
        Control::Found => {
            let tree = TreeState::from_edges(g, search.found.iter().map(|&e| Edge::from(search.edges[e])))
                .expect("enumerated edge sets are spanning trees");
            finish(Status::Found, Some(tree), stats, start)
        }
        Control::Limit => finish(Status::Limit, None, stats, start),
        Control::Continue => finish(Status::Exhausted, None, stats, start),
    })
}

fn finish<'g>(
    status: Status,
    tree: Option<TreeState<'g>>,
    mut stats: SearchStats,
    start: Instant,
) -> SearchOutcome<'g> {
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    SearchOutcome {
        solver: Solver::Exact,
        status,
        tree,
        certificate: None,
        stats,
        diagnostic: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Control {
    Continue,
    Found,
    Limit,
}

struct Enumerator<'g> {
    g: &'g Graph,
    l: usize,
    limit: u64,
    edges: Vec<(usize, usize)>,
    /// (neighbor, edge id), neighbors ascending.
    incident: Vec<Vec<(usize, usize)>>,
    /// Undecided edges that may still join the tree.
    alive: Vec<bool>,
    in_tree: Vec<bool>,
    tree_deg: Vec<usize>,
    /// Tree vertices in insertion order.
    order: Vec<usize>,
    chosen: Vec<usize>,
    is_chosen: Vec<bool>,
    trees: u64,
    pruned: u64,
    found: Vec<usize>,
    // scratch
    seen: Vec<bool>,
    stack: Vec<usize>,
}

impl<'g> Enumerator<'g> {
    fn new(g: &'g Graph, l: usize, limit: u64) -> Self {
        let n = g.order();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let mut incident = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incident[u].push((v, id));
            incident[v].push((u, id));
        }
        for list in &mut incident {
            list.sort_unstable();
        }
        let mut in_tree = vec![false; n];
        in_tree[0] = true;
        Enumerator {
            g,
            l,
            limit,
            alive: vec![true; edges.len()],
            incident,
            in_tree,
            tree_deg: vec![0; n],
            order: vec![0],
            chosen: Vec::with_capacity(n - 1),
            is_chosen: vec![false; edges.len()],
            edges,
            trees: 0,
            pruned: 0,
            found: Vec::new(),
            seen: vec![false; n],
            stack: Vec::with_capacity(n),
        }
    }

    fn leaves_counted(&self) -> u64 {
        self.trees + self.pruned
    }

    fn run(&mut self) -> Control {
        if self.order.len() == self.g.order() {
            if self.leaves_counted() >= self.limit {
                return Control::Limit;
            }
            self.trees += 1;
            if self.stem_leaf_count() <= self.l {
                self.found = self.chosen.clone();
                return Control::Found;
            }
            return Control::Continue;
        }
        if self.lower_bound() > self.l {
            if self.leaves_counted() >= self.limit {
                return Control::Limit;
            }
            self.pruned += 1;
            return Control::Continue;
        }

        let Some((u, v, e)) = self.frontier_edge() else {
            unreachable!("live graph stays connected, so a frontier edge exists");
        };

        // include uv
        let killed = self.include(u, v, e);
        let c = self.run();
        self.uninclude(u, v, e, killed);
        if c != Control::Continue {
            return c;
        }

        // exclude uv
        self.alive[e] = false;
        let c = if self.live_graph_connected() {
            self.run()
        } else {
            Control::Continue
        };
        self.alive[e] = true;
        c
    }

    fn frontier_edge(&self) -> Option<(usize, usize, usize)> {
        self.order.iter().find_map(|&u| {
            self.incident[u]
                .iter()
                .find(|&&(v, e)| self.alive[e] && !self.in_tree[v])
                .map(|&(v, e)| (u, v, e))
        })
    }

    /// Adds `v` via edge `e`; edges from `v` back into the tree die.
    fn include(&mut self, u: usize, v: usize, e: usize) -> Vec<usize> {
        self.alive[e] = false;
        self.in_tree[v] = true;
        self.tree_deg[u] += 1;
        self.tree_deg[v] += 1;
        self.order.push(v);
        self.chosen.push(e);
        self.is_chosen[e] = true;
        let mut killed = Vec::new();
        for &(w, f) in &self.incident[v] {
            if self.alive[f] && self.in_tree[w] {
                self.alive[f] = false;
                killed.push(f);
            }
        }
        killed
    }

    fn uninclude(&mut self, u: usize, v: usize, e: usize, killed: Vec<usize>) {
        for f in killed {
            self.alive[f] = true;
        }
        self.chosen.pop();
        self.is_chosen[e] = false;
        self.order.pop();
        self.tree_deg[u] -= 1;
        self.tree_deg[v] -= 1;
        self.in_tree[v] = false;
        self.alive[e] = true;
    }

    fn live_graph_connected(&mut self) -> bool {
        let n = self.g.order();
        self.seen.iter_mut().for_each(|s| *s = false);
        self.stack.clear();
        // The tree is connected; start from all of it.
        let mut count = 0;
        for &v in &self.order {
            self.seen[v] = true;
            self.stack.push(v);
            count += 1;
        }
        while let Some(u) = self.stack.pop() {
            for &(w, f) in &self.incident[u] {
                if self.alive[f] && !self.seen[w] {
                    self.seen[w] = true;
                    count += 1;
                    self.stack.push(w);
                }
            }
        }
        count == n
    }

    fn has_open_edge(&self, x: usize) -> bool {
        self.incident[x].iter().any(|&(w, f)| self.alive[f] && !self.in_tree[w])
    }

    /// Counts tree vertices that are certain to end as stem leaves: closed
    /// (no live edge leaving the tree), tree degree at least 2, and at most
    /// one tree neighbor that is not a certain final leaf.
    fn lower_bound(&self) -> usize {
        let mut count = 0;
        for &x in &self.order {
            if self.tree_deg[x] < 2 || self.has_open_edge(x) {
                continue;
            }
            let uncertain = self
                .tree_neighbors(x)
                .filter(|&y| !(self.tree_deg[y] == 1 && !self.has_open_edge(y)))
                .take(2)
                .count();
            if uncertain <= 1 {
                count += 1;
            }
        }
        count
    }

    fn tree_neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[x]
            .iter()
            .filter(move |&&(_, f)| self.is_chosen[f])
            .map(|&(w, _)| w)
    }

    fn stem_leaf_count(&self) -> usize {
        let stem: Vec<usize> = self.order.iter().copied().filter(|&v| self.tree_deg[v] >= 2).collect();
        if stem.len() <= 1 {
            return stem.len();
        }
        stem.iter()
            .filter(|&&x| self.tree_neighbors(x).filter(|&y| self.tree_deg[y] >= 2).count() == 1)
            .count()
    }
}
