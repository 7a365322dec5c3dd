//! Brute-force oracles shared by the integration tests. They use only the
//! adjacency lists of the graph and none of the library's algorithms.

#![allow(dead_code)]

use std::collections::VecDeque;

use stemtree::{parse_graph6, Graph};

pub const FIXTURE: &str = include_str!("../fixtures/connected_n1_to_8.g6");

pub fn fixture(max_n: usize) -> Vec<Graph> {
    FIXTURE
        .lines()
        .map(|l| parse_graph6(l).expect("fixture parses"))
        .filter(|g| g.order() <= max_n)
        .collect()
}

/// BFS distances; `usize::MAX` for unreachable pairs.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &v in g.neighbors(u) {
                    if d[v] == usize::MAX {
                        d[v] = d[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            d
        })
        .collect()
}

fn spread(d: &[Vec<usize>], mask: u32, m: usize) -> bool {
    let vs: Vec<usize> = (0..32).filter(|&i| mask >> i & 1 == 1).collect();
    vs.iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| d[a][b] >= m))
}

/// Largest vertex set with pairwise distance at least `m`, by subset scan.
pub fn brute_alpha(g: &Graph, m: usize) -> usize {
    let d = distances(g);
    (0u32..1 << g.order())
        .filter(|&s| spread(&d, s, m))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Minimum degree sum of a `p`-set with pairwise distance at least `m`.
pub fn brute_sigma(g: &Graph, m: usize, p: usize) -> Option<u64> {
    let d = distances(g);
    (0u32..1 << g.order())
        .filter(|&s| s.count_ones() as usize == p && spread(&d, s, m))
        .map(|s| {
            (0..g.order())
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| g.degree(i) as u64)
                .sum()
        })
        .min()
}

/// Stem-leaf count of a tree on all `n` vertices given by its edges.
pub fn stem_leaves(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut deg = vec![0; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let stem: Vec<usize> = (0..n).filter(|&v| deg[v] >= 2).collect();
    if stem.len() <= 1 {
        return stem.len();
    }
    stem.iter()
        .filter(|&&v| {
            edges
                .iter()
                .filter(|&&(a, b)| (a == v && deg[b] >= 2) || (b == v && deg[a] >= 2))
                .count()
                == 1
        })
        .count()
}

fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            v = p[v];
        }
        v
    }
    for &(a, b) in edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    edges.len() + 1 == n
}

/// Scans every `(n-1)`-edge subset; true when one is a spanning tree with at
/// most `l` stem leaves.
pub fn brute_has_l_ended_tree(g: &Graph, l: usize) -> bool {
    let n = g.order();
    if n == 1 {
        return true;
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| g.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect();
    let k = n - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    let mut pick = Vec::with_capacity(k);
    loop {
        pick.clear();
        pick.extend(idx.iter().map(|&i| edges[i]));
        if is_spanning_tree(n, &pick) && stem_leaves(n, &pick) <= l {
            return true;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + edges.len() - k {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
