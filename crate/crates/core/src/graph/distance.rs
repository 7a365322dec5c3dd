use std::collections::VecDeque;

use super::Graph;

/// Distance reported for pairs in different components. It compares greater
/// than every finite distance, so `d >= m` checks stay correct on
/// disconnected inputs for any threshold `m`.
pub const UNREACHABLE: u32 = u32::MAX;

/// Hop distances between every pair of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub(crate) fn compute(g: &Graph) -> Self {
        let n = g.order();
        let mut dist = vec![UNREACHABLE; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for &v in g.neighbors(u) {
                    if row[v] == UNREACHABLE {
                        row[v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Raw distance, [`UNREACHABLE`] for disconnected pairs.
    #[inline]
    pub fn raw(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        match self.raw(u, v) {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// `d(u, v) >= m`, treating unreachable pairs as infinitely far apart.
    #[inline]
    pub fn at_least(&self, u: usize, v: usize, m: u32) -> bool {
        self.raw(u, v) >= m
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    /// Largest finite distance; `None` on a disconnected graph.
    pub fn diameter(&self) -> Option<u32> {
        self.dist
            .iter()
            .try_fold(0, |acc, &d| if d == UNREACHABLE { None } else { Some(acc.max(d)) })
    }
}
