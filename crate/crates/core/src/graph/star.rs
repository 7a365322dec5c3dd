use serde::{Deserialize, Serialize};

use super::Graph;

/// An induced `K_{1,t}`: a center and `t` pairwise non-adjacent neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedStar {
    pub center: usize,
    pub leaves: Vec<usize>,
}

/// First induced `K_{1,t}` found scanning centers in increasing order and,
/// per center, neighbor `t`-subsets in lexicographic order.
pub fn find_induced_star(g: &Graph, t: usize) -> Option<InducedStar> {
    assert!(t >= 1, "star size must be positive");
    let mut chosen = Vec::with_capacity(t);
    for center in 0..g.order() {
        let ns = g.neighbors(center);
        if ns.len() < t {
            continue;
        }
        chosen.clear();
        if extend(g, ns, 0, t, &mut chosen) {
            return Some(InducedStar {
                center,
                leaves: chosen.clone(),
            });
        }
    }
    None
}

// Lexicographic backtracking over independent subsets of `ns`.
fn extend(g: &Graph, ns: &[usize], from: usize, t: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == t {
        return true;
    }
    let need = t - chosen.len();
    for i in from..ns.len() {
        if ns.len() - i < need {
            break;
        }
        let v = ns[i];
        if chosen.iter().any(|&c| g.has_edge(c, v)) {
            continue;
        }
        chosen.push(v);
        if extend(g, ns, i + 1, t, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Checks that `star` is a genuine induced `K_{1,t}` of `g`.
pub fn is_induced_star(g: &Graph, star: &InducedStar, t: usize) -> bool {
    let n = g.order();
    if star.leaves.len() != t || star.center >= n || star.leaves.iter().any(|&v| v >= n) {
        return false;
    }
    let mut sorted = star.leaves.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t || sorted.contains(&star.center) {
        return false;
    }
    sorted.iter().all(|&v| g.has_edge(star.center, v))
        && sorted
            .iter()
            .enumerate()
            .all(|(i, &a)| sorted[i + 1..].iter().all(|&b| !g.has_edge(a, b)))
}
