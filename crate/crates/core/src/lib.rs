//! Spanning trees whose stems have few leaves, in `K_{1,t}`-free graphs.
//!
//! The crate computes the distance-4 degree-sum condition
//! `σ⁴_{l+1}(G) >= |G| - floor(l(t-1)/(t-2)) - 1`, decides exactly whether a
//! graph has a spanning tree whose stem has at most `l` leaves, runs a
//! local-search solver that emits checkable certificates when it gets stuck,
//! and builds the two extremal families that show the condition is tight.

pub mod extremal;
pub mod graph;
pub mod harness;
pub mod invariants;
pub mod search;
pub mod tree;

pub use graph::{encode_graph6, find_induced_star, parse_edge_list, parse_graph6, Graph, InducedStar};
pub use invariants::{evaluate_condition, ConditionReport, Sigma};
pub use search::{exact_solve, local_search_solve, SearchOutcome, Status};
pub use tree::{Edge, StemDecomposition, TreeState};
