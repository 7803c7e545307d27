use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::graph::Graph;
use crate::params::Params;
use crate::rng::{gnp, stream, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Red,
    Blue,
}

/// One of the two random base graphs on `N` ordered vertices. For `Red` the
/// vertices index grid rows, for `Blue` grid columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    side: Side,
    graph: Graph,
}

impl BaseGraph {
    pub fn new(side: Side, graph: Graph) -> Self {
        BaseGraph { side, graph }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(v)
    }

    /// `N⁺(v)`: neighbours with a larger index.
    pub fn upper_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(v).filter(move |&u| u > v)
    }

    /// Entry `(x, y)` is set iff `x, y ∈ N(m)` for some `m`. The diagonal
    /// `(x, x)` is set iff `x` has a neighbour.
    pub fn common_neighbor_matrix(&self) -> BitMatrix {
        self.box_matrix(|m| self.neighbors(m).collect())
    }

    /// Entry `(x, y)` is set iff `x, y ∈ N⁺(m)` for some `m`, i.e. `x` and
    /// `y` share a neighbour below both of them.
    pub fn common_lower_neighbor_matrix(&self) -> BitMatrix {
        self.box_matrix(|m| self.upper_neighbors(m).collect())
    }

    fn box_matrix(&self, members: impl Fn(usize) -> Vec<usize>) -> BitMatrix {
        let n = self.order();
        let mut out = BitMatrix::new(n);
        for m in 0..n {
            let nb = members(m);
            for &a in &nb {
                for &b in &nb {
                    out.set(a, b);
                }
            }
        }
        out
    }
}

/// Two independent `G(N, p)` samples on separate streams of `seed`.
pub fn sample_base_graphs(params: &Params, seed: u64) -> (BaseGraph, BaseGraph) {
    let red = gnp(params.side, params.p, &mut stream(seed, Stream::RedBase));
    let blue = gnp(params.side, params.p, &mut stream(seed, Stream::BlueBase));
    (
        BaseGraph::new(Side::Red, red),
        BaseGraph::new(Side::Blue, blue),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::explicit_simple;

    #[test]
    fn saturated_and_empty() {
        let full = explicit_simple(9, 3, 1.0, 3).unwrap();
        let (r, b) = sample_base_graphs(&full, 5);
        assert_eq!(r.graph().edge_count(), 3);
        assert_eq!(b.graph().edge_count(), 3);
        let empty = explicit_simple(9, 3, 0.0, 3).unwrap();
        let (r, b) = sample_base_graphs(&empty, 5);
        assert_eq!(r.graph().edge_count() + b.graph().edge_count(), 0);
    }

    #[test]
    fn red_and_blue_differ() {
        let p = explicit_simple(400, 20, 0.5, 20).unwrap();
        let (r, b) = sample_base_graphs(&p, 11);
        assert_ne!(r.graph(), b.graph());
        let (r2, b2) = sample_base_graphs(&p, 11);
        assert_eq!(r, r2);
        assert_eq!(b, b2);
    }

    #[test]
    fn box_matrices_on_path() {
        // path 0-1-2: N(1) = {0,2}, N⁺(0) = {1}, N⁺(1) = {2}
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let b = BaseGraph::new(Side::Red, g);
        let common = b.common_neighbor_matrix();
        assert!(common.get(0, 2) && common.get(2, 0));
        assert!(common.get(0, 0) && common.get(1, 1));
        assert!(!common.get(0, 1));
        let lower = b.common_lower_neighbor_matrix();
        // 0 and 2 only share neighbour 1, which is not below 0
        assert!(!lower.get(0, 2));
        assert!(lower.get(1, 1) && lower.get(2, 2));
        assert!(!lower.get(0, 0));
    }
}
