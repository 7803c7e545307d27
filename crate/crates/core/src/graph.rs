//! Simple undirected graph over `0..n` with bitset adjacency rows.
//!
//! This is the common view that placed graphs, baselines and link graphs are
//! analysed through.

use crate::bits::{BitMatrix, BitSet, Ones};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: BitMatrix,
    degrees: Vec<usize>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::new(n),
            degrees: vec![0; n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n);
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        order: n,
                    });
                }
            }
            if u == v {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("self-loop at {u}"),
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.degrees.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// Adds `uv`; returns false if it was already present. Self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || self.adj.get(u, v) {
            return false;
        }
        self.adj.set_sym(u, v);
        self.degrees[u] += 1;
        self.degrees[v] += 1;
        self.edges += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.adj.get(u, v) {
            return false;
        }
        self.adj.unset(u, v);
        self.adj.unset(v, u);
        self.degrees[u] -= 1;
        self.degrees[v] -= 1;
        self.edges -= 1;
        true
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Vertex of maximum degree (smallest index on ties).
    pub fn max_degree_vertex(&self) -> Option<usize> {
        let max = self.max_degree();
        self.degrees.iter().position(|&d| d == max)
    }

    pub fn neighbors(&self, v: usize) -> Ones<'_> {
        self.adj.row_ones(v)
    }

    pub fn neighbor_words(&self, v: usize) -> &[u64] {
        self.adj.row(v)
    }

    pub fn neighbor_set(&self, v: usize) -> BitSet {
        let mut s = BitSet::new(self.order());
        for u in self.neighbors(v) {
            s.insert(u);
        }
        s
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        for (i, &u) in set.iter().enumerate() {
            if u >= self.order() {
                return false;
            }
            for &v in &set[i + 1..] {
                if u == v || self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Graph on `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Complement graph (no loops).
    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_mutation() {
        let mut g = Graph::empty(5);
        assert!(g.add_edge(0, 1));
        assert!(!g.add_edge(1, 0));
        assert!(!g.add_edge(2, 2));
        g.add_edge(1, 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(1), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 4)]);
        assert!(g.remove_edge(4, 1));
        assert_eq!(g.edge_count(), 1);
        assert!(g.adjacency().is_symmetric());
        assert!(g.is_independent(&[0, 2, 3, 4]));
        assert!(!g.is_independent(&[0, 1]));
        assert!(!g.is_independent(&[2, 2]));
    }

    #[test]
    fn complement_of_cycle() {
        let c5 = Graph::cycle(5);
        let comp = c5.complement();
        assert_eq!(comp.edge_count(), 5);
        assert!(comp.degrees().iter().all(|&d| d == 2));
    }
}
