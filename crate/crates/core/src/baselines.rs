//! Reference constructions: edge deletion from `G(n, p)` and the
//! triangle-free process.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{intersection_count, BitMatrix};
use crate::graph::Graph;
use crate::rng::{gnp, pair_from_index, stream, Stream};

/// Default density constant `c` for the deletion baseline, `p = c / sqrt(n)`.
pub const DEFAULT_DELETION_CONSTANT: f64 = 0.5;

pub fn default_deletion_p(n: usize) -> f64 {
    (DEFAULT_DELETION_CONSTANT / (n.max(1) as f64).sqrt()).min(1.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDeletion {
    pub graph: Graph,
    pub sampled_edges: usize,
    pub deleted_edges: usize,
}

impl EdgeDeletion {
    /// Fraction of sampled edges lost to deletion.
    pub fn loss(&self) -> f64 {
        if self.sampled_edges == 0 {
            0.0
        } else {
            self.deleted_edges as f64 / self.sampled_edges as f64
        }
    }
}

/// Samples `G(n, p)` and walks its triangles `a < b < c` in lexicographic
/// order, deleting the least edge `ab` of every triangle still intact.
///
/// Edges `ac` and `bc` can only be deleted by triangles that come later, so
/// `ab` goes iff some `c > b` is a common neighbour in the sample; the
/// deletions are computed in one pass against the original graph.
pub fn edge_deletion_baseline(n: usize, p: f64, seed: u64) -> EdgeDeletion {
    let sample = gnp(n, p.clamp(0.0, 1.0), &mut stream(seed, Stream::Baseline));
    let doomed: Vec<(usize, usize)> = sample
        .edges()
        .filter(|&(a, b)| {
            let start = (b + 1) / 64;
            let (na, nb) = (sample.neighbor_words(a), sample.neighbor_words(b));
            if start >= na.len() {
                return false;
            }
            let mask = !0u64 << ((b + 1) % 64);
            na[start] & nb[start] & mask != 0
                || intersection_count(&na[start + 1..], &nb[start + 1..]) > 0
        })
        .collect();
    let mut graph = sample;
    let sampled_edges = graph.edge_count();
    for &(a, b) in &doomed {
        graph.remove_edge(a, b);
    }
    EdgeDeletion {
        graph,
        sampled_edges,
        deleted_edges: doomed.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessSummary {
    pub steps: usize,
    /// Every non-edge closes a triangle.
    pub maximal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleFreeProcess {
    pub graph: Graph,
    pub summary: ProcessSummary,
}

/// Adds uniformly random open pairs (non-edges without a common neighbour)
/// until none is left or `max_steps` edges have been added.
///
/// Closed pairs are tracked in a bit matrix with an exact open count. Pairs
/// are drawn by rejection from all pairs while at least 1/16 of them are open,
/// then from an explicit list of open pairs whose stale entries are discarded
/// on draw; both give a uniform choice among the open pairs.
pub fn triangle_free_process(n: usize, seed: u64, max_steps: Option<usize>) -> TriangleFreeProcess {
    let mut rng = stream(seed, Stream::Baseline);
    let mut g = Graph::empty(n);
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let mut closed = BitMatrix::new(n);
    let mut open = total;
    let mut steps = 0usize;
    let limit = max_steps.unwrap_or(usize::MAX);
    let mut list: Option<Vec<(usize, usize)>> = None;

    let close = |closed: &mut BitMatrix, open: &mut u64, u: usize, v: usize| {
        if u != v && !closed.get(u, v) {
            closed.set_sym(u, v);
            *open -= 1;
        }
    };

    while open > 0 && steps < limit {
        let (u, v) = if list.is_none() && open * 16 >= total {
            loop {
                let (u, v) = pair_from_index(n, rng.random_range(0..total));
                if !closed.get(u, v) {
                    break (u, v);
                }
            }
        } else {
            let pairs = list.get_or_insert_with(|| {
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| !closed.get(u, v))
                    .collect()
            });
            loop {
                let i = rng.random_range(0..pairs.len());
                let (u, v) = pairs.swap_remove(i);
                if !closed.get(u, v) {
                    break (u, v);
                }
            }
        };
        let nu: Vec<usize> = g.neighbors(u).collect();
        let nv: Vec<usize> = g.neighbors(v).collect();
        close(&mut closed, &mut open, u, v);
        for w in nv {
            close(&mut closed, &mut open, u, w);
        }
        for w in nu {
            close(&mut closed, &mut open, v, w);
        }
        g.add_edge(u, v);
        steps += 1;
    }
    TriangleFreeProcess {
        graph: g,
        summary: ProcessSummary {
            steps,
            maximal: open == 0,
        },
    }
}

/// Every non-edge has a common neighbour.
pub fn is_maximal_triangle_free(g: &Graph) -> bool {
    let n = g.order();
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            g.has_edge(u, v) || intersection_count(g.neighbor_words(u), g.neighbor_words(v)) > 0
        })
    })
}
