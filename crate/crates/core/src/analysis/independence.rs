//! Independence number: exact branch-and-bound and heuristic lower bounds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::graph::Graph;
use crate::rng::{stream, Stream};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Greedy,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceResult {
    pub method: Method,
    pub value: usize,
    pub certificate: Vec<usize>,
    pub optimal: bool,
    /// Search nodes (exact) or improvement sweeps (heuristic) spent.
    pub budget_used: u64,
}

/// Maximum independent set by branch-and-bound on the complement-clique
/// formulation. Candidates are bounded by a greedy partition into cliques of
/// `g` (a colouring of the complement). When the node budget runs out the best
/// set found so far is returned with `optimal = false`.
pub fn independence_exact(g: &Graph, budget: u64) -> IndependenceResult {
    let seed_set = independence_greedy(g, 1, 0).certificate;
    let mut search = Search {
        g,
        budget,
        nodes: 0,
        aborted: false,
        best: seed_set,
    };
    let mut current = Vec::new();
    let cand = BitSet::full(g.order());
    search.expand(&mut current, cand);
    let mut certificate = search.best;
    certificate.sort_unstable();
    IndependenceResult {
        method: Method::Exact,
        value: certificate.len(),
        certificate,
        optimal: !search.aborted,
        budget_used: search.nodes,
    }
}

struct Search<'a> {
    g: &'a Graph,
    budget: u64,
    nodes: u64,
    aborted: bool,
    best: Vec<usize>,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut cand: BitSet) {
        if self.nodes >= self.budget {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        let (order, bounds) = self.clique_cover_order(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + bounds[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            current.push(v);
            let mut next = cand.clone();
            next.remove(v);
            next.difference_with_words(self.g.neighbor_words(v));
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            cand.remove(v);
            if self.aborted {
                return;
            }
        }
    }

    /// Greedy partition of `cand` into cliques of `g`; `bounds[i]` is the
    /// number of cliques used up to and including `order[i]`.
    fn clique_cover_order(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut uncovered = cand.clone();
        let mut color = 0;
        while !uncovered.is_empty() {
            color += 1;
            let mut q = uncovered.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.intersect_with_words(self.g.neighbor_words(v));
                uncovered.remove(v);
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }
}

/// Heuristic lower bound: best of the max-degree neighbourhood (independent
/// whenever `g` is triangle-free), min-degree greedy with random tie-breaking
/// over `restarts` runs, each polished by (1,2)-swap local search.
pub fn independence_greedy(g: &Graph, restarts: usize, seed: u64) -> IndependenceResult {
    let n = g.order();
    let mut rng = stream(seed, Stream::Greedy);
    let mut best: Vec<usize> = Vec::new();
    let mut method = Method::Greedy;
    let mut sweeps = 0u64;

    if let Some(v) = g.max_degree_vertex() {
        let nb: Vec<usize> = g.neighbors(v).collect();
        if g.is_independent(&nb) {
            best = nb;
        }
    }
    for _ in 0..restarts.max(1) {
        let prio: Vec<u64> = (0..n).map(|_| rng.random()).collect();
        let start = min_degree_greedy(g, &prio);
        let (improved, used) = local_search(g, &start);
        sweeps += used;
        if improved.len() > best.len() {
            method = if improved.len() > start.len() {
                Method::LocalSearch
            } else {
                Method::Greedy
            };
            best = improved;
        }
    }
    best.sort_unstable();
    IndependenceResult {
        method,
        value: best.len(),
        certificate: best,
        optimal: false,
        budget_used: sweeps,
    }
}

fn min_degree_greedy(g: &Graph, prio: &[u64]) -> Vec<usize> {
    let n = g.order();
    let mut deg: Vec<usize> = g.degrees().to_vec();
    let mut gone = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, u64, usize)>> =
        (0..n).map(|v| Reverse((deg[v], prio[v], v))).collect();
    let mut set = Vec::new();
    while let Some(Reverse((d, _, v))) = heap.pop() {
        if gone[v] || d != deg[v] {
            continue;
        }
        set.push(v);
        gone[v] = true;
        for u in g.neighbors(v) {
            if gone[u] {
                continue;
            }
            gone[u] = true;
            for w in g.neighbors(u) {
                if !gone[w] {
                    deg[w] -= 1;
                    heap.push(Reverse((deg[w], prio[w], w)));
                }
            }
        }
    }
    set
}

/// (1,2)-swaps: drop one solution vertex, insert two non-adjacent vertices
/// whose only solution neighbour it was. Free vertices are inserted directly.
fn local_search(g: &Graph, start: &[usize]) -> (Vec<usize>, u64) {
    let n = g.order();
    let mut in_sol = vec![false; n];
    let mut tight = vec![0u32; n];
    let add = |v: usize, in_sol: &mut Vec<bool>, tight: &mut Vec<u32>| {
        in_sol[v] = true;
        for u in g.neighbors(v) {
            tight[u] += 1;
        }
    };
    let drop = |v: usize, in_sol: &mut Vec<bool>, tight: &mut Vec<u32>| {
        in_sol[v] = false;
        for u in g.neighbors(v) {
            tight[u] -= 1;
        }
    };
    for &v in start {
        add(v, &mut in_sol, &mut tight);
    }
    let mut sweeps = 0u64;
    loop {
        sweeps += 1;
        let mut improved = false;
        for v in 0..n {
            if !in_sol[v] && tight[v] == 0 {
                add(v, &mut in_sol, &mut tight);
                improved = true;
            }
        }
        for x in 0..n {
            if !in_sol[x] {
                continue;
            }
            let cands: Vec<usize> = g
                .neighbors(x)
                .filter(|&u| !in_sol[u] && tight[u] == 1)
                .collect();
            let pair = cands.iter().enumerate().find_map(|(i, &u)| {
                cands[i + 1..]
                    .iter()
                    .find(|&&w| !g.has_edge(u, w))
                    .map(|&w| (u, w))
            });
            if let Some((u, w)) = pair {
                drop(x, &mut in_sol, &mut tight);
                add(u, &mut in_sol, &mut tight);
                add(w, &mut in_sol, &mut tight);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    let set = (0..n).filter(|&v| in_sol[v]).collect();
    (set, sweeps)
}

/// Exhaustive maximum independent set size over all `2^n` subsets (`n <= 24`).
pub fn independence_brute_force(g: &Graph) -> usize {
    let n = g.order();
    assert!(n <= 24, "brute force limited to 24 vertices");
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let mut best = 0;
    for s in 0u32..(1u32 << n) {
        let size = s.count_ones() as usize;
        if size <= best {
            continue;
        }
        if (0..n).all(|v| s & (1 << v) == 0 || s & masks[v] == 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::gnp;

    fn star(t: usize) -> Graph {
        Graph::from_edges(t + 1, (1..=t).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn exact_small_families() {
        assert_eq!(
            independence_exact(&Graph::empty(7), DEFAULT_NODE_BUDGET).value,
            7
        );
        assert_eq!(
            independence_exact(&Graph::complete(6), DEFAULT_NODE_BUDGET).value,
            1
        );
        let c5 = independence_exact(&Graph::cycle(5), DEFAULT_NODE_BUDGET);
        assert_eq!(c5.value, 2);
        assert!(c5.optimal);
        assert_eq!(independence_brute_force(&Graph::cycle(5)), 2);
        assert_eq!(independence_exact(&star(6), DEFAULT_NODE_BUDGET).value, 6);
    }

    #[test]
    fn greedy_small_families() {
        for seed in 0..10 {
            assert_eq!(independence_greedy(&Graph::cycle(5), 3, seed).value, 2);
            assert_eq!(independence_greedy(&star(9), 2, seed).value, 9);
            assert_eq!(independence_greedy(&Graph::empty(4), 1, seed).value, 4);
        }
    }

    #[test]
    fn exact_matches_brute_force() {
        for s in 0..40u64 {
            let n = 6 + (s as usize % 13);
            let g = gnp(n, (s % 10) as f64 / 10.0, &mut stream(s, Stream::Baseline));
            let r = independence_exact(&g, DEFAULT_NODE_BUDGET);
            assert!(r.optimal);
            assert!(g.is_independent(&r.certificate));
            assert_eq!(r.value, independence_brute_force(&g), "seed {s}");
        }
    }

    #[test]
    fn zero_budget_still_certifies() {
        let g = gnp(60, 0.2, &mut stream(1, Stream::Baseline));
        let r = independence_exact(&g, 0);
        assert!(!r.optimal);
        assert!(g.is_independent(&r.certificate));
        assert_eq!(r.value, r.certificate.len());
    }

    #[test]
    fn local_search_finds_swap() {
        // path a-x-b with x chosen: swapping x for {a, b} gains one
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (set, _) = local_search(&g, &[1]);
        assert_eq!(set, vec![0, 2]);
    }
}
