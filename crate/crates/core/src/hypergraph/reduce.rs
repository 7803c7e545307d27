use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::triples::{Triple, TripleSystem};
use crate::bits::BitSet;
use crate::color::{Color, Colors};
use crate::graph::Graph;

/// Incrementally maintained links of every vertex: adding `{a, b, c}` adds the
/// link edges `bc` at `a`, `ac` at `b` and `ab` at `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkIndex {
    order: usize,
    adj: Vec<BTreeMap<usize, BitSet>>,
}

impl LinkIndex {
    pub fn new(order: usize) -> Self {
        LinkIndex {
            order,
            adj: vec![BTreeMap::new(); order],
        }
    }

    /// Links of the edges of `h` that carry `c`.
    pub fn of_color(h: &TripleSystem, c: Color) -> Self {
        let mut idx = LinkIndex::new(h.order());
        h.iter()
            .filter(|(_, f)| f.has(c))
            .for_each(|(t, _)| idx.add(t));
        idx
    }

    fn centered(t: Triple) -> [(usize, usize, usize); 3] {
        let [a, b, c] = t;
        [(a, b, c), (b, a, c), (c, a, b)]
    }

    fn link_set(&mut self, v: usize, x: usize) -> &mut BitSet {
        let order = self.order;
        self.adj[v].entry(x).or_insert_with(|| BitSet::new(order))
    }

    pub fn add(&mut self, t: Triple) {
        for (v, x, y) in Self::centered(t) {
            self.link_set(v, x).insert(y);
            self.link_set(v, y).insert(x);
        }
    }

    pub fn remove(&mut self, t: Triple) {
        for (v, x, y) in Self::centered(t) {
            self.link_set(v, x).remove(y);
            self.link_set(v, y).remove(x);
        }
    }

    pub fn has_link_edge(&self, v: usize, x: usize, y: usize) -> bool {
        self.adj[v].get(&x).is_some_and(|s| s.contains(y))
    }

    /// Would `t` complete three edges on a 4-set together with two edges
    /// already indexed? The centre of such a star lies in `t`, so this is a
    /// common-neighbour query in three links.
    pub fn closes_star(&self, t: Triple) -> bool {
        Self::centered(t).iter().any(|&(v, x, y)| {
            match (self.adj[v].get(&x), self.adj[v].get(&y)) {
                (Some(sx), Some(sy)) => sx.intersects(sy),
                _ => false,
            }
        })
    }

    pub fn link_graph(&self, v: usize) -> Graph {
        let mut g = Graph::empty(self.order);
        for (&x, s) in &self.adj[v] {
            for y in s.iter().filter(|&y| y > x) {
                g.add_edge(x, y);
            }
        }
        g
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStats {
    pub input_edges: usize,
    /// Red flags refused in the red pass.
    pub red_rejected: usize,
    /// Blue flags refused in the blue pass.
    pub blue_rejected: usize,
    /// Red-only edges removed for closing a star with two blue-carrying edges.
    pub red_removed: usize,
    /// Blue-only edges removed for closing a star with two red-carrying edges.
    pub blue_removed: usize,
    pub output_edges: usize,
}

#[derive(Clone, Debug)]
pub struct S4Reduction {
    pub system: TripleSystem,
    pub stats: ReductionStats,
    /// Links of the red-carrying and blue-carrying output edges, as maintained
    /// during the passes.
    pub red_links: LinkIndex,
    pub blue_links: LinkIndex,
}

/// [`s4_reduction_with_order`] with triples ordered by their sorted vertex labels.
pub fn s4_reduction(h: &TripleSystem) -> TripleSystem {
    s4_reduction_with_order(h, None).system
}

/// Four passes making `h` free of 4-sets spanning three edges.
///
/// 1. Red flags in order: accepted unless they would complete such a 4-set
///    with two accepted red flags.
/// 2. The same for blue flags, independently; an edge whose red flag was
///    accepted stays present even if its blue flag is refused.
/// 3. Red-only edges completing a 4-set with two blue-carrying edges are removed.
/// 4. Blue-only edges completing a 4-set with two red-carrying edges are removed.
///
/// Triples are processed by the sorted sequence of `rank[v]` over their
/// vertices (vertex labels when `rank` is `None`). Passes 3 and 4 test only
/// edges that their own pass never removes, so their result does not depend
/// on the order.
pub fn s4_reduction_with_order(h: &TripleSystem, rank: Option<&[usize]>) -> S4Reduction {
    let n = h.order();
    let key = |t: Triple| -> Triple {
        let mut k = match rank {
            Some(r) => t.map(|v| r[v]),
            None => t,
        };
        k.sort_unstable();
        k
    };
    let mut order: Vec<(Triple, Triple, Colors)> = h.iter().map(|(t, f)| (key(t), t, f)).collect();
    order.sort_unstable();

    let mut stats = ReductionStats {
        input_edges: h.edge_count(),
        ..Default::default()
    };
    let mut flags: BTreeMap<Triple, Colors> = BTreeMap::new();
    let mut red_links = LinkIndex::new(n);
    let mut blue_links = LinkIndex::new(n);

    for &(_, t, f) in &order {
        if f.red() {
            if red_links.closes_star(t) {
                stats.red_rejected += 1;
            } else {
                red_links.add(t);
                *flags.entry(t).or_default() |= Colors::RED;
            }
        }
    }
    for &(_, t, f) in &order {
        if f.blue() {
            if blue_links.closes_star(t) {
                stats.blue_rejected += 1;
            } else {
                blue_links.add(t);
                *flags.entry(t).or_default() |= Colors::BLUE;
            }
        }
    }

    let red_only: Vec<Triple> = flags
        .iter()
        .filter(|(_, &f)| f == Colors::RED)
        .map(|(&t, _)| t)
        .collect();
    for t in red_only {
        if blue_links.closes_star(t) {
            flags.remove(&t);
            red_links.remove(t);
            stats.red_removed += 1;
        }
    }
    let blue_only: Vec<Triple> = flags
        .iter()
        .filter(|(_, &f)| f == Colors::BLUE)
        .map(|(&t, _)| t)
        .collect();
    for t in blue_only {
        if red_links.closes_star(t) {
            flags.remove(&t);
            blue_links.remove(t);
            stats.blue_removed += 1;
        }
    }

    stats.output_edges = flags.len();
    S4Reduction {
        system: TripleSystem::from_map(n, flags),
        stats,
        red_links,
        blue_links,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::triples::{extract_link, s4_free_brute_force, verify_s4_free};

    #[test]
    fn star_loses_its_last_triple() {
        let mut h = TripleSystem::new(4);
        for t in [[0, 1, 2], [0, 1, 3], [0, 2, 3]] {
            h.insert(t, Colors::RED).unwrap();
        }
        assert!(!verify_s4_free(&h));
        let r = s4_reduction_with_order(&h, None);
        assert_eq!(
            r.system.iter().map(|(t, _)| t).collect::<Vec<_>>(),
            vec![[0, 1, 2], [0, 1, 3]]
        );
        assert_eq!(r.stats.red_rejected, 1);
        assert!(verify_s4_free(&r.system));
    }

    #[test]
    fn empty_stays_empty() {
        let r = s4_reduction(&TripleSystem::new(5));
        assert!(r.is_empty());
        assert_eq!(r.order(), 5);
    }

    #[test]
    fn mixed_star_drops_red_only_edge() {
        // blue {0,1,2}, {0,1,3}; red {0,2,3}: no monochromatic star, removed in pass 3
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2], Colors::BLUE).unwrap();
        h.insert([0, 1, 3], Colors::BLUE).unwrap();
        h.insert([0, 2, 3], Colors::RED).unwrap();
        let r = s4_reduction_with_order(&h, None);
        assert_eq!(r.stats.red_removed, 1);
        assert_eq!(r.system.edge_count(), 2);
        assert!(!r.system.contains([0, 2, 3]));
    }

    #[test]
    fn mixed_star_drops_blue_only_edge() {
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2], Colors::RED).unwrap();
        h.insert([0, 1, 3], Colors::RED).unwrap();
        h.insert([0, 2, 3], Colors::BLUE).unwrap();
        let r = s4_reduction_with_order(&h, None);
        assert_eq!(r.stats.blue_removed, 1);
        assert!(!r.system.contains([0, 2, 3]));
        assert!(verify_s4_free(&r.system));
    }

    #[test]
    fn dual_edge_keeps_red_flag_when_blue_refused() {
        // blue {0,1,2}, {0,1,3} accepted first; dual {0,2,3} loses blue, keeps red
        let mut h = TripleSystem::new(4);
        h.insert([0, 1, 2], Colors::BLUE).unwrap();
        h.insert([0, 1, 3], Colors::BLUE).unwrap();
        h.insert([0, 2, 3], Colors::BOTH).unwrap();
        let r = s4_reduction_with_order(&h, None);
        assert_eq!(r.stats.blue_rejected, 1);
        // red-only now, with two blue-carrying partners: removed in pass 3
        assert_eq!(r.stats.red_removed, 1);
        assert!(verify_s4_free(&r.system));
    }

    #[test]
    fn order_changes_survivor() {
        let mut h = TripleSystem::new(4);
        for t in [[0, 1, 2], [0, 1, 3], [0, 2, 3]] {
            h.insert(t, Colors::RED).unwrap();
        }
        // reverse the labels: [0,2,3] now ranks first, [0,1,2] last
        let rank = [3, 2, 1, 0];
        let r = s4_reduction_with_order(&h, Some(&rank));
        assert!(!r.system.contains([0, 1, 2]));
        assert!(r.system.contains([0, 2, 3]));
    }

    #[test]
    fn complete_systems_reduce_cleanly() {
        for n in 4..9 {
            for colors in [Colors::RED, Colors::BOTH] {
                let h = TripleSystem::complete(n, colors);
                let r = s4_reduction_with_order(&h, None);
                assert!(verify_s4_free(&r.system));
                assert!(s4_free_brute_force(&r.system));
                for v in 0..n {
                    let link = extract_link(&r.system, v).unwrap();
                    assert_eq!(r.red_links.link_graph(v), link.restrict(Color::Red));
                    assert_eq!(r.blue_links.link_graph(v), link.restrict(Color::Blue));
                }
            }
        }
    }
}
