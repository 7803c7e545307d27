use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::analysis::count_triangles;
use crate::color::{Color, Colors};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Triple = [usize; 3];

/// Sorts three distinct vertices; `None` if any two coincide.
pub fn normalize(t: Triple) -> Option<Triple> {
    let mut t = t;
    t.sort_unstable();
    (t[0] < t[1] && t[1] < t[2]).then_some(t)
}

/// A 3-uniform hypergraph whose edges carry red/blue flags. Triples are kept
/// sorted; an edge is present iff its flags are non-empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSystem {
    order: usize,
    edges: BTreeMap<Triple, Colors>,
}

impl TripleSystem {
    pub fn new(order: usize) -> Self {
        TripleSystem {
            order,
            edges: BTreeMap::new(),
        }
    }

    /// Every triple of `0..order`, flagged `colors`.
    pub fn complete(order: usize, colors: Colors) -> Self {
        let mut h = TripleSystem::new(order);
        for a in 0..order {
            for b in a + 1..order {
                for c in b + 1..order {
                    h.edges.insert([a, b, c], colors);
                }
            }
        }
        h
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn count_with(&self, c: Color) -> usize {
        self.edges.values().filter(|f| f.has(c)).count()
    }

    fn check(&self, t: Triple) -> Result<Triple> {
        for &v in &t {
            if v >= self.order {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    order: self.order,
                });
            }
        }
        normalize(t).ok_or(Error::DegenerateTriple(t))
    }

    /// Adds `colors` to the flags of `t`. Empty flags are a no-op.
    pub fn insert(&mut self, t: Triple, colors: Colors) -> Result<()> {
        let t = self.check(t)?;
        if !colors.is_empty() {
            *self.edges.entry(t).or_default() |= colors;
        }
        Ok(())
    }

    /// Overwrites the flags of `t`; empty flags remove the edge.
    pub fn set_colors(&mut self, t: Triple, colors: Colors) -> Result<()> {
        let t = self.check(t)?;
        if colors.is_empty() {
            self.edges.remove(&t);
        } else {
            self.edges.insert(t, colors);
        }
        Ok(())
    }

    pub fn colors(&self, t: Triple) -> Colors {
        normalize(t)
            .and_then(|t| self.edges.get(&t).copied())
            .unwrap_or(Colors::NONE)
    }

    pub fn contains(&self, t: Triple) -> bool {
        !self.colors(t).is_empty()
    }

    /// Edges in lexicographic order of their sorted vertex triples.
    pub fn iter(&self) -> impl Iterator<Item = (Triple, Colors)> + '_ {
        self.edges.iter().map(|(&t, &c)| (t, c))
    }

    /// The sub-system of edges carrying `c`, flagged `c` only.
    pub fn restrict(&self, c: Color) -> TripleSystem {
        TripleSystem {
            order: self.order,
            edges: self
                .iter()
                .filter(|(_, f)| f.has(c))
                .map(|(t, _)| (t, Colors::from(c)))
                .collect(),
        }
    }

    pub(crate) fn from_map(order: usize, edges: BTreeMap<Triple, Colors>) -> Self {
        TripleSystem { order, edges }
    }
}

/// The link of `center`: a graph on all `order` vertices (the centre isolated)
/// with `{x, y}` present iff `{center, x, y}` is an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub center: usize,
    pub graph: Graph,
    colors: BTreeMap<(usize, usize), Colors>,
}

impl LinkGraph {
    pub fn colors(&self, x: usize, y: usize) -> Colors {
        let key = if x < y { (x, y) } else { (y, x) };
        self.colors.get(&key).copied().unwrap_or(Colors::NONE)
    }

    /// The sub-link of edges whose triple carries `c`.
    pub fn restrict(&self, c: Color) -> Graph {
        let mut g = Graph::empty(self.graph.order());
        for (&(x, y), f) in &self.colors {
            if f.has(c) {
                g.add_edge(x, y);
            }
        }
        g
    }
}

pub fn extract_link(h: &TripleSystem, v: usize) -> Result<LinkGraph> {
    if v >= h.order() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: h.order(),
        });
    }
    let mut graph = Graph::empty(h.order());
    let mut colors = BTreeMap::new();
    for (t, f) in h.iter() {
        if let Some(pos) = t.iter().position(|&x| x == v) {
            let (x, y) = match pos {
                0 => (t[1], t[2]),
                1 => (t[0], t[2]),
                _ => (t[0], t[1]),
            };
            graph.add_edge(x, y);
            colors.insert((x, y), f);
        }
    }
    Ok(LinkGraph {
        center: v,
        graph,
        colors,
    })
}

/// Link edge lists of every vertex, one pass over the edges.
pub fn link_edge_lists(h: &TripleSystem) -> Vec<Vec<(usize, usize)>> {
    let mut links = vec![Vec::new(); h.order()];
    for ([a, b, c], _) in h.iter() {
        links[a].push((b, c));
        links[b].push((a, c));
        links[c].push((a, b));
    }
    links
}

/// A link edge list relabelled onto its own vertex set, so that sparse links
/// of large systems stay small.
pub fn compact_link(edges: &[(usize, usize)]) -> Graph {
    let mut ids: Vec<usize> = edges.iter().flat_map(|&(x, y)| [x, y]).collect();
    ids.sort_unstable();
    ids.dedup();
    let at = |x: usize| ids.binary_search(&x).expect("endpoint listed");
    let mut g = Graph::empty(ids.len());
    for &(x, y) in edges {
        g.add_edge(at(x), at(y));
    }
    g
}

/// True iff no vertex link contains a triangle, i.e. no 4-set spans three edges.
pub fn verify_s4_free(h: &TripleSystem) -> bool {
    link_edge_lists(h)
        .iter()
        .all(|l| count_triangles(&compact_link(l)) == 0)
}

/// Definition-level check over all 4-subsets: none may span three or more edges.
pub fn s4_free_brute_force(h: &TripleSystem) -> bool {
    let n = h.order();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let abc = h.contains([a, b, c]) as u8;
                for d in c + 1..n {
                    let spanned = abc
                        + h.contains([a, b, d]) as u8
                        + h.contains([a, c, d]) as u8
                        + h.contains([b, c, d]) as u8;
                    if spanned >= 3 {
                        return false;
                    }
                }
            }
        }
    }
    true
}
