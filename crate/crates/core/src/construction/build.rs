use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::params::Params;

use super::base::{sample_base_graphs, BaseGraph};
use super::placement::{sample_injection, Placement};
use super::product::{apply_deletion_rule, conormal_product, ColoredProductGraph, ProductCounts};

/// Intermediate statistics recorded by [`build`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub red_base_edges: usize,
    pub blue_base_edges: usize,
    pub g1: ProductCounts,
    pub g2: ProductCounts,
    pub red_flags_deleted: u64,
    pub blue_flags_deleted: u64,
    /// Edges of `G_1` that lost every flag.
    pub edges_deleted: u64,
    /// Dual-coloured edges of `G_1` that lost exactly one flag and survived.
    pub edges_demoted: u64,
    pub final_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub params: Params,
    pub seed: u64,
    pub stats: BuildStats,
}

/// Final graph `G` with its injection into the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedGraph {
    pub placement: Placement,
    pub graph: Graph,
    pub provenance: Option<Provenance>,
}

impl PlacedGraph {
    pub fn n(&self) -> usize {
        self.graph.order()
    }
}

/// Everything [`build`] produces: base graphs, the post-deletion product and `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub red: BaseGraph,
    pub blue: BaseGraph,
    pub g2: ColoredProductGraph,
    pub placed: PlacedGraph,
}

impl Instance {
    pub fn params(&self) -> &Params {
        &self.provenance().params
    }

    pub fn seed(&self) -> u64 {
        self.provenance().seed
    }

    pub fn provenance(&self) -> &Provenance {
        self.placed
            .provenance
            .as_ref()
            .expect("built instances carry provenance")
    }

    pub fn graph(&self) -> &Graph {
        &self.placed.graph
    }

    pub fn placement(&self) -> &Placement {
        &self.placed.placement
    }
}

/// Pulls `g2` back along the placement.
pub fn induce_final_graph(g2: &ColoredProductGraph, placement: &Placement) -> Result<PlacedGraph> {
    Ok(PlacedGraph {
        placement: placement.clone(),
        graph: induce(g2, placement)?,
        provenance: None,
    })
}

fn induce(g2: &ColoredProductGraph, placement: &Placement) -> Result<Graph> {
    // Placement::new already enforces injectivity; re-check the grid size here.
    if placement.side() != g2.side() {
        return Err(crate::error::Error::OrderMismatch {
            red: g2.side(),
            blue: placement.side(),
        });
    }
    let rows = placement.row_fibers();
    let cols = placement.col_fibers();
    let mut g = Graph::empty(placement.len());
    for (u, &cu) in placement.cells().iter().enumerate() {
        for k in g2.red_row_partners(cu.row) {
            for &v in &rows[k] {
                if v > u && g2.has_edge(cu, placement.cell(v)) {
                    g.add_edge(u, v);
                }
            }
        }
        for l in g2.blue_col_partners(cu.col) {
            for &v in &cols[l] {
                if v > u && g2.has_edge(cu, placement.cell(v)) {
                    g.add_edge(u, v);
                }
            }
        }
    }
    Ok(g)
}

/// Samples base graphs and placement from `seed` and runs all four steps.
pub fn build(params: &Params, seed: u64) -> Result<Instance> {
    let (red, blue) = sample_base_graphs(params, seed);
    let g1 = conormal_product(&red, &blue)?;
    let g2 = apply_deletion_rule(&g1, &red, &blue)?;
    let placement = sample_injection(params, seed)?;
    let graph = induce(&g2, &placement)?;

    let (c1, c2) = (g1.counts(), g2.counts());
    // dual edges in G1 = those lying on a red edge of G_R and a blue edge of G_B;
    // each keeps red iff its rows have no common lower neighbour and its columns
    // no common neighbour, and symmetrically for blue
    let demoted = demoted_dual_edges(&red, &blue);
    let stats = BuildStats {
        red_base_edges: red.graph().edge_count(),
        blue_base_edges: blue.graph().edge_count(),
        g1: c1,
        g2: c2,
        red_flags_deleted: c1.red_flags - c2.red_flags,
        blue_flags_deleted: c1.blue_flags - c2.blue_flags,
        edges_deleted: c1.edges - c2.edges,
        edges_demoted: demoted,
        final_edges: graph.edge_count(),
    };
    let provenance = Provenance {
        params: params.clone(),
        seed,
        stats,
    };
    Ok(Instance {
        red,
        blue,
        g2,
        placed: PlacedGraph {
            placement,
            graph,
            provenance: Some(provenance),
        },
    })
}

fn demoted_dual_edges(red: &BaseGraph, blue: &BaseGraph) -> u64 {
    let r_common = red.common_neighbor_matrix();
    let r_lower = red.common_lower_neighbor_matrix();
    let b_common = blue.common_neighbor_matrix();
    let b_lower = blue.common_lower_neighbor_matrix();
    let mut demoted = 0u64;
    for (i, k) in red.graph().edges() {
        for (j, l) in blue.graph().edges() {
            // two cell pairs: (i,j)-(k,l) and (i,l)-(k,j)
            for (a, b) in [(j, l), (l, j)] {
                let keeps_red = !r_lower.get(i, k) && !b_common.get(a, b);
                let keeps_blue = !r_common.get(i, k) && !b_lower.get(a, b);
                if keeps_red != keeps_blue {
                    demoted += 1;
                }
            }
        }
    }
    demoted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::product::Cell;
    use crate::params::{derive_default, explicit_simple};

    #[test]
    fn zero_probability_gives_empty_graph() {
        let p = explicit_simple(9, 3, 0.0, 3).unwrap();
        let inst = build(&p, 42).unwrap();
        assert_eq!(inst.graph().edge_count(), 0);
        assert_eq!(inst.provenance().stats.g1.edges, 0);
    }

    #[test]
    fn full_occupancy_matches_g2() {
        let p = explicit_simple(16, 4, 0.6, 4).unwrap();
        let inst = build(&p, 3).unwrap();
        let ident = Placement::identity(4);
        let pg = induce_final_graph(&inst.g2, &ident).unwrap();
        assert_eq!(pg.graph, inst.g2.underlying_graph());
        assert_eq!(pg.graph.edge_count() as u64, inst.g2.counts().edges);
    }

    #[test]
    fn induced_adjacency_follows_cells() {
        let p = explicit_simple(20, 6, 0.5, 4).unwrap();
        let inst = build(&p, 8).unwrap();
        let pl = inst.placement();
        for u in 0..20 {
            for v in 0..20 {
                if u != v {
                    assert_eq!(
                        inst.graph().has_edge(u, v),
                        inst.g2.has_edge(pl.cell(u), pl.cell(v))
                    );
                }
            }
        }
    }

    #[test]
    fn stats_are_consistent() {
        let p = derive_default(1000, 0.1).unwrap();
        let inst = build(&p, 1).unwrap();
        let s = &inst.provenance().stats;
        assert_eq!(s.g1.red_flags, (s.red_base_edges * p.side * p.side) as u64);
        assert_eq!(s.g1.dual, 2 * (s.red_base_edges * s.blue_base_edges) as u64);
        assert!(s.g2.edges <= s.g1.edges);
        assert_eq!(s.final_edges, inst.graph().edge_count());
        // brute-force the demoted count from the dense product
        let g1 = conormal_product(&inst.red, &inst.blue).unwrap();
        let mut demoted = 0;
        let cells = p.side * p.side;
        let g2 = &inst.g2;
        for (i, k) in inst.red.graph().edges() {
            for (j, l) in inst.blue.graph().edges() {
                for (a, b) in [(j, l), (l, j)] {
                    let (x, y) = (Cell::new(i, a), Cell::new(k, b));
                    assert!(g1.colors(x, y).red() && g1.colors(x, y).blue());
                    let c = g2.colors(x, y);
                    if c.red() != c.blue() {
                        demoted += 1;
                    }
                }
            }
        }
        assert!(cells > 0);
        assert_eq!(demoted, s.edges_demoted);
    }

    #[test]
    fn deterministic() {
        let p = derive_default(1000, 0.1).unwrap();
        let a = build(&p, 99).unwrap();
        let b = build(&p, 99).unwrap();
        assert_eq!(a.placed, b.placed);
    }
}
