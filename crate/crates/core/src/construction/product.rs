//! Colored co-normal product of the two base graphs and the deletion rule.
//!
//! Every graph on the grid that this crate builds has a separable colouring:
//! a cell pair `((i,j),(k,l))` is red iff `red_rows[i][k] && red_cols[j][l]`
//! and blue iff `blue_rows[i][k] && blue_cols[j][l]`. The product and the
//! post-deletion graph differ only in these four `N x N` factors, so pair
//! queries never need the `N^2 x N^2` adjacency. It is materialised as packed
//! bitsets only when `N^2` is at most the dense cap.

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::color::Colors;
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::base::{BaseGraph, Side};

/// Default upper bound on `N^2` for materialising cell adjacency.
pub const DEFAULT_DENSE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// Row-major index.
    pub fn index(self, side: usize) -> usize {
        self.row * side + self.col
    }

    pub fn from_index(idx: usize, side: usize) -> Self {
        Cell {
            row: idx / side,
            col: idx % side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Dense {
    red: BitMatrix,
    blue: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredProductGraph {
    side: usize,
    red_rows: BitMatrix,
    red_cols: BitMatrix,
    blue_rows: BitMatrix,
    blue_cols: BitMatrix,
    dense: Option<Dense>,
}

/// Edge and flag totals of a product graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCounts {
    pub red_flags: u64,
    pub blue_flags: u64,
    pub dual: u64,
    pub edges: u64,
}

impl ColoredProductGraph {
    fn from_factors(
        side: usize,
        red_rows: BitMatrix,
        red_cols: BitMatrix,
        blue_rows: BitMatrix,
        blue_cols: BitMatrix,
        dense_cap: usize,
    ) -> Self {
        let mut g = ColoredProductGraph {
            side,
            red_rows,
            red_cols,
            blue_rows,
            blue_cols,
            dense: None,
        };
        if side * side <= dense_cap {
            g.dense = Some(g.materialize());
        }
        g
    }

    fn materialize(&self) -> Dense {
        let cells = self.cells();
        let mut red = BitMatrix::new(cells);
        let mut blue = BitMatrix::new(cells);
        for a in 0..cells {
            let ca = Cell::from_index(a, self.side);
            for b in 0..cells {
                let cb = Cell::from_index(b, self.side);
                let f = self.factor_colors(ca, cb);
                if f.red() {
                    red.set(a, b);
                }
                if f.blue() {
                    blue.set(a, b);
                }
            }
        }
        Dense { red, blue }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> usize {
        self.side * self.side
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// Drops the materialised adjacency (queries fall back to the factors).
    pub fn into_lazy(mut self) -> Self {
        self.dense = None;
        self
    }

    #[inline]
    fn factor_colors(&self, a: Cell, b: Cell) -> Colors {
        let red = self.red_rows.get(a.row, b.row) && self.red_cols.get(a.col, b.col);
        let blue = self.blue_rows.get(a.row, b.row) && self.blue_cols.get(a.col, b.col);
        Colors::new(red, blue)
    }

    /// Colour flags of the pair `{a, b}`; empty when not an edge.
    #[inline]
    pub fn colors(&self, a: Cell, b: Cell) -> Colors {
        match &self.dense {
            Some(d) => {
                let (x, y) = (a.index(self.side), b.index(self.side));
                Colors::new(d.red.get(x, y), d.blue.get(x, y))
            }
            None => self.factor_colors(a, b),
        }
    }

    pub fn has_edge(&self, a: Cell, b: Cell) -> bool {
        !self.colors(a, b).is_empty()
    }

    /// Rows `k` for which some red pair between row `i` and row `k` can exist.
    pub(crate) fn red_row_partners(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.red_rows.row_ones(i)
    }

    /// Columns `l` for which some blue pair between column `j` and `l` can exist.
    pub(crate) fn blue_col_partners(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.blue_cols.row_ones(j)
    }

    /// Flag and edge totals, from the factors in `O(N^2)`.
    pub fn counts(&self) -> ProductCounts {
        let rr = self.red_rows.count() as u64;
        let rc = self.red_cols.count() as u64;
        let br = self.blue_rows.count() as u64;
        let bc = self.blue_cols.count() as u64;
        let both_rows = and_count(&self.red_rows, &self.blue_rows);
        let both_cols = and_count(&self.red_cols, &self.blue_cols);
        // ordered cell pairs, halved; red rows and blue cols are irreflexive
        let red_flags = rr * rc / 2;
        let blue_flags = br * bc / 2;
        let dual = both_rows * both_cols / 2;
        ProductCounts {
            red_flags,
            blue_flags,
            dual,
            edges: red_flags + blue_flags - dual,
        }
    }

    /// Underlying simple graph on all `N^2` cells (row-major labels).
    pub fn underlying_graph(&self) -> Graph {
        let cells = self.cells();
        let mut g = Graph::empty(cells);
        for a in 0..cells {
            let ca = Cell::from_index(a, self.side);
            for k in self.red_row_partners(ca.row) {
                for l in 0..self.side {
                    let cb = Cell::new(k, l);
                    if self.red_cols.get(ca.col, l) {
                        g.add_edge(a, cb.index(self.side));
                    }
                }
            }
            for l in self.blue_col_partners(ca.col) {
                for k in 0..self.side {
                    if self.blue_rows.get(ca.row, k) {
                        g.add_edge(a, Cell::new(k, l).index(self.side));
                    }
                }
            }
        }
        g
    }

    /// Every edge as `(a, b, colors)` with `a < b` in row-major order.
    pub fn colored_edges(&self) -> Vec<(Cell, Cell, Colors)> {
        let g = self.underlying_graph();
        g.edges()
            .map(|(a, b)| {
                let (ca, cb) = (
                    Cell::from_index(a, self.side),
                    Cell::from_index(b, self.side),
                );
                (ca, cb, self.colors(ca, cb))
            })
            .collect()
    }
}

fn and_count(a: &BitMatrix, b: &BitMatrix) -> u64 {
    (0..a.side())
        .map(|i| crate::bits::intersection_count(a.row(i), b.row(i)) as u64)
        .sum()
}

fn check_pair(gr: &BaseGraph, gb: &BaseGraph) -> Result<()> {
    if gr.side() != Side::Red || gb.side() != Side::Blue {
        return Err(Error::WrongSide);
    }
    if gr.order() != gb.order() {
        return Err(Error::OrderMismatch {
            red: gr.order(),
            blue: gb.order(),
        });
    }
    Ok(())
}

fn adjacency_matrix(b: &BaseGraph) -> BitMatrix {
    b.graph().adjacency().clone()
}

/// `G_R * G_B` with red/blue flags, materialised up to [`DEFAULT_DENSE_CAP`] cells.
pub fn conormal_product(gr: &BaseGraph, gb: &BaseGraph) -> Result<ColoredProductGraph> {
    conormal_product_with_cap(gr, gb, DEFAULT_DENSE_CAP)
}

pub fn conormal_product_with_cap(
    gr: &BaseGraph,
    gb: &BaseGraph,
    dense_cap: usize,
) -> Result<ColoredProductGraph> {
    check_pair(gr, gb)?;
    let n = gr.order();
    Ok(ColoredProductGraph::from_factors(
        n,
        adjacency_matrix(gr),
        BitMatrix::full(n),
        BitMatrix::full(n),
        adjacency_matrix(gb),
        dense_cap,
    ))
}

/// Removes red flags inside `X⁺_{r_i}` and `X_{b_i}` boxes and blue flags inside
/// `X_{r_i}` and `X⁺_{b_i}` boxes. An edge survives while it keeps a flag.
///
/// The boxes are never materialised: a pair of cells lies in some `X_{r_i}`
/// iff its rows share a neighbour in `G_R` (or coincide and have a neighbour),
/// and in some `X⁺_{r_i}` iff they share a neighbour below both.
pub fn apply_deletion_rule(
    g1: &ColoredProductGraph,
    gr: &BaseGraph,
    gb: &BaseGraph,
) -> Result<ColoredProductGraph> {
    check_pair(gr, gb)?;
    if gr.order() != g1.side {
        return Err(Error::OrderMismatch {
            red: gr.order(),
            blue: g1.side,
        });
    }
    let r_common = gr.common_neighbor_matrix();
    let r_lower = gr.common_lower_neighbor_matrix();
    let b_common = gb.common_neighbor_matrix();
    let b_lower = gb.common_lower_neighbor_matrix();

    let minus = |a: &BitMatrix, b: &BitMatrix| {
        let mut out = a.clone();
        for i in 0..a.side() {
            for (o, w) in out.row_mut(i).iter_mut().zip(b.row(i)) {
                *o &= !*w;
            }
        }
        out
    };
    let cap = if g1.is_dense() { usize::MAX } else { 0 };
    Ok(ColoredProductGraph::from_factors(
        g1.side,
        minus(&g1.red_rows, &r_lower),
        minus(&g1.red_cols, &b_common),
        minus(&g1.blue_rows, &r_common),
        minus(&g1.blue_cols, &b_lower),
        cap,
    ))
}
