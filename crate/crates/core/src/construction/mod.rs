//! The blow-up overlay: two random base graphs, their colored co-normal
//! product, the triangle-killing deletion rule, and a random injection of the
//! `n` final vertices into the grid.

mod base;
mod build;
mod placement;
mod product;

pub use base::{sample_base_graphs, BaseGraph, Side};
pub use build::{build, induce_final_graph, BuildStats, Instance, PlacedGraph, Provenance};
pub use placement::{sample_injection, sample_injection_with, Placement};
pub use product::{
    apply_deletion_rule, conormal_product, conormal_product_with_cap, Cell, ColoredProductGraph,
    ProductCounts, DEFAULT_DENSE_CAP,
};
