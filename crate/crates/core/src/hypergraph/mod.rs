//! The 3-uniform analogue: random base 3-graphs, their product on the grid
//! (rows distinct and columns distinct), a random injection, and a reduction
//! that leaves no 4-set spanning three triples. A 3-graph has no such 4-set iff
//! every vertex link is triangle-free.

mod build;
mod reduce;
mod triples;

pub use build::{
    build_hyper, hyper_product, induce_hyper, induce_product_on, inject_hyper, random_3graph,
    sample_base_3graphs, triple_from_index, HyperInstance, PlacedTriples,
};
pub use reduce::{s4_reduction, s4_reduction_with_order, LinkIndex, ReductionStats, S4Reduction};
pub use triples::{
    compact_link, extract_link, link_edge_lists, normalize, s4_free_brute_force, verify_s4_free,
    LinkGraph, Triple, TripleSystem,
};
