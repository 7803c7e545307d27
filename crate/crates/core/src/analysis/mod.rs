//! Certification and measurement: triangles, independence number, the
//! concentration statistics of a built instance, and closed/open pairs of
//! `k`-sets.

mod concentration;
mod independence;
mod sets;
mod triangles;

pub use concentration::{
    concentration_report, concentration_report_with, BoundCheck, ConcentrationReport, Tolerances,
};
pub use independence::{
    independence_brute_force, independence_exact, independence_greedy, IndependenceResult, Method,
    DEFAULT_NODE_BUDGET,
};
pub use sets::{
    adversarial_sets, binom2, classify_sets, edges_are_open_plus, f_function, min_term_branches,
    random_k_set, HugeSums, SetClassification, SetContext, SizeClass, CLASSES,
};
pub use triangles::{count_triangles, count_triangles_exhaustive, find_triangle};
