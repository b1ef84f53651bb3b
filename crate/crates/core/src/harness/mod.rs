//! File formats, generators, traces and the subgradient baseline.

mod baseline;
mod dimacs;
mod generate;
mod problem;
mod trace;

pub use baseline::{projected_subgradient, BaselineResult};
pub use dimacs::parse_dimacs_cut;
pub use generate::{
    generate_cut_graph, generate_cut_instance, generate_cut_problem, generate_modular, SplitMix64,
};
pub use problem::{parse_point, parse_problem, parse_subset, serialize_problem};
pub use trace::{read_trace, write_trace, TRACE_HEADER};
