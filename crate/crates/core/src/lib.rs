//! Twin-width solvers for PACE 2023 style instances.
//!
//! [`exact::solve_exact`] computes the twin-width with a layered search over
//! vertex partitions; [`solver::solve_heuristic`] trades optimality for
//! speed on large graphs. [`reference`] holds the independent verifier and a
//! brute-force oracle used to check both.

pub mod budget;
pub mod exact;
pub mod generators;
pub mod heuristic;
pub mod pace_io;
pub mod preprocess;
pub mod reference;
pub mod sequence;
pub mod solver;
pub mod trigraph;

pub use budget::Budget;
pub use exact::{solve_exact, ExactConfig, Stage};
pub use pace_io::{parse_instance, parse_sequence, render_sequence, Instance};
pub use reference::{oracle_twinwidth, verify_sequence, WidthReport};
pub use sequence::ContractionSequence;
pub use solver::{solve_heuristic, SolveResult};
pub use trigraph::{ContractionPair, EdgeColor, Trigraph, VertexId};
