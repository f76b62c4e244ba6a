//! Library side of the `streamcut` command: bench spec parsing, the run
//! matrix executor and assignment file handling.

pub mod assignment;
pub mod bench;
pub mod spec;

pub use assignment::{eval_assignment, read_assignment, write_assignment, AssignmentError};
pub use bench::{build_graph, run_bench, write_csv, RunRecord};
pub use spec::{BenchSpec, GraphSource, SpecError};
