//! Point generation, CSV point files and the benchmark harness behind the
//! `diam` command-line tool.

pub mod bench;
pub mod error;
pub mod gen;
pub mod io;

pub use bench::{run_bench, BenchCell, BenchOptions, BenchOutput, BenchRecord, BenchSummary};
pub use error::CliError;
pub use gen::{generate, Distribution, GeneratorSpec};
pub use io::{read_points, write_points};
