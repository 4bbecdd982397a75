//! Command-line front end for `moc-core`: matrix files in, report JSON (or
//! CSV derived from it) out.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 usage, 3 invalid input or
//! parse error, 4 capacity exceeded, 5 eigensolver convergence, 6
//! classification (matrix not normal/hermitian/unitary), 7 I/O.

pub mod args;
pub mod batch;
pub mod complex;
pub mod error;
pub mod export;
pub mod report;
pub mod run;

pub use args::Cli;
pub use run::execute;
