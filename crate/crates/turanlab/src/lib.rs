//! Parallel drivers, report formats and the command-line front end for
//! [`turanlab_core`].

pub mod cli;
pub mod config;
pub mod exec;
pub mod graphs;
pub mod report;

pub use turanlab_core as core;
