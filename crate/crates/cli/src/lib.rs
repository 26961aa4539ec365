//! Knowledge-base files and the `cohere` command line.

pub mod app;
pub mod kb;
