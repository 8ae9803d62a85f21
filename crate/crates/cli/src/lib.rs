//! Command-line front end for the toric K-stability toolkit: JSON document
//! formats, the built-in polytope catalog and report assembly.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod format;
pub mod report;

pub use error::CliError;
