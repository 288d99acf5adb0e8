//! Plumbing shared by the `comrand` binary and its test suites: default
//! sweep grids, the channel matrix file format, JSON run configs, and the
//! table writer that gives every emitted file the same deterministic shape.

pub mod config;
pub mod grids;
pub mod matrix;
pub mod numfmt;
pub mod output;
