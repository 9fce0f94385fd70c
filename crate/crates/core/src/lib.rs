//! Exact bar and cobar complexes for operads, cooperads and their modules.

pub mod acceptance;
pub mod barcobar;
pub mod exactla;
pub mod opalg;
pub mod partition;
pub mod trees;

/// Engine version, part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
