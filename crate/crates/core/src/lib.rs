#[cfg(test)]
mod fixtures;
pub mod error;
pub mod graded;
pub mod trees;
pub mod structures;
pub mod transfer;
pub mod mapping;
pub mod functors;
pub mod invariants;
pub mod cli;
