//! Command implementations and report rendering behind the `peakgf` binary.

pub mod commands;
pub mod report;
