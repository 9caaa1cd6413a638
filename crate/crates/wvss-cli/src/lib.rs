//! Library side of the `wvss` command-line tool: stake ingestion, bandwidth
//! reporting, benchmarking, and the multi-party simulation. The binary in
//! `main.rs` is a thin argument-parsing layer over these.

pub mod bench;
pub mod report;
pub mod sim;
pub mod stakes;
