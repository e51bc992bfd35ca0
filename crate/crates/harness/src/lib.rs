//! Experiment harness around `newq-core`: reproduces the eigenvector
//! tables, runs saddle-avoidance sweeps and the Poisson proxy, and emits
//! traces as CSV and summaries as JSON. All randomness is seeded; with a
//! fixed seed and config every output is byte-identical across runs.

pub mod config;
pub mod poisson;
pub mod report;
pub mod runner;
pub mod sweep;
pub mod table1;
