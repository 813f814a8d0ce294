//! Experiment harness around `parsub-core`: JSON experiment specs, instance
//! construction with sanity probes, a brute-force optimum for small ground
//! sets, per-run invariant verification, and a deterministic CSV runner.

pub mod brute;
pub mod builder;
pub mod runner;
pub mod spec;
pub mod verify;
