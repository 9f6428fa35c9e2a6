//! Verification suites, worked examples and extremal search.

pub mod closed_forms;
pub mod report;
pub mod sampler;
pub mod search;
pub mod suites;

pub use report::{Assertion, SuiteReport};
pub use sampler::{PlaneBox, SamplerMode, TripleSampler};
pub use search::{extremal_ratio, Objective, RatioSearchReport, Region};
pub use suites::{run_suite, run_suite_with, SuiteId, Tolerances};
