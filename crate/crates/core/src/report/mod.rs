//! Match runs: configuration, the comparison itself and its serialized forms.

pub mod config;
pub mod emit;
pub mod float;
pub mod run;

pub use config::RunConfig;
pub use emit::emit_report;
pub use float::RFloat;
pub use run::{run_match, MatchReport, Verdict};
