//! Command-line front end of `dqsync`: problem files, solving, evaluation
//! and experiment sweeps.

mod app;
pub mod format;
pub mod output;
pub mod sweep;

pub use app::{run, summary_path, Exit};
