//! Synthetic benchmark: ground truth and measurement sampling, alignment of
//! estimates to the truth, error metrics, and the repeat/sweep runner.

mod align;
mod experiment;
mod metrics;
mod noise;
pub mod rng;

pub use align::{align, alignment_objective};
pub use experiment::{run_experiment, spearman, summarize, ExperimentConfig, ExperimentRow, RowStatus, SummaryRow};
pub use metrics::{evaluate, ErrorReport};
pub use noise::{make_problem, sample_ground_truth, sample_perturbation, sample_pose, Corruption, NoiseSpec};
