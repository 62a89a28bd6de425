//! Experiment harness: configuration files, training with learning curves,
//! evaluation in every seat, FARL ablation batches, agent files, the
//! terminal play loop and agent inspection.

mod config;
mod eval;
mod experiment;
mod inspect;
mod play;

pub use config::ExperimentConfig;
pub use eval::{evaluate, evaluate_from, mean_sd, play_episode, EvalEntry, RoleStats, ROLE_NAMES};
pub use experiment::{
    eval_rows, evaluate_agent, load_agent, run_ablation, train_agent, write_report_csv, AblationReport, AgentMeta,
    LoadedAgent, ReportRow, RunResult, TrainedAgent, REPORT_HEADER,
};
pub use inspect::inspect_summary;
pub use play::play_interactive;
