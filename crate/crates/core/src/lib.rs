//! Grey relational analysis of community question-answering quality features.
//!
//! The crate measures how closely monthly question-quality feature series track
//! a reference pageview series and ranks them by grey relational grade. It is
//! organised as a small pipeline:
//!
//! - [`gra`] — Deng-style grey relational analysis over aligned series
//! - [`features`] — the 15-feature question quality measurement scale
//! - [`pipeline`] — ingestion, cleaning, monthly aggregation, orchestration
//! - [`synth`] — deterministic synthetic corpora with planted couplings
//! - [`report`] — report assembly, rendering and plot data output
//!
//! The `greyrank` binary wraps the pipeline behind `extract`, `analyze`,
//! `synth` and `report` subcommands.

pub mod config;
pub mod features;
pub mod gra;
pub mod pipeline;
pub mod record;
pub mod report;
pub mod stats;
pub mod synth;
pub mod text;

pub use config::PipelineConfig;
pub use gra::{Direction, GraConfig, GradeResult, InfluenceClass, RawSeries};
pub use pipeline::{run_pipeline, run_pipeline_records, PipelineError};
pub use record::QuestionRecord;
pub use report::{GraReport, OutputFormat};
