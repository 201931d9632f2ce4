//! Command-line front end for `gdl-core`: JSON problem documents in, JSON results out.

pub mod commands;
pub mod document;
pub mod error;
pub mod spectrogram;

pub use commands::{run, Command, Options};
pub use document::{parse_problem, ProblemDocument, ResultDocument};
pub use error::CliError;
