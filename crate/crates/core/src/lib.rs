//! Entropy-controlled systematic-generalization benchmarks over a modified
//! SCAN command language.
//!
//! The pieces, bottom up:
//!
//! - [`grammar`]: vocabulary, enumeration and parsing of commands
//! - [`semantics`]: command → action sequence interpretation
//! - [`distributions`]: verb distributions, entropy and the two schedules
//! - [`datagen`]: train/test construction with exact verb quotas
//! - [`io`]: JSON-lines dataset files and metadata
//! - [`evaluation`]: exact-match scoring and multi-seed tables
//! - [`cli`]: the `scan-entropy` command-line tool

pub mod cli;
pub mod datagen;
pub mod distributions;
pub mod evaluation;
pub mod grammar;
pub mod io;
pub mod semantics;

pub use datagen::{build_test, build_train, Dataset, ExperimentConfig, Sample};
pub use distributions::{lambda_for_entropy, VerbDistribution};
pub use grammar::{parse_command, Command, Conjunction, EmbeddedSentence, Verb};
pub use semantics::{interpret, oracle_interpret, ActionSequence};
