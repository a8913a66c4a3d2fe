//! `scan-entropy` command-line interface.
//!
//! Subcommands:
//!
//! - `generate`: one entropy level into `train.jsonl`, `test.jsonl`, `meta.json`
//! - `inspect`: integrity and entropy report for a dataset file
//! - `schedule`: mixing weight and distribution for a target entropy
//! - `evaluate`: score prediction files and write an accuracy table
//! - `suite`: every grid cell under `<out>/<experiment>/H<h>/N<n>/`

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::datagen::{
    build_test, build_train, inspect, Dataset, Experiment, ExperimentConfig, Slot, Split,
    DEFAULT_RESTRICTED_VERB, DEFAULT_TRAIN_SIZE,
};
use crate::distributions::{
    default_horizontal_grid, default_vertical_grid, support_size_for_entropy, MixtureSchedule,
};
use crate::evaluation::{aggregate, emit_table, group_by_entropy, score, PredictionSet};
use crate::grammar::{Conjunction, Verb};
use crate::io::{atomic_write, read_jsonl_file, write_dataset_dir, META_FILE};

#[derive(Debug, Parser)]
#[command(name = "scan-entropy", version, about = "Entropy-controlled SCAN benchmark toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Generate one train/test pair.
    Generate(GenerateArgs),
    /// Report entropies and integrity checks for a dataset file.
    Inspect(InspectArgs),
    /// Print the mixing weight and verb distribution for an entropy.
    Schedule(ScheduleArgs),
    /// Score prediction files against a gold dataset.
    Evaluate(EvaluateArgs),
    /// Generate every cell of an experiment grid.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    Vertical,
    Horizontal,
    SampleSizeControl,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Vertical => Experiment::Vertical,
            ExperimentArg::Horizontal => Experiment::Horizontal,
            ExperimentArg::SampleSizeControl => Experiment::SampleSizeControl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Train,
    Test,
}

fn parse_verb(s: &str) -> Result<Verb, String> {
    Verb::from_token(s).ok_or_else(|| {
        let names: Vec<_> = Verb::ALL.iter().map(|v| v.token()).collect();
        format!("unknown verb {s:?}, expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub experiment: ExperimentArg,
    /// Target entropy in bits.
    #[arg(long, allow_negative_numbers = true)]
    pub entropy: Option<f64>,
    /// Support size for the horizontal experiment (entropy log2 of it).
    #[arg(long)]
    pub support: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TRAIN_SIZE)]
    pub train_size: usize,
    #[arg(long, value_parser = parse_verb, default_value = "jump")]
    pub v1: Verb,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Restricted verb; defaults to the one in a sibling meta.json, else jump.
    #[arg(long, value_parser = parse_verb)]
    pub v1: Option<Verb>,
    /// Defaults to test for files named test*, train otherwise.
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub entropy: f64,
    #[arg(long, value_parser = parse_verb, default_value = "jump")]
    pub v1: Verb,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    pub pred: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Entropy label for files that carry none in a header or an H<value>
    /// directory.
    #[arg(long)]
    pub entropy: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, value_enum)]
    pub experiment: ExperimentArg,
    /// Comma-separated entropies; defaults to the experiment's standard grid.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Comma-separated train sizes for sampled experiments.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_verb, default_value = "jump")]
    pub v1: Verb,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    match cli.command {
        CliCommand::Generate(args) => cmd_generate(&args, out),
        CliCommand::Inspect(args) => cmd_inspect(&args, out),
        CliCommand::Schedule(args) => cmd_schedule(&args, out),
        CliCommand::Evaluate(args) => cmd_evaluate(&args, out),
        CliCommand::Suite(args) => cmd_suite(&args, out),
    }
}

fn generate_config(args: &GenerateArgs) -> Result<ExperimentConfig> {
    let experiment: Experiment = args.experiment.into();
    let entropy = match (experiment, args.entropy, args.support) {
        (_, Some(_), Some(_)) => bail!("pass either --entropy or --support, not both"),
        (Experiment::Horizontal, None, Some(i)) => {
            if !(1..=Verb::COUNT).contains(&i) {
                bail!("--support must be between 1 and {}", Verb::COUNT);
            }
            (i as f64).log2()
        }
        (_, Some(h), None) => h,
        (Experiment::Horizontal, None, None) => bail!("--entropy or --support is required"),
        (_, None, Some(_)) => bail!("--support only applies to the horizontal experiment"),
        (_, None, None) => bail!("--entropy is required"),
    };
    Ok(ExperimentConfig {
        experiment,
        entropy_target: entropy,
        restricted_verb: args.v1,
        train_size: args.train_size,
        seed: args.seed,
    })
}

pub fn cmd_generate<W: Write>(args: &GenerateArgs, out: &mut W) -> Result<()> {
    let config = generate_config(args)?;
    let schedule = config.schedule()?;
    let train = build_train(&config)?;
    let test = build_test(&config)?;
    write_dataset_dir(&args.out, &schedule, &train, &test)?;
    writeln!(
        out,
        "wrote {} train and {} test samples to {}",
        train.len(),
        test.len(),
        args.out.display()
    )?;
    Ok(())
}

fn restricted_verb_from_meta(data: &Path) -> Option<Verb> {
    let meta = data.parent()?.join(META_FILE);
    let value: serde_json::Value = serde_json::from_slice(&fs::read(meta).ok()?).ok()?;
    Verb::from_token(value["config"]["restricted_verb"].as_str()?)
}

fn fmt_entropy(h: Option<f64>) -> String {
    h.map_or_else(|| "n/a".to_string(), |h| format!("{h:.6}"))
}

pub fn cmd_inspect<W: Write>(args: &InspectArgs, out: &mut W) -> Result<()> {
    let samples = read_jsonl_file(&args.data).with_context(|| format!("reading {}", args.data.display()))?;
    let split = match args.split {
        Some(SplitArg::Train) => Split::Train,
        Some(SplitArg::Test) => Split::Test,
        None => {
            let stem = args.data.file_stem().and_then(|s| s.to_str()).unwrap_or("");
            if stem.starts_with("test") {
                Split::Test
            } else {
                Split::Train
            }
        }
    };
    let v1 = args
        .v1
        .or_else(|| restricted_verb_from_meta(&args.data))
        .unwrap_or(DEFAULT_RESTRICTED_VERB);
    let report = inspect(&samples, split, v1);

    writeln!(out, "file: {}", args.data.display())?;
    writeln!(out, "split: {}", split.name())?;
    writeln!(out, "restricted verb: {v1}")?;
    writeln!(out, "samples: {}", report.samples)?;
    writeln!(out, "and samples: {}", report.and_samples)?;
    writeln!(out, "after samples: {}", report.after_samples)?;
    for conj in Conjunction::ALL {
        for slot in [Slot::E1, Slot::E2] {
            writeln!(
                out,
                "entropy {}|{}: {}",
                slot.name(),
                conj.token(),
                fmt_entropy(report.entropy(slot, conj))
            )?;
        }
    }
    writeln!(out, "constraint violations: {}", report.constraint_violations)?;
    writeln!(out, "output mismatches: {}", report.output_mismatches)?;
    writeln!(out, "invalid inputs: {}", report.invalid_inputs)?;
    writeln!(out, "duplicates: {}", report.duplicates)?;
    Ok(())
}

pub fn cmd_schedule<W: Write>(args: &ScheduleArgs, out: &mut W) -> Result<()> {
    let schedule = MixtureSchedule::for_entropy(args.entropy, args.v1)?;
    let dist = schedule.distribution();
    writeln!(out, "lambda: {}", schedule.lambda())?;
    writeln!(out, "restricted verb: {}", args.v1)?;
    writeln!(out, "entropy: {}", dist.entropy())?;
    for v in Verb::ALL {
        writeln!(out, "{} {}", v.token(), dist.prob(v))?;
    }
    Ok(())
}

/// Entropy encoded in the nearest `H<value>` path component.
fn entropy_from_path(path: &Path) -> Option<f64> {
    path.ancestors()
        .filter_map(|p| p.file_name()?.to_str())
        .find_map(|name| name.strip_prefix('H')?.parse().ok())
}

pub fn cmd_evaluate<W: Write>(args: &EvaluateArgs, out: &mut W) -> Result<()> {
    let gold = read_jsonl_file(&args.gold).with_context(|| format!("reading {}", args.gold.display()))?;
    let mut scored = Vec::with_capacity(args.pred.len());
    let mut failures = Vec::new();
    for path in &args.pred {
        let result = (|| -> Result<(f64, f64)> {
            let text = fs::read_to_string(path)?;
            let pred = PredictionSet::parse(&text)?;
            let entropy = pred
                .entropy
                .or_else(|| entropy_from_path(path))
                .or(args.entropy)
                .ok_or_else(|| anyhow!("no entropy label"))?;
            Ok((entropy, score(&gold, &pred)?))
        })();
        match result {
            Ok((entropy, accuracy)) => {
                writeln!(out, "{}: entropy {entropy} accuracy {accuracy:.6}", path.display())?;
                scored.push((entropy, accuracy));
            }
            Err(e) => failures.push(format!("{}: {e:#}", path.display())),
        }
    }
    if !failures.is_empty() {
        bail!("{} prediction file(s) rejected:\n{}", failures.len(), failures.join("\n"));
    }
    let report = aggregate(group_by_entropy(&scored))?;
    let mut table = emit_table(&report);
    table.push('\n');
    atomic_write(&args.out, table.as_bytes())?;
    writeln!(out, "wrote {} rows to {}", report.rows.len(), args.out.display())?;
    Ok(())
}

/// Directory of one suite cell relative to the suite root.
pub fn cell_dir(root: &Path, experiment: Experiment, entropy: f64, train_len: usize) -> PathBuf {
    root.join(experiment.name())
        .join(format!("H{entropy:.6}"))
        .join(format!("N{train_len}"))
}

pub fn cmd_suite<W: Write>(args: &SuiteArgs, out: &mut W) -> Result<()> {
    let experiment: Experiment = args.experiment.into();
    let grid = match (&args.grid, experiment) {
        (Some(g), _) => g.clone(),
        (None, Experiment::Horizontal) => default_horizontal_grid(),
        (None, _) => default_vertical_grid(),
    };
    let sizes = match (&args.sizes, experiment) {
        (Some(_), Experiment::Horizontal) => bail!("--sizes does not apply to the horizontal experiment"),
        (Some(s), _) => s.clone(),
        (None, Experiment::SampleSizeControl) => vec![3000, 4000, 6000],
        (None, _) => vec![DEFAULT_TRAIN_SIZE],
    };
    if grid.is_empty() || sizes.is_empty() {
        bail!("grid and sizes must be non-empty");
    }
    let mut seen = HashSet::new();
    for h in &grid {
        if !seen.insert(format!("{h:.6}")) {
            bail!("grid value {h} appears twice");
        }
        if experiment == Experiment::Horizontal && support_size_for_entropy(*h).is_none() {
            bail!("horizontal grid value {h} is not log2 of a support size in 1..=8");
        }
    }
    let mut unique_sizes = HashSet::new();
    if let Some(n) = sizes.iter().find(|n| !unique_sizes.insert(**n)) {
        bail!("size {n} appears twice");
    }

    // Everything is built before anything is written.
    let mut cells: Vec<(PathBuf, ExperimentConfig, Dataset)> = Vec::new();
    for &h in &grid {
        let per_level: &[usize] = if experiment == Experiment::Horizontal { &[0] } else { &sizes };
        for &n in per_level {
            let config = ExperimentConfig {
                experiment,
                entropy_target: h,
                restricted_verb: args.v1,
                train_size: n,
                seed: args.seed,
            };
            let train = build_train(&config).with_context(|| format!("cell H={h} N={n}"))?;
            cells.push((cell_dir(&args.out, experiment, h, train.len()), config, train));
        }
    }
    let test = build_test(&cells[0].1)?;
    for (dir, config, train) in &cells {
        let test = Dataset {
            config: config.clone(),
            ..test.clone()
        };
        write_dataset_dir(dir, &config.schedule()?, train, &test)?;
        writeln!(out, "{}: {} train samples", dir.display(), train.len())?;
    }
    Ok(())
}
