//! Dataset files: JSON-lines samples, the metadata sidecar and atomic writes.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::datagen::{Dataset, ExperimentConfig, Schedule, Slot};
use crate::distributions::VerbDistribution;
use crate::grammar::{Conjunction, Verb};

pub const TRAIN_FILE: &str = "train.jsonl";
pub const TEST_FILE: &str = "test.jsonl";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl FileError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        FileError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub fn write_jsonl<W: Write>(samples: &[crate::datagen::Sample], mut w: W) -> io::Result<()> {
    for s in samples {
        serde_json::to_writer(&mut w, s)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn to_jsonl(samples: &[crate::datagen::Sample]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(samples.len() * 128);
    write_jsonl(samples, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

/// Reads samples; blank lines are skipped, line numbers are one-based.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<crate::datagen::Sample>, FileError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| FileError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let sample = serde_json::from_str(&line).map_err(|e| FileError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(sample);
    }
    Ok(out)
}

pub fn read_jsonl_file(path: &Path) -> Result<Vec<crate::datagen::Sample>, FileError> {
    let file = fs::File::open(path).map_err(|e| FileError::io(path, e))?;
    read_jsonl(io::BufReader::new(file))
}

/// Writes `contents` next to `path` under a temporary name, then renames it
/// into place so readers never observe a partial file.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<(), FileError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(FileError::io(path, e));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ScheduleInfo {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Verb>>,
    pub distribution: VerbDistribution,
}

impl From<&Schedule> for ScheduleInfo {
    fn from(s: &Schedule) -> Self {
        match s {
            Schedule::Mixture(m) => ScheduleInfo {
                kind: "mixture",
                lambda: Some(m.lambda()),
                support: None,
                distribution: m.distribution(),
            },
            Schedule::Support(sup) => ScheduleInfo {
                kind: "support",
                lambda: None,
                support: Some(sup.support().to_vec()),
                distribution: sup.distribution(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SlotEntropies {
    pub e1: Option<f64>,
    pub e2: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SplitSummary {
    pub samples: usize,
    pub and_samples: usize,
    pub after_samples: usize,
    /// Schedule-slot entropy pooled over conjunctions.
    pub realized_entropy: f64,
    pub and: SlotEntropies,
    pub after: SlotEntropies,
}

impl From<&Dataset> for SplitSummary {
    fn from(d: &Dataset) -> Self {
        let count = |c| d.samples.iter().filter(|s| s.conj == c).count();
        let slots = |c| SlotEntropies {
            e1: crate::datagen::empirical_entropy(&d.samples, Slot::E1, c).ok(),
            e2: crate::datagen::empirical_entropy(&d.samples, Slot::E2, c).ok(),
        };
        SplitSummary {
            samples: d.len(),
            and_samples: count(Conjunction::And),
            after_samples: count(Conjunction::After),
            realized_entropy: d.realized_entropy,
            and: slots(Conjunction::And),
            after: slots(Conjunction::After),
        }
    }
}

/// Contents of `meta.json`.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub toolkit_version: &'static str,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub schedule: ScheduleInfo,
    pub train: SplitSummary,
    pub test: SplitSummary,
}

impl Metadata {
    pub fn new(schedule: &Schedule, train: &Dataset, test: &Dataset) -> Self {
        Metadata {
            toolkit_version: env!("CARGO_PKG_VERSION"),
            config: train.config.clone(),
            seed: train.config.seed,
            schedule: schedule.into(),
            train: train.into(),
            test: test.into(),
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut buf = serde_json::to_vec_pretty(self).expect("metadata is always serializable");
        buf.push(b'\n');
        buf
    }
}

/// Writes `train.jsonl`, `test.jsonl` and `meta.json` into `dir`, creating it
/// if needed.
pub fn write_dataset_dir(dir: &Path, schedule: &Schedule, train: &Dataset, test: &Dataset) -> Result<(), FileError> {
    fs::create_dir_all(dir).map_err(|e| FileError::io(dir, e))?;
    atomic_write(&dir.join(TRAIN_FILE), &to_jsonl(&train.samples))?;
    atomic_write(&dir.join(TEST_FILE), &to_jsonl(&test.samples))?;
    atomic_write(&dir.join(META_FILE), &Metadata::new(schedule, train, test).to_json())
}
