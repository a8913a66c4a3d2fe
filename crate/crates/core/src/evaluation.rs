//! Exact-match scoring of prediction files and multi-seed aggregation.
//!
//! Prediction files are tab-separated `index<TAB>prediction` lines. Lines
//! starting with `#` are comments; `# key: value` comments set the labels
//! `model`, `seed` and `entropy`.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::datagen::Sample;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Coverage(CoverageError),
    #[error("no accuracies for entropy level {entropy}")]
    EmptyGroup { entropy: f64 },
}

/// Indices that keep a prediction set from covering the gold set exactly once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageError {
    pub missing: Vec<usize>,
    pub duplicates: Vec<usize>,
    pub out_of_range: Vec<usize>,
}

fn list(f: &mut fmt::Formatter<'_>, label: &str, xs: &[usize]) -> fmt::Result {
    const SHOWN: usize = 10;
    if xs.is_empty() {
        return Ok(());
    }
    write!(f, " {} {} [", xs.len(), label)?;
    for (i, x) in xs.iter().take(SHOWN).enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    if xs.len() > SHOWN {
        f.write_str(", ...")?;
    }
    f.write_str("]")
}

impl fmt::Display for CoverageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("predictions do not cover the gold set:")?;
        list(f, "missing", &self.missing)?;
        list(f, "duplicated", &self.duplicates)?;
        list(f, "out of range", &self.out_of_range)
    }
}

/// Model outputs keyed by gold sample index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionSet {
    pub entries: Vec<(usize, String)>,
    pub model: Option<String>,
    pub seed: Option<String>,
    pub entropy: Option<f64>,
}

impl PredictionSet {
    /// One entry per output, indexed by position.
    pub fn from_outputs<I, S>(outputs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            entries: outputs.into_iter().map(Into::into).enumerate().collect(),
            ..Default::default()
        }
    }

    pub fn with_labels(mut self, model: &str, seed: &str, entropy: f64) -> Self {
        self.model = Some(model.to_string());
        self.seed = Some(seed.to_string());
        self.entropy = Some(entropy);
        self
    }

    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut set = PredictionSet::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let malformed = |message: String| EvalError::Malformed {
                line: line_no,
                message,
            };
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    let value = value.trim();
                    match key.trim() {
                        "model" => set.model = Some(value.to_string()),
                        "seed" => set.seed = Some(value.to_string()),
                        "entropy" => {
                            set.entropy = Some(value.parse().map_err(|_| {
                                malformed(format!("bad entropy label {value:?}"))
                            })?)
                        }
                        _ => {}
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (index, prediction) = line
                .split_once('\t')
                .ok_or_else(|| malformed("expected index<TAB>prediction".into()))?;
            let index = index
                .trim()
                .parse()
                .map_err(|_| malformed(format!("bad index {index:?}")))?;
            set.entries.push((index, prediction.to_string()));
        }
        Ok(set)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(m) = &self.model {
            writeln!(out, "# model: {m}").unwrap();
        }
        if let Some(s) = &self.seed {
            writeln!(out, "# seed: {s}").unwrap();
        }
        if let Some(h) = self.entropy {
            writeln!(out, "# entropy: {h}").unwrap();
        }
        for (i, p) in &self.entries {
            writeln!(out, "{i}\t{p}").unwrap();
        }
        out
    }
}

/// Fraction of gold samples whose predicted token sequence equals the gold
/// output exactly. Whitespace differences are ignored.
pub fn score(gold: &[Sample], pred: &PredictionSet) -> Result<f64, EvalError> {
    let mut slots: Vec<Option<&str>> = vec![None; gold.len()];
    let mut err = CoverageError::default();
    for (index, prediction) in &pred.entries {
        match slots.get_mut(*index) {
            None => err.out_of_range.push(*index),
            Some(Some(_)) => err.duplicates.push(*index),
            Some(slot) => *slot = Some(prediction),
        }
    }
    err.missing = slots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(i, _)| i)
        .collect();
    if err != CoverageError::default() {
        err.duplicates.sort_unstable();
        err.duplicates.dedup();
        err.out_of_range.sort_unstable();
        return Err(EvalError::Coverage(err));
    }
    if gold.is_empty() {
        return Ok(0.0);
    }
    let correct = gold
        .iter()
        .zip(&slots)
        .filter(|(g, p)| {
            p.is_some_and(|p| p.split_whitespace().eq(g.output.split_whitespace()))
        })
        .count();
    Ok(correct as f64 / gold.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub entropy: f64,
    pub accuracy: f64,
    /// Population standard deviation over seeds.
    pub std: f64,
    pub n_seeds: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<ReportRow>,
}

/// Mean and population standard deviation per entropy level, rows sorted by
/// entropy.
pub fn aggregate<I>(groups: I) -> Result<EvalReport, EvalError>
where
    I: IntoIterator<Item = (f64, Vec<f64>)>,
{
    let mut rows = Vec::new();
    for (entropy, accs) in groups {
        if accs.is_empty() {
            return Err(EvalError::EmptyGroup { entropy });
        }
        let n = accs.len() as f64;
        let lo = accs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = accs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = (accs.iter().sum::<f64>() / n).clamp(lo, hi);
        let var = accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
        let all_equal = accs.iter().all(|&a| a == accs[0]);
        rows.push(ReportRow {
            entropy,
            accuracy: if all_equal { accs[0] } else { mean },
            std: if all_equal { 0.0 } else { var.sqrt() },
            n_seeds: accs.len(),
        });
    }
    rows.sort_by(|a, b| a.entropy.total_cmp(&b.entropy));
    Ok(EvalReport { rows })
}

/// Groups `(entropy, accuracy)` pairs by entropy level. Levels closer than
/// 1e-9 are merged; groups come out in ascending entropy order.
pub fn group_by_entropy(pairs: &[(f64, f64)]) -> Vec<(f64, Vec<f64>)> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for (h, acc) in sorted {
        match groups.last_mut() {
            Some((g, accs)) if (h - *g).abs() <= 1e-9 => accs.push(acc),
            _ => groups.push((h, vec![acc])),
        }
    }
    groups
}

pub const TABLE_HEADER: &str = "entropies accuracy std";

/// Plot-ready table: header line then one `entropy accuracy std` row per
/// level with six decimals. No trailing newline.
pub fn emit_table(report: &EvalReport) -> String {
    let mut rows: Vec<&ReportRow> = report.rows.iter().collect();
    rows.sort_by(|a, b| a.entropy.total_cmp(&b.entropy));
    let mut out = String::from(TABLE_HEADER);
    for r in rows {
        write!(out, "\n{:.6} {:.6} {:.6}", r.entropy, r.accuracy, r.std).unwrap();
    }
    out
}
