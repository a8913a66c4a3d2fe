//! Train and test set construction for both entropy schedules.
//!
//! Every command has a *schedule slot* whose verb distribution is controlled
//! and a *uniform slot* that never contains the restricted verb `v1` in
//! training. The two conjunctions mirror each other:
//!
//! | conjunction | schedule slot | uniform slot |
//! |-------------|---------------|--------------|
//! | `and`       | e2            | e1           |
//! | `after`     | e1            | e2           |
//!
//! The test set inverts the uniform slot: it always holds `v1`, while the
//! schedule slot ranges over every verb. Train and test are therefore
//! disjoint by construction.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::distributions::{
    entropy_of_counts, support_size_for_entropy, DistributionError, MixtureSchedule,
    SupportSchedule, VerbDistribution, MAX_ENTROPY,
};
use crate::grammar::{embedded_forms, Command, Conjunction, EmbeddedSentence, Verb};
use crate::semantics::interpret;

/// Paper-scale train budget for the vertical experiment.
pub const DEFAULT_TRAIN_SIZE: usize = 6000;
pub const DEFAULT_RESTRICTED_VERB: Verb = Verb::Jump;

/// Unique commands available to one schedule-slot verb under one conjunction:
/// 21 forms of that verb times 7 × 21 uniform-slot forms.
pub const VERB_CAPACITY: usize =
    EmbeddedSentence::FORMS_PER_VERB * (Verb::COUNT - 1) * EmbeddedSentence::FORMS_PER_VERB;

/// Size of every test set: two conjunctions × 21 forms of `v1` × 168 forms.
pub const TEST_SIZE: usize =
    2 * EmbeddedSentence::FORMS_PER_VERB * Verb::COUNT * EmbeddedSentence::FORMS_PER_VERB;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Vertical,
    Horizontal,
    SampleSizeControl,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Vertical => "vertical",
            Experiment::Horizontal => "horizontal",
            Experiment::SampleSizeControl => "sample-size-control",
        }
    }

    fn is_sampled(self) -> bool {
        !matches!(self, Experiment::Horizontal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    E1,
    E2,
}

impl Slot {
    pub fn name(self) -> &'static str {
        match self {
            Slot::E1 => "e1",
            Slot::E2 => "e2",
        }
    }
}

/// Slot whose verb distribution follows the entropy schedule.
pub fn schedule_slot(conj: Conjunction) -> Slot {
    match conj {
        Conjunction::And => Slot::E2,
        Conjunction::After => Slot::E1,
    }
}

/// Slot that excludes `v1` in training and always holds it at test time.
pub fn uniform_slot(conj: Conjunction) -> Slot {
    match conj {
        Conjunction::And => Slot::E1,
        Conjunction::After => Slot::E2,
    }
}

#[derive(Debug, Error)]
pub enum DatagenError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("train size must be at least 1")]
    EmptyTrainSize,
    #[error("horizontal entropy {0} is not log2 of a support size in 1..=8")]
    NotASupportEntropy(f64),
    #[error("{0} experiments have no sample size to vary")]
    NotSampled(&'static str),
    #[error(
        "capacity exceeded for verb {verb} under {conj:?}: quota {requested}, \
         only {available} unique commands (deficit {})",
        requested - available
    )]
    Capacity {
        conj: Conjunction,
        verb: Verb,
        requested: usize,
        available: usize,
    },
    #[error("no samples with conjunction {0:?}")]
    EmptySlice(Conjunction),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub entropy_target: f64,
    pub restricted_verb: Verb,
    /// Unique training samples; ignored by the horizontal experiment.
    pub train_size: usize,
    pub seed: u64,
}

/// Resolved verb schedule for one entropy level.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Mixture(MixtureSchedule),
    Support(SupportSchedule),
}

impl Schedule {
    pub fn distribution(&self) -> VerbDistribution {
        match self {
            Schedule::Mixture(m) => m.distribution(),
            Schedule::Support(s) => s.distribution(),
        }
    }
}

impl ExperimentConfig {
    pub fn vertical(entropy_target: f64, train_size: usize, restricted_verb: Verb, seed: u64) -> Self {
        Self {
            experiment: Experiment::Vertical,
            entropy_target,
            restricted_verb,
            train_size,
            seed,
        }
    }

    /// Horizontal level with support size `support` (entropy `log2 support`).
    pub fn horizontal(support: usize, restricted_verb: Verb, seed: u64) -> Self {
        Self {
            experiment: Experiment::Horizontal,
            entropy_target: (support as f64).log2(),
            restricted_verb,
            train_size: 0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        self.schedule().map(|_| ())
    }

    pub fn schedule(&self) -> Result<Schedule, DatagenError> {
        if !(0.0..=MAX_ENTROPY).contains(&self.entropy_target) {
            return Err(DistributionError::EntropyOutOfRange(self.entropy_target).into());
        }
        match self.experiment {
            Experiment::Vertical | Experiment::SampleSizeControl => {
                if self.train_size == 0 {
                    return Err(DatagenError::EmptyTrainSize);
                }
                Ok(Schedule::Mixture(MixtureSchedule::for_entropy(
                    self.entropy_target,
                    self.restricted_verb,
                )?))
            }
            Experiment::Horizontal => {
                let size = support_size_for_entropy(self.entropy_target)
                    .ok_or(DatagenError::NotASupportEntropy(self.entropy_target))?;
                Ok(Schedule::Support(SupportSchedule::chain(
                    self.restricted_verb,
                    size,
                )?))
            }
        }
    }
}

/// One `(input, output)` pair with the labels needed for slot statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sample {
    pub input: String,
    pub output: String,
    pub conj: Conjunction,
    pub e1_verb: Verb,
    pub e2_verb: Verb,
}

impl Sample {
    pub fn from_command(c: &Command) -> Self {
        Self {
            input: c.render(),
            output: interpret(c).to_string(),
            conj: c.conj,
            e1_verb: c.e1.verb,
            e2_verb: c.e2.verb,
        }
    }

    pub fn verb(&self, slot: Slot) -> Verb {
        match slot {
            Slot::E1 => self.e1_verb,
            Slot::E2 => self.e2_verb,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub split: Split,
    pub samples: Vec<Sample>,
    pub config: ExperimentConfig,
    /// Entropy of the schedule-slot verbs, pooled over both conjunctions.
    pub realized_entropy: f64,
}

impl Dataset {
    fn new(split: Split, samples: Vec<Sample>, config: ExperimentConfig) -> Self {
        let realized_entropy = schedule_slot_entropy(&samples).unwrap_or(0.0);
        Self {
            split,
            samples,
            config,
            realized_entropy,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn place(conj: Conjunction, schedule: EmbeddedSentence, uniform: EmbeddedSentence) -> Command {
    match conj {
        Conjunction::And => Command::new(uniform, conj, schedule),
        Conjunction::After => Command::new(schedule, conj, uniform),
    }
}

fn other_verbs(v1: Verb) -> Vec<Verb> {
    Verb::ALL.into_iter().filter(|&v| v != v1).collect()
}

/// Independent RNG stream for one `(split, conjunction, verb)` cell.
fn stream(seed: u64, split: Split, conj: Conjunction, verb: Verb) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"scan-entropy/v1");
    hasher.update(seed.to_le_bytes());
    for label in [split.name(), conj.token(), verb.token()] {
        hasher.update((label.len() as u32).to_le_bytes());
        hasher.update(label.as_bytes());
    }
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Integer quotas summing to `total` with `|quota[i] - total * weights[i]| < 1`.
/// Leftover units go to the largest fractional parts, ties to the lower index.
pub fn largest_remainder(total: usize, weights: &[f64]) -> Vec<usize> {
    let exact: Vec<f64> = weights.iter().map(|w| w * total as f64).collect();
    let mut quotas: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        quotas[i] += 1;
    }
    quotas
}

fn sample_conjunction(
    config: &ExperimentConfig,
    dist: &VerbDistribution,
    conj: Conjunction,
    n: usize,
    out: &mut Vec<Sample>,
) -> Result<(), DatagenError> {
    let quotas = largest_remainder(n, dist.probs());
    for verb in Verb::ALL {
        let requested = quotas[verb.index()];
        if requested > VERB_CAPACITY {
            return Err(DatagenError::Capacity {
                conj,
                verb,
                requested,
                available: VERB_CAPACITY,
            });
        }
    }

    let uniform_verbs = other_verbs(config.restricted_verb);
    let k = uniform_verbs.len();
    // The uniform-slot split of each verb quota hands its remainder out
    // round-robin, continuing where the previous verb stopped.
    let mut offset = 0;
    for verb in Verb::ALL {
        let quota = quotas[verb.index()];
        if quota == 0 {
            continue;
        }
        let mut rng = stream(config.seed, Split::Train, conj, verb);
        let (base, rem) = (quota / k, quota % k);
        for (j, &partner) in uniform_verbs.iter().enumerate() {
            let take = base + usize::from((j + k - offset) % k < rem);
            if take == 0 {
                continue;
            }
            let mut pool: Vec<Command> = embedded_forms(verb)
                .flat_map(|s| embedded_forms(partner).map(move |u| place(conj, s, u)))
                .collect();
            let (chosen, _) = pool.partial_shuffle(&mut rng, take);
            out.extend(chosen.iter().map(Sample::from_command));
        }
        offset = (offset + rem) % k;
    }
    Ok(())
}

/// Builds the training split described by `config`.
///
/// Sampled experiments draw exactly `train_size` unique commands, the first
/// half (rounded up) under `and`. Horizontal levels take every command the
/// support permits.
pub fn build_train(config: &ExperimentConfig) -> Result<Dataset, DatagenError> {
    let schedule = config.schedule()?;
    let mut samples = Vec::new();
    match (&schedule, config.experiment.is_sampled()) {
        (Schedule::Support(support), false) => {
            let uniform_verbs = other_verbs(config.restricted_verb);
            let mut in_support = [false; Verb::COUNT];
            for v in support.support() {
                in_support[v.index()] = true;
            }
            for conj in Conjunction::ALL {
                for verb in Verb::ALL.into_iter().filter(|v| in_support[v.index()]) {
                    for s in embedded_forms(verb) {
                        for &partner in &uniform_verbs {
                            samples.extend(
                                embedded_forms(partner)
                                    .map(|u| Sample::from_command(&place(conj, s, u))),
                            );
                        }
                    }
                }
            }
        }
        _ => {
            let dist = schedule.distribution();
            let n_and = config.train_size.div_ceil(2);
            let n_after = config.train_size / 2;
            sample_conjunction(config, &dist, Conjunction::And, n_and, &mut samples)?;
            sample_conjunction(config, &dist, Conjunction::After, n_after, &mut samples)?;
        }
    }
    Ok(Dataset::new(Split::Train, samples, config.clone()))
}

/// Builds the exhaustive test split. Its contents depend only on the
/// restricted verb.
pub fn build_test(config: &ExperimentConfig) -> Result<Dataset, DatagenError> {
    config.validate()?;
    let mut samples = Vec::with_capacity(TEST_SIZE);
    for conj in Conjunction::ALL {
        for u in embedded_forms(config.restricted_verb) {
            for verb in Verb::ALL {
                samples.extend(embedded_forms(verb).map(|s| Sample::from_command(&place(conj, s, u))));
            }
        }
    }
    Ok(Dataset::new(Split::Test, samples, config.clone()))
}

/// One training set per size at the same entropy level. All share the seed
/// derivation and the test split from [`build_test`].
pub fn build_sample_size_suite(
    config: &ExperimentConfig,
    sizes: &[usize],
) -> Result<Vec<Dataset>, DatagenError> {
    if !config.experiment.is_sampled() {
        return Err(DatagenError::NotSampled(config.experiment.name()));
    }
    sizes
        .iter()
        .map(|&train_size| {
            build_train(&ExperimentConfig {
                train_size,
                ..config.clone()
            })
        })
        .collect()
}

pub fn verb_counts(samples: &[Sample], slot: Slot, conj: Option<Conjunction>) -> [usize; Verb::COUNT] {
    let mut counts = [0; Verb::COUNT];
    for s in samples.iter().filter(|s| conj.is_none_or(|c| s.conj == c)) {
        counts[s.verb(slot).index()] += 1;
    }
    counts
}

/// Entropy of the verb frequencies in `slot` among samples joined by `conj`.
pub fn empirical_entropy(samples: &[Sample], slot: Slot, conj: Conjunction) -> Result<f64, DatagenError> {
    entropy_of_counts(&verb_counts(samples, slot, Some(conj))).map_err(|_| DatagenError::EmptySlice(conj))
}

/// Entropy of schedule-slot verbs pooled across conjunctions.
pub fn schedule_slot_entropy(samples: &[Sample]) -> Option<f64> {
    let mut counts = [0; Verb::COUNT];
    for s in samples {
        counts[s.verb(schedule_slot(s.conj)).index()] += 1;
    }
    entropy_of_counts(&counts).ok()
}

/// Whether a sample breaks the slot constraint of `split`: in training the
/// uniform slot never holds `v1`, in testing it always does.
pub fn violates_constraint(sample: &Sample, split: Split, v1: Verb) -> bool {
    let has_v1 = sample.verb(uniform_slot(sample.conj)) == v1;
    match split {
        Split::Train => has_v1,
        Split::Test => !has_v1,
    }
}

/// Full-scan integrity report over a list of samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inspection {
    pub samples: usize,
    pub and_samples: usize,
    pub after_samples: usize,
    /// `(slot, conj, entropy)`; `None` when no sample uses `conj`.
    pub entropies: Vec<(Slot, Conjunction, Option<f64>)>,
    pub constraint_violations: usize,
    pub output_mismatches: usize,
    /// Inputs that fail to parse, or whose labels disagree with the parse.
    pub invalid_inputs: usize,
    pub duplicates: usize,
}

impl Inspection {
    pub fn entropy(&self, slot: Slot, conj: Conjunction) -> Option<f64> {
        self.entropies
            .iter()
            .find(|(s, c, _)| *s == slot && *c == conj)
            .and_then(|(_, _, h)| *h)
    }

    pub fn is_clean(&self) -> bool {
        self.constraint_violations == 0
            && self.output_mismatches == 0
            && self.invalid_inputs == 0
            && self.duplicates == 0
    }
}

pub fn inspect(samples: &[Sample], split: Split, v1: Verb) -> Inspection {
    let mut seen = HashSet::with_capacity(samples.len());
    let mut report = Inspection {
        samples: samples.len(),
        and_samples: 0,
        after_samples: 0,
        entropies: Vec::new(),
        constraint_violations: 0,
        output_mismatches: 0,
        invalid_inputs: 0,
        duplicates: 0,
    };
    for s in samples {
        match s.conj {
            Conjunction::And => report.and_samples += 1,
            Conjunction::After => report.after_samples += 1,
        }
        if !seen.insert(s.input.as_str()) {
            report.duplicates += 1;
        }
        if violates_constraint(s, split, v1) {
            report.constraint_violations += 1;
        }
        match crate::grammar::parse_command(&s.input) {
            Ok(c) => {
                if c.conj != s.conj || c.e1.verb != s.e1_verb || c.e2.verb != s.e2_verb {
                    report.invalid_inputs += 1;
                }
                let gold = interpret(&c).to_string();
                if s.output.split_whitespace().ne(gold.split_whitespace()) {
                    report.output_mismatches += 1;
                }
            }
            Err(_) => report.invalid_inputs += 1,
        }
    }
    for conj in Conjunction::ALL {
        for slot in [Slot::E1, Slot::E2] {
            report
                .entropies
                .push((slot, conj, empirical_entropy(samples, slot, conj).ok()));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::MAX_LAMBDA;
    use crate::grammar::all_commands;

    #[test]
    fn constants() {
        assert_eq!(VERB_CAPACITY, 3087);
        assert_eq!(TEST_SIZE, 7056);
    }

    #[test]
    fn largest_remainder_examples() {
        assert_eq!(largest_remainder(10, &[0.5, 0.25, 0.25]), vec![5, 3, 2]);
        assert_eq!(largest_remainder(3000, &[0.125; 8]), vec![375; 8]);
        assert_eq!(largest_remainder(7, &[1.0 / 3.0; 3]), vec![3, 2, 2]);
        assert_eq!(largest_remainder(0, &[0.3, 0.7]), vec![0, 0]);
        let q = largest_remainder(1000, &[1.0, 0.0]);
        assert_eq!(q, vec![1000, 0]);
    }

    #[test]
    fn largest_remainder_within_one() {
        let lambda = MAX_LAMBDA * 0.37;
        let d = MixtureSchedule::new(lambda, Verb::Jump).unwrap().distribution();
        for n in [1, 7, 99, 1500, 2999, 3000] {
            let q = largest_remainder(n, d.probs());
            assert_eq!(q.iter().sum::<usize>(), n);
            for (qi, p) in q.iter().zip(d.probs()) {
                assert!((*qi as f64 - n as f64 * p).abs() < 1.0);
            }
        }
    }

    #[test]
    fn vertical_degenerate() {
        let cfg = ExperimentConfig::vertical(0.0, 6000, Verb::Jump, 0);
        let ds = build_train(&cfg).unwrap();
        assert_eq!(ds.len(), 6000);
        for s in &ds.samples {
            assert_eq!(s.verb(schedule_slot(s.conj)), Verb::Jump);
            assert_ne!(s.verb(uniform_slot(s.conj)), Verb::Jump);
        }
        assert_eq!(empirical_entropy(&ds.samples, Slot::E2, Conjunction::And).unwrap(), 0.0);
        assert_eq!(ds.realized_entropy, 0.0);
        let report = inspect(&ds.samples, Split::Train, Verb::Jump);
        assert!(report.is_clean(), "{report:?}");
        assert_eq!(report.and_samples, 3000);
    }

    #[test]
    fn vertical_max_entropy_is_uniform() {
        let cfg = ExperimentConfig::vertical(3.0, 6000, Verb::Jump, 3);
        let ds = build_train(&cfg).unwrap();
        assert_eq!(verb_counts(&ds.samples, Slot::E2, Some(Conjunction::And)), [375; 8]);
        assert_eq!(verb_counts(&ds.samples, Slot::E1, Some(Conjunction::After)), [375; 8]);
        let h = empirical_entropy(&ds.samples, Slot::E2, Conjunction::And).unwrap();
        assert!((h - 3.0).abs() < 0.01);
    }

    #[test]
    fn uniform_slot_is_balanced() {
        let cfg = ExperimentConfig::vertical(1.5, 6000, Verb::Crawl, 11);
        let ds = build_train(&cfg).unwrap();
        for conj in Conjunction::ALL {
            let counts = verb_counts(&ds.samples, uniform_slot(conj), Some(conj));
            assert_eq!(counts[Verb::Crawl.index()], 0);
            let n: usize = counts.iter().sum();
            for v in other_verbs(Verb::Crawl) {
                let c = counts[v.index()] as f64;
                assert!((c - n as f64 / 7.0).abs() < 1.0, "{counts:?}");
            }
        }
    }

    #[test]
    fn odd_budget_favours_and() {
        let ds = build_train(&ExperimentConfig::vertical(2.0, 101, Verb::Jump, 0)).unwrap();
        let and = ds.samples.iter().filter(|s| s.conj == Conjunction::And).count();
        assert_eq!((and, ds.len() - and), (51, 50));

        let ds = build_train(&ExperimentConfig::vertical(2.0, 1, Verb::Jump, 0)).unwrap();
        assert_eq!(ds.len(), 1);
        assert!(matches!(
            empirical_entropy(&ds.samples, Slot::E1, Conjunction::After),
            Err(DatagenError::EmptySlice(Conjunction::After))
        ));
    }

    #[test]
    fn horizontal_sizes_match_enumeration() {
        for i in 1..=8 {
            let cfg = ExperimentConfig::horizontal(i, Verb::Jump, 0);
            let ds = build_train(&cfg).unwrap();
            let support = SupportSchedule::chain(Verb::Jump, i).unwrap();
            // brute force: scan the whole command space
            let expected = all_commands()
                .filter(|c| {
                    let s = match c.conj {
                        Conjunction::And => (c.e2.verb, c.e1.verb),
                        Conjunction::After => (c.e1.verb, c.e2.verb),
                    };
                    support.support().contains(&s.0) && s.1 != Verb::Jump
                })
                .count();
            assert_eq!(ds.len(), expected);
            assert_eq!(ds.len(), 2 * 147 * 21 * i);
            assert!((ds.realized_entropy - (i as f64).log2()).abs() < 1e-12);
        }
        let ds = build_train(&ExperimentConfig::horizontal(4, Verb::Jump, 0)).unwrap();
        assert_eq!(ds.len(), 24_696);
    }

    #[test]
    fn horizontal_rejects_off_grid_entropy() {
        let mut cfg = ExperimentConfig::horizontal(4, Verb::Jump, 0);
        cfg.entropy_target = 1.5;
        assert!(matches!(build_train(&cfg), Err(DatagenError::NotASupportEntropy(_))));
    }

    #[test]
    fn test_split_structure() {
        let cfg = ExperimentConfig::vertical(1.0, 6000, Verb::Jump, 0);
        let test = build_test(&cfg).unwrap();
        assert_eq!(test.len(), 7056);
        for s in &test.samples {
            assert_eq!(s.verb(uniform_slot(s.conj)), Verb::Jump);
        }
        assert_eq!(empirical_entropy(&test.samples, Slot::E2, Conjunction::And).unwrap(), 3.0);
        assert_eq!(test.realized_entropy, 3.0);
        let report = inspect(&test.samples, Split::Test, Verb::Jump);
        assert!(report.is_clean());

        let other = build_test(&ExperimentConfig::horizontal(2, Verb::Jump, 9)).unwrap();
        assert_eq!(other.samples, test.samples);
    }

    #[test]
    fn train_test_disjoint() {
        let test = build_test(&ExperimentConfig::vertical(0.0, 1, Verb::Jump, 0)).unwrap();
        let test_inputs: HashSet<_> = test.samples.iter().map(|s| s.input.clone()).collect();
        for cfg in [
            ExperimentConfig::vertical(0.0, 6000, Verb::Jump, 0),
            ExperimentConfig::vertical(3.0, 6000, Verb::Jump, 0),
            ExperimentConfig::horizontal(8, Verb::Jump, 0),
        ] {
            let train = build_train(&cfg).unwrap();
            assert!(train.samples.iter().all(|s| !test_inputs.contains(&s.input)));
        }
    }

    #[test]
    fn capacity() {
        assert!(build_train(&ExperimentConfig::vertical(0.0, 6174, Verb::Jump, 0)).is_ok());
        match build_train(&ExperimentConfig::vertical(0.0, 7000, Verb::Jump, 0)) {
            Err(DatagenError::Capacity {
                conj,
                verb,
                requested,
                available,
            }) => {
                assert_eq!((conj, verb, requested, available), (Conjunction::And, Verb::Jump, 3500, 3087));
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
        let err = build_train(&ExperimentConfig::vertical(0.0, 7000, Verb::Jump, 0)).unwrap_err();
        assert!(err.to_string().contains("deficit 413"));
    }

    #[test]
    fn config_errors() {
        assert!(matches!(
            build_train(&ExperimentConfig::vertical(3.5, 10, Verb::Jump, 0)),
            Err(DatagenError::Distribution(DistributionError::EntropyOutOfRange(_)))
        ));
        assert!(matches!(
            build_train(&ExperimentConfig::vertical(1.0, 0, Verb::Jump, 0)),
            Err(DatagenError::EmptyTrainSize)
        ));
        assert!(matches!(
            build_sample_size_suite(&ExperimentConfig::horizontal(2, Verb::Jump, 0), &[100]),
            Err(DatagenError::NotSampled(_))
        ));
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let cfg = ExperimentConfig::vertical(1.0, 2000, Verb::Walk, 42);
        let a = build_train(&cfg).unwrap();
        let b = build_train(&cfg).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = build_train(&ExperimentConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn sample_size_suite() {
        let cfg = ExperimentConfig {
            experiment: Experiment::SampleSizeControl,
            ..ExperimentConfig::vertical(2.0, 6000, Verb::Jump, 5)
        };
        let suite = build_sample_size_suite(&cfg, &[3000, 4000, 6000]).unwrap();
        assert_eq!(suite.iter().map(Dataset::len).collect::<Vec<_>>(), vec![3000, 4000, 6000]);
        for ds in &suite {
            assert!((ds.realized_entropy - 2.0).abs() < 0.02);
        }
        let degenerate = build_sample_size_suite(&ExperimentConfig::vertical(0.0, 1, Verb::Jump, 0), &[3000]).unwrap();
        assert_eq!(degenerate[0].len(), 3000);
        assert!(degenerate[0]
            .samples
            .iter()
            .all(|s| s.verb(schedule_slot(s.conj)) == Verb::Jump));
        assert!(matches!(
            build_sample_size_suite(&ExperimentConfig::vertical(0.0, 1, Verb::Jump, 0), &[7000]),
            Err(DatagenError::Capacity { .. })
        ));
    }

    #[test]
    fn inspect_flags_faults() {
        let mut samples = build_train(&ExperimentConfig::vertical(2.0, 200, Verb::Jump, 1))
            .unwrap()
            .samples;
        samples[3].output.push_str(" JUMP");
        samples.push(samples[0].clone());
        let bad = Sample::from_command(&"jump and run".parse().unwrap());
        samples.push(bad);
        let mut mislabeled = samples[1].clone();
        mislabeled.input = "walk twice and look".into();
        mislabeled.output = "WALK WALK LOOK".into();
        mislabeled.e1_verb = Verb::Run;
        mislabeled.e2_verb = Verb::Look;
        samples.push(mislabeled);
        let report = inspect(&samples, Split::Train, Verb::Jump);
        assert_eq!(report.output_mismatches, 1);
        assert_eq!(report.duplicates, 1);
        assert_eq!(report.constraint_violations, 1);
        assert_eq!(report.invalid_inputs, 1);
    }
}
