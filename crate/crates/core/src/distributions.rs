//! Verb distributions, Shannon entropy and the two entropy schedules.
//!
//! Vertical scaling mixes a point mass at the restricted verb with a uniform
//! distribution over the remaining seven verbs:
//!
//! ```text
//! p = lambda * U(V \ {v1}) + (1 - lambda) * D(v1),   0 <= lambda <= 7/8
//! ```
//!
//! Horizontal scaling takes the uniform distribution over a growing support
//! `{v1} = S_1 ⊂ S_2 ⊂ ... ⊂ S_8 = V`.
//!
//! All entropies are in bits.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::grammar::Verb;

/// Entropy of the uniform distribution over all verbs.
pub const MAX_ENTROPY: f64 = 3.0;

/// Largest mixing weight; at this value the mixture is uniform over all verbs.
pub const MAX_LAMBDA: f64 = 1.0 - 1.0 / Verb::COUNT as f64;

const SUM_TOLERANCE: f64 = 1e-12;

/// Entropy tolerance used by [`lambda_for_entropy`].
pub const INVERSION_TOLERANCE: f64 = 1e-9;
pub const INVERSION_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("probability {value} at index {index} is negative or not finite")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("mixing weight {0} outside [0, 0.875]")]
    LambdaOutOfRange(f64),
    #[error("target entropy {0} outside [0, 3] bits")]
    EntropyOutOfRange(f64),
    #[error("support must contain between 1 and 8 distinct verbs, got {0}")]
    SupportSize(usize),
    #[error("verb {0} appears twice in the support")]
    DuplicateSupportVerb(Verb),
    #[error("support does not start with the restricted verb {0}")]
    SupportMissingRestricted(Verb),
    #[error("no samples to estimate a distribution from")]
    Empty,
}

fn validate(probs: &[f64]) -> Result<(), DistributionError> {
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(DistributionError::InvalidProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(DistributionError::NotNormalized { sum });
    }
    Ok(())
}

fn entropy_unchecked(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // -0.0 for point masses
    h.max(0.0)
}

/// Shannon entropy in bits of an arbitrary probability vector, `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64, DistributionError> {
    validate(probs)?;
    Ok(entropy_unchecked(probs))
}

/// Entropy of the empirical distribution given by `counts`.
pub fn entropy_of_counts(counts: &[usize]) -> Result<f64, DistributionError> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(DistributionError::Empty);
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok(entropy_unchecked(&probs))
}

/// A probability vector over the eight verbs, indexed by [`Verb::index`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerbDistribution {
    probs: [f64; Verb::COUNT],
}

impl VerbDistribution {
    pub fn new(probs: [f64; Verb::COUNT]) -> Result<Self, DistributionError> {
        validate(&probs)?;
        Ok(Self { probs })
    }

    pub fn degenerate(verb: Verb) -> Self {
        let mut probs = [0.0; Verb::COUNT];
        probs[verb.index()] = 1.0;
        Self { probs }
    }

    /// Uniform over `support`; duplicates are ignored.
    pub fn uniform_over(support: &[Verb]) -> Result<Self, DistributionError> {
        let mut mask = [false; Verb::COUNT];
        for v in support {
            mask[v.index()] = true;
        }
        let n = mask.iter().filter(|&&m| m).count();
        if n == 0 {
            return Err(DistributionError::SupportSize(0));
        }
        let mut probs = [0.0; Verb::COUNT];
        for (p, m) in probs.iter_mut().zip(mask) {
            if m {
                *p = 1.0 / n as f64;
            }
        }
        Ok(Self { probs })
    }

    pub fn prob(&self, verb: Verb) -> f64 {
        self.probs[verb.index()]
    }

    pub fn probs(&self) -> &[f64; Verb::COUNT] {
        &self.probs
    }

    pub fn support(&self) -> Vec<Verb> {
        Verb::ALL
            .into_iter()
            .filter(|v| self.prob(*v) > 0.0)
            .collect()
    }

    pub fn entropy(&self) -> f64 {
        entropy_unchecked(&self.probs)
    }
}

/// Serializes as `{"look": p, "jump": p, ...}` in verb declaration order.
impl Serialize for VerbDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(Verb::COUNT))?;
        for v in Verb::ALL {
            map.serialize_entry(v.token(), &self.prob(v))?;
        }
        map.end()
    }
}

/// Vertical schedule: mixture of the point mass at `restricted_verb` and the
/// uniform distribution over the other seven verbs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureSchedule {
    lambda: f64,
    restricted_verb: Verb,
}

impl MixtureSchedule {
    pub fn new(lambda: f64, restricted_verb: Verb) -> Result<Self, DistributionError> {
        if !(0.0..=MAX_LAMBDA).contains(&lambda) {
            return Err(DistributionError::LambdaOutOfRange(lambda));
        }
        Ok(Self {
            lambda,
            restricted_verb,
        })
    }

    /// Schedule whose distribution has entropy `target` bits.
    pub fn for_entropy(target: f64, restricted_verb: Verb) -> Result<Self, DistributionError> {
        Self::new(lambda_for_entropy(target)?, restricted_verb)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn restricted_verb(&self) -> Verb {
        self.restricted_verb
    }

    pub fn distribution(&self) -> VerbDistribution {
        mixture_distribution(self)
    }
}

pub fn mixture_distribution(s: &MixtureSchedule) -> VerbDistribution {
    let other = s.lambda / (Verb::COUNT - 1) as f64;
    let mut probs = [other; Verb::COUNT];
    probs[s.restricted_verb.index()] = 1.0 - s.lambda;
    VerbDistribution { probs }
}

/// Horizontal schedule: uniform over a support whose first element is the
/// restricted verb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSchedule {
    support: Vec<Verb>,
}

impl SupportSchedule {
    pub fn new(support: Vec<Verb>) -> Result<Self, DistributionError> {
        if support.is_empty() || support.len() > Verb::COUNT {
            return Err(DistributionError::SupportSize(support.len()));
        }
        let mut seen = [false; Verb::COUNT];
        for &v in &support {
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(DistributionError::DuplicateSupportVerb(v));
            }
        }
        Ok(Self { support })
    }

    /// `S_size` of the canonical chain: the restricted verb followed by the
    /// other verbs in declaration order. Chains for increasing sizes nest.
    pub fn chain(restricted_verb: Verb, size: usize) -> Result<Self, DistributionError> {
        if size == 0 || size > Verb::COUNT {
            return Err(DistributionError::SupportSize(size));
        }
        let support = std::iter::once(restricted_verb)
            .chain(Verb::ALL.into_iter().filter(|&v| v != restricted_verb))
            .take(size)
            .collect();
        Ok(Self { support })
    }

    /// Checks that the support starts with `restricted_verb`.
    pub fn check_restricted(&self, restricted_verb: Verb) -> Result<(), DistributionError> {
        if self.support.first() != Some(&restricted_verb) {
            return Err(DistributionError::SupportMissingRestricted(restricted_verb));
        }
        Ok(())
    }

    pub fn support(&self) -> &[Verb] {
        &self.support
    }

    pub fn size(&self) -> usize {
        self.support.len()
    }

    pub fn distribution(&self) -> VerbDistribution {
        support_distribution(self)
    }
}

pub fn support_distribution(s: &SupportSchedule) -> VerbDistribution {
    VerbDistribution::uniform_over(&s.support).expect("schedule support is non-empty")
}

/// Smallest `x` in `[lo, hi]` bracket such that `|f(x) - target| <= tol`, for
/// a strictly increasing `f`. Returns the best midpoint after `max_iter`
/// halvings if the tolerance is never reached.
pub fn bisect_increasing<F>(f: F, mut lo: f64, mut hi: f64, target: f64, tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        mid = 0.5 * (lo + hi);
        let value = f(mid);
        if (value - target).abs() <= tol {
            return mid;
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    mid
}

fn mixture_entropy(lambda: f64) -> f64 {
    let other = lambda / (Verb::COUNT - 1) as f64;
    let mut probs = [other; Verb::COUNT];
    probs[0] = 1.0 - lambda;
    entropy_unchecked(&probs)
}

/// Inverts the vertical schedule: the mixing weight whose distribution has
/// entropy `target` bits, to within [`INVERSION_TOLERANCE`].
pub fn lambda_for_entropy(target: f64) -> Result<f64, DistributionError> {
    if !(0.0..=MAX_ENTROPY).contains(&target) {
        return Err(DistributionError::EntropyOutOfRange(target));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if target == MAX_ENTROPY {
        return Ok(MAX_LAMBDA);
    }
    Ok(bisect_increasing(
        mixture_entropy,
        0.0,
        MAX_LAMBDA,
        target,
        INVERSION_TOLERANCE,
        INVERSION_MAX_ITER,
    ))
}

/// Support size `i` with `log2 i == entropy`, if there is one.
pub fn support_size_for_entropy(entropy: f64) -> Option<usize> {
    (1..=Verb::COUNT).find(|&i| ((i as f64).log2() - entropy).abs() <= INVERSION_TOLERANCE)
}

/// `{0, 0.5, ..., 3}`.
pub fn default_vertical_grid() -> Vec<f64> {
    (0..=6).map(|i| i as f64 * 0.5).collect()
}

/// `{log2 i : i = 1..8}`.
pub fn default_horizontal_grid() -> Vec<f64> {
    (1..=Verb::COUNT).map(|i| (i as f64).log2()).collect()
}
