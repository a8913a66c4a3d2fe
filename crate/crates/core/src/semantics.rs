//! Interpretation of commands into action sequences.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grammar::{Command, Conjunction, Direction, EmbeddedSentence, Turn, Verb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    LTurn,
    RTurn,
    Verb(Verb),
}

impl Action {
    pub fn token(self) -> &'static str {
        match self {
            Action::LTurn => "LTURN",
            Action::RTurn => "RTURN",
            Action::Verb(v) => v.action_token(),
        }
    }

    fn turn(turn: Turn) -> Action {
        match turn {
            Turn::Left => Action::LTurn,
            Turn::Right => Action::RTurn,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown action token {token:?} at position {position}")]
pub struct ActionParseError {
    pub position: usize,
    pub token: String,
}

/// Output sequence; serializes as space-separated uppercase tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ActionSequence(pub Vec<Action>);

impl ActionSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn actions(&self) -> &[Action] {
        &self.0
    }
}

impl fmt::Display for ActionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(a.token())?;
        }
        Ok(())
    }
}

impl FromStr for ActionSequence {
    type Err = ActionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .enumerate()
            .map(|(position, tok)| match tok {
                "LTURN" => Ok(Action::LTurn),
                "RTURN" => Ok(Action::RTurn),
                _ => Verb::from_action_token(tok)
                    .map(Action::Verb)
                    .ok_or_else(|| ActionParseError {
                        position,
                        token: tok.to_string(),
                    }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ActionSequence)
    }
}

/// Actions produced by one repetition of a direction phrase.
pub fn direction_cost(direction: Direction) -> usize {
    match direction {
        Direction::None => 1,
        Direction::Left | Direction::Right => 2,
        Direction::OppositeLeft | Direction::OppositeRight => 3,
        Direction::AroundLeft | Direction::AroundRight => 8,
    }
}

/// Length of `interpret_embedded(e)` without computing it.
pub fn embedded_len(e: &EmbeddedSentence) -> usize {
    e.repetition.count() * direction_cost(e.direction)
}

fn push_unit(out: &mut Vec<Action>, e: &EmbeddedSentence) {
    let base = Action::Verb(e.verb);
    let turn = e.direction.turn().map(Action::turn);
    match (e.direction, turn) {
        (Direction::None, _) => out.push(base),
        (Direction::Left | Direction::Right, Some(t)) => out.extend([t, base]),
        (Direction::OppositeLeft | Direction::OppositeRight, Some(t)) => {
            out.extend([t, t, base])
        }
        (Direction::AroundLeft | Direction::AroundRight, Some(t)) => {
            for _ in 0..4 {
                out.extend([t, base]);
            }
        }
        _ => unreachable!("directed phrase without a turn"),
    }
}

fn extend_embedded(out: &mut Vec<Action>, e: &EmbeddedSentence) {
    for _ in 0..e.repetition.count() {
        push_unit(out, e);
    }
}

pub fn interpret_embedded(e: &EmbeddedSentence) -> ActionSequence {
    let mut out = Vec::with_capacity(embedded_len(e));
    extend_embedded(&mut out, e);
    ActionSequence(out)
}

/// `and` executes e1 then e2; `after` executes e2 then e1.
pub fn interpret(c: &Command) -> ActionSequence {
    let (first, second) = match c.conj {
        Conjunction::And => (&c.e1, &c.e2),
        Conjunction::After => (&c.e2, &c.e1),
    };
    let mut out = Vec::with_capacity(embedded_len(first) + embedded_len(second));
    extend_embedded(&mut out, first);
    extend_embedded(&mut out, second);
    ActionSequence(out)
}

/// Reference interpreter that works purely on surface strings.
///
/// It rewrites the rendered command with a literal suffix-rule table and a
/// lexicon, sharing no code with [`interpret`]. Kept for cross-checking.
pub mod oracle {
    use super::ActionSequence;
    use crate::grammar::Command;

    // `$` stands for the rewritten prefix the suffix was stripped from.
    const SUFFIX_RULES: &[(&str, &str)] = &[
        (" thrice", "$ $ $"),
        (" twice", "$ $"),
        (" around left", "LTURN $ LTURN $ LTURN $ LTURN $"),
        (" around right", "RTURN $ RTURN $ RTURN $ RTURN $"),
        (" opposite left", "LTURN LTURN $"),
        (" opposite right", "RTURN RTURN $"),
        (" left", "LTURN $"),
        (" right", "RTURN $"),
    ];

    const LEXICON: &[(&str, &str)] = &[
        ("look", "LOOK"),
        ("jump", "JUMP"),
        ("run", "RUN"),
        ("walk", "WALK"),
        ("sprint", "SPRINT"),
        ("crawl", "CRAWL"),
        ("squat", "SQUAT"),
        ("lunge", "LUNGE"),
    ];

    fn rewrite(phrase: &str) -> String {
        for (suffix, template) in SUFFIX_RULES {
            if let Some(prefix) = phrase.strip_suffix(suffix) {
                return template.replace('$', &rewrite(prefix));
            }
        }
        LEXICON
            .iter()
            .find(|(word, _)| *word == phrase)
            .map(|(_, action)| action.to_string())
            .unwrap_or_else(|| panic!("no rule for {phrase:?}"))
    }

    pub fn oracle_interpret_str(surface: &str) -> String {
        if let Some((left, right)) = surface.split_once(" and ") {
            format!("{} {}", rewrite(left), rewrite(right))
        } else if let Some((left, right)) = surface.split_once(" after ") {
            format!("{} {}", rewrite(right), rewrite(left))
        } else {
            panic!("no conjunction in {surface:?}")
        }
    }

    pub fn oracle_interpret(c: &Command) -> ActionSequence {
        oracle_interpret_str(&c.render())
            .parse()
            .expect("lexicon only emits known action tokens")
    }
}

pub use oracle::oracle_interpret;
