//! Vocabulary and sentence structure of the modified SCAN command language.
//!
//! A command is always two embedded sentences joined by a conjunction. Each
//! embedded sentence is a verb, an optional direction phrase and an optional
//! repetition adverb, always in that token order:
//!
//! ```text
//! command  := embedded conj embedded
//! embedded := verb [direction] [repetition]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Look,
    Jump,
    Run,
    Walk,
    Sprint,
    Crawl,
    Squat,
    Lunge,
}

impl Verb {
    pub const COUNT: usize = 8;

    /// All verbs in declaration order. This order is canonical everywhere.
    pub const ALL: [Verb; Verb::COUNT] = [
        Verb::Look,
        Verb::Jump,
        Verb::Run,
        Verb::Walk,
        Verb::Sprint,
        Verb::Crawl,
        Verb::Squat,
        Verb::Lunge,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn token(self) -> &'static str {
        match self {
            Verb::Look => "look",
            Verb::Jump => "jump",
            Verb::Run => "run",
            Verb::Walk => "walk",
            Verb::Sprint => "sprint",
            Verb::Crawl => "crawl",
            Verb::Squat => "squat",
            Verb::Lunge => "lunge",
        }
    }

    /// The uppercase token this verb contributes to an action sequence.
    pub fn action_token(self) -> &'static str {
        match self {
            Verb::Look => "LOOK",
            Verb::Jump => "JUMP",
            Verb::Run => "RUN",
            Verb::Walk => "WALK",
            Verb::Sprint => "SPRINT",
            Verb::Crawl => "CRAWL",
            Verb::Squat => "SQUAT",
            Verb::Lunge => "LUNGE",
        }
    }

    pub fn from_token(token: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.token() == token)
    }

    pub fn from_action_token(token: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.action_token() == token)
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Verb {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Verb::from_token(s).ok_or_else(|| ParseError::UnknownToken {
            position: 0,
            token: s.to_string(),
        })
    }
}

/// Turning direction used by the direction phrases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    None,
    Left,
    Right,
    OppositeLeft,
    OppositeRight,
    AroundLeft,
    AroundRight,
}

impl Direction {
    pub const ALL: [Direction; 7] = [
        Direction::None,
        Direction::Left,
        Direction::Right,
        Direction::OppositeLeft,
        Direction::OppositeRight,
        Direction::AroundLeft,
        Direction::AroundRight,
    ];

    /// Surface tokens; empty for [`Direction::None`].
    pub fn tokens(self) -> &'static [&'static str] {
        match self {
            Direction::None => &[],
            Direction::Left => &["left"],
            Direction::Right => &["right"],
            Direction::OppositeLeft => &["opposite", "left"],
            Direction::OppositeRight => &["opposite", "right"],
            Direction::AroundLeft => &["around", "left"],
            Direction::AroundRight => &["around", "right"],
        }
    }

    pub fn turn(self) -> Option<Turn> {
        match self {
            Direction::None => None,
            Direction::Left | Direction::OppositeLeft | Direction::AroundLeft => Some(Turn::Left),
            Direction::Right | Direction::OppositeRight | Direction::AroundRight => {
                Some(Turn::Right)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Repetition {
    Once,
    Twice,
    Thrice,
}

impl Repetition {
    pub const ALL: [Repetition; 3] = [Repetition::Once, Repetition::Twice, Repetition::Thrice];

    pub fn count(self) -> usize {
        match self {
            Repetition::Once => 1,
            Repetition::Twice => 2,
            Repetition::Thrice => 3,
        }
    }

    pub fn token(self) -> Option<&'static str> {
        match self {
            Repetition::Once => None,
            Repetition::Twice => Some("twice"),
            Repetition::Thrice => Some("thrice"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjunction {
    And,
    After,
}

impl Conjunction {
    pub const ALL: [Conjunction; 2] = [Conjunction::And, Conjunction::After];

    pub fn token(self) -> &'static str {
        match self {
            Conjunction::And => "and",
            Conjunction::After => "after",
        }
    }

    pub fn from_token(token: &str) -> Option<Conjunction> {
        Conjunction::ALL.into_iter().find(|c| c.token() == token)
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One side of a command: a verb plus its modifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddedSentence {
    pub verb: Verb,
    pub direction: Direction,
    pub repetition: Repetition,
}

impl EmbeddedSentence {
    /// Number of distinct sentences sharing one verb.
    pub const FORMS_PER_VERB: usize = Direction::ALL.len() * Repetition::ALL.len();

    pub fn new(verb: Verb, direction: Direction, repetition: Repetition) -> Self {
        Self {
            verb,
            direction,
            repetition,
        }
    }

    pub fn bare(verb: Verb) -> Self {
        Self::new(verb, Direction::None, Repetition::Once)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &'static str> {
        std::iter::once(self.verb.token())
            .chain(self.direction.tokens().iter().copied())
            .chain(self.repetition.token())
    }
}

impl fmt::Display for EmbeddedSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.tokens().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(tok)?;
        }
        Ok(())
    }
}

/// A full input command `(e1, conj, e2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Command {
    pub e1: EmbeddedSentence,
    pub conj: Conjunction,
    pub e2: EmbeddedSentence,
}

impl Command {
    /// Size of the whole command space.
    pub const SPACE_SIZE: usize = {
        let embedded = Verb::COUNT * EmbeddedSentence::FORMS_PER_VERB;
        embedded * Conjunction::ALL.len() * embedded
    };

    pub fn new(e1: EmbeddedSentence, conj: Conjunction, e2: EmbeddedSentence) -> Self {
        Self { e1, conj, e2 }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.e1, self.conj, self.e2)
    }
}

impl FromStr for Command {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_command(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("verb filter must name at least one verb")]
    EmptyVerbFilter,
}

/// Parse failure. Positions are zero-based token indices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty command")]
    Empty,
    #[error("unknown token {token:?} at position {position}")]
    UnknownToken { position: usize, token: String },
    #[error("command has no conjunction")]
    MissingConjunction,
    #[error("second conjunction {token:?} at position {position}")]
    ExtraConjunction { position: usize, token: String },
    #[error("unexpected token {token:?} at position {position}, expected {expected}")]
    Unexpected {
        position: usize,
        token: String,
        expected: &'static str,
    },
    #[error("command ends at position {position}, expected {expected}")]
    UnexpectedEnd {
        position: usize,
        expected: &'static str,
    },
}

impl ParseError {
    /// Token position the error refers to, when there is one.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::UnknownToken { position, .. }
            | ParseError::ExtraConjunction { position, .. }
            | ParseError::Unexpected { position, .. }
            | ParseError::UnexpectedEnd { position, .. } => Some(*position),
            ParseError::Empty | ParseError::MissingConjunction => None,
        }
    }
}

/// Enumerates embedded sentences in canonical order: verb, then direction,
/// then repetition, each in declaration order.
///
/// With a filter, only sentences whose verb is in the filter are returned;
/// the filter's own order and duplicates are irrelevant.
pub fn enumerate_embedded(verb_filter: Option<&[Verb]>) -> Result<Vec<EmbeddedSentence>, GrammarError> {
    let mut keep = [true; Verb::COUNT];
    if let Some(filter) = verb_filter {
        if filter.is_empty() {
            return Err(GrammarError::EmptyVerbFilter);
        }
        keep = [false; Verb::COUNT];
        for v in filter {
            keep[v.index()] = true;
        }
    }
    Ok(Verb::ALL
        .into_iter()
        .filter(|v| keep[v.index()])
        .flat_map(embedded_forms)
        .collect())
}

/// The 21 sentences built on `verb`, in canonical order.
pub fn embedded_forms(verb: Verb) -> impl Iterator<Item = EmbeddedSentence> {
    Direction::ALL.into_iter().flat_map(move |direction| {
        Repetition::ALL
            .into_iter()
            .map(move |repetition| EmbeddedSentence::new(verb, direction, repetition))
    })
}

/// Every command of the language in canonical order (e1, then conjunction,
/// then e2).
pub fn all_commands() -> impl Iterator<Item = Command> {
    let embedded = enumerate_embedded(None).expect("no filter");
    let outer = embedded.clone();
    outer.into_iter().flat_map(move |e1| {
        let embedded = embedded.clone();
        Conjunction::ALL.into_iter().flat_map(move |conj| {
            embedded
                .clone()
                .into_iter()
                .map(move |e2| Command::new(e1, conj, e2))
        })
    })
}

struct Cursor<'a> {
    tokens: &'a [&'a str],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).copied()
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(tok) => ParseError::Unexpected {
                position: self.pos,
                token: tok.to_string(),
                expected,
            },
            None => ParseError::UnexpectedEnd {
                position: self.pos,
                expected,
            },
        }
    }

    fn turn(&mut self) -> Result<Turn, ParseError> {
        let turn = match self.peek() {
            Some("left") => Turn::Left,
            Some("right") => Turn::Right,
            _ => return Err(self.unexpected("\"left\" or \"right\"")),
        };
        self.pos += 1;
        Ok(turn)
    }

    fn embedded(&mut self) -> Result<EmbeddedSentence, ParseError> {
        let verb = match self.peek().and_then(Verb::from_token) {
            Some(v) => v,
            None => return Err(self.unexpected("a verb")),
        };
        self.pos += 1;

        let direction = match self.peek() {
            Some("left") | Some("right") => match self.turn()? {
                Turn::Left => Direction::Left,
                Turn::Right => Direction::Right,
            },
            Some("opposite") => {
                self.pos += 1;
                match self.turn()? {
                    Turn::Left => Direction::OppositeLeft,
                    Turn::Right => Direction::OppositeRight,
                }
            }
            Some("around") => {
                self.pos += 1;
                match self.turn()? {
                    Turn::Left => Direction::AroundLeft,
                    Turn::Right => Direction::AroundRight,
                }
            }
            _ => Direction::None,
        };

        let repetition = match self.peek() {
            Some("twice") => Repetition::Twice,
            Some("thrice") => Repetition::Thrice,
            _ => Repetition::Once,
        };
        if repetition != Repetition::Once {
            self.pos += 1;
        }

        Ok(EmbeddedSentence::new(verb, direction, repetition))
    }
}

fn is_known(token: &str) -> bool {
    Verb::from_token(token).is_some()
        || Conjunction::from_token(token).is_some()
        || matches!(
            token,
            "left" | "right" | "opposite" | "around" | "twice" | "thrice"
        )
}

/// Parses a whitespace-separated surface string into a [`Command`].
pub fn parse_command(surface: &str) -> Result<Command, ParseError> {
    let tokens: Vec<&str> = surface.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some((position, token)) = tokens.iter().enumerate().find(|(_, t)| !is_known(t)) {
        return Err(ParseError::UnknownToken {
            position,
            token: token.to_string(),
        });
    }
    let mut conj_positions = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| Conjunction::from_token(t).is_some())
        .map(|(i, _)| i);
    if conj_positions.next().is_none() {
        return Err(ParseError::MissingConjunction);
    }
    if let Some(position) = conj_positions.next() {
        return Err(ParseError::ExtraConjunction {
            position,
            token: tokens[position].to_string(),
        });
    }

    let mut cursor = Cursor {
        tokens: &tokens,
        pos: 0,
    };
    let e1 = cursor.embedded()?;
    let conj = match cursor.peek().and_then(Conjunction::from_token) {
        Some(c) => c,
        None => return Err(cursor.unexpected("a conjunction")),
    };
    cursor.pos += 1;
    let e2 = cursor.embedded()?;
    if cursor.peek().is_some() {
        return Err(cursor.unexpected("end of command"));
    }
    Ok(Command::new(e1, conj, e2))
}
