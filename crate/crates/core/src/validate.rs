//! The "matchers must match" validator.
//!
//! Matching runs a single stack pass. A closer that matches the stack top
//! pops it. A closer whose opener sits deeper in the stack closes that
//! opener, and every opener above it is reported unmatched. A closer whose
//! opener is not on the stack at all is a mismatched pair (and pops the top
//! anyway), or an unexpected closer when the stack is empty.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::MatcherConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnmatchedOpener,
    UnexpectedCloser,
    MismatchedPair,
    ForbiddenChar,
}

impl ViolationKind {
    pub const ALL: [ViolationKind; 4] = [
        ViolationKind::UnmatchedOpener,
        ViolationKind::UnexpectedCloser,
        ViolationKind::MismatchedPair,
        ViolationKind::ForbiddenChar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::UnmatchedOpener => "unmatched_opener",
            ViolationKind::UnexpectedCloser => "unexpected_closer",
            ViolationKind::MismatchedPair => "mismatched_pair",
            ViolationKind::ForbiddenChar => "forbidden_char",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One breach of the matchertext rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    /// Byte offset of `found`.
    pub offset: usize,
    /// 1-based; lines are split on LF only.
    pub line: usize,
    /// 1-based character column.
    pub column: usize,
    pub kind: ViolationKind,
    pub found: char,
    /// Only set for [`ViolationKind::MismatchedPair`].
    pub expected: Option<char>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match self.kind {
            ViolationKind::UnmatchedOpener => write!(f, "unmatched opener {:?}", self.found),
            ViolationKind::UnexpectedCloser => write!(f, "unexpected closer {:?}", self.found),
            ViolationKind::MismatchedPair => match self.expected {
                Some(exp) => write!(f, "mismatched closer {:?}, expected {:?}", self.found, exp),
                None => write!(f, "mismatched closer {:?}", self.found),
            },
            ViolationKind::ForbiddenChar => {
                write!(f, "character {:?} is outside the alphabet", self.found)
            }
        }
    }
}

/// Raw outcome of one matcher decision, before line/column resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MatchEvent {
    Matched { open: usize, close: usize },
    UnmatchedOpener { offset: usize, found: char },
    Mismatched { offset: usize, found: char, expected: char },
    UnexpectedCloser { offset: usize, found: char },
    Forbidden { offset: usize, found: char },
}

/// Recovery applied to a closer whose opener is nowhere on the stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Recovery {
    /// Report a mismatch and pop the stack top.
    PopTop,
    /// Treat the closer as stray and leave the stack alone.
    SkipCloser,
}

pub(crate) fn pair_up(text: &str, config: &MatcherConfig, recovery: Recovery, mut sink: impl FnMut(MatchEvent)) {
    let mut stack: Vec<(usize, char)> = Vec::new();
    for (offset, ch) in text.char_indices() {
        if !config.in_alphabet(ch) {
            sink(MatchEvent::Forbidden { offset, found: ch });
            continue;
        }
        if config.is_opener(ch) {
            stack.push((offset, ch));
            continue;
        }
        let Some(want) = config.opener_for(ch) else {
            continue;
        };
        match stack.iter().rposition(|&(_, o)| o == want) {
            Some(depth) => {
                for (off, o) in stack.drain(depth + 1..).rev() {
                    sink(MatchEvent::UnmatchedOpener { offset: off, found: o });
                }
                let (open, _) = stack.pop().expect("position was found");
                sink(MatchEvent::Matched { open, close: offset });
            }
            None => match stack.last().copied() {
                Some((_, top)) => {
                    if recovery == Recovery::PopTop {
                        stack.pop();
                    }
                    sink(MatchEvent::Mismatched {
                        offset,
                        found: ch,
                        expected: config.closer_for(top).expect("stack holds openers only"),
                    })
                }
                None => sink(MatchEvent::UnexpectedCloser { offset, found: ch }),
            },
        }
    }
    for (offset, found) in stack.into_iter().rev() {
        sink(MatchEvent::UnmatchedOpener { offset, found });
    }
}

/// Validates `text` under `config`, returning every violation sorted by offset.
///
/// An empty result means `text` is matchertext.
pub fn validate(text: &str, config: &MatcherConfig) -> Vec<Violation> {
    let mut raw: Vec<(usize, ViolationKind, char, Option<char>)> = Vec::new();
    pair_up(text, config, Recovery::PopTop, |ev| match ev {
        MatchEvent::Matched { .. } => {}
        MatchEvent::UnmatchedOpener { offset, found } => {
            raw.push((offset, ViolationKind::UnmatchedOpener, found, None))
        }
        MatchEvent::Mismatched {
            offset,
            found,
            expected,
            ..
        } => raw.push((offset, ViolationKind::MismatchedPair, found, Some(expected))),
        MatchEvent::UnexpectedCloser { offset, found } => {
            raw.push((offset, ViolationKind::UnexpectedCloser, found, None))
        }
        MatchEvent::Forbidden { offset, found } => raw.push((offset, ViolationKind::ForbiddenChar, found, None)),
    });
    raw.sort_by_key(|v| v.0);

    let mut out = Vec::with_capacity(raw.len());
    let mut cursor = LineCursor::new(text);
    for (offset, kind, found, expected) in raw {
        let (line, column) = cursor.advance_to(offset);
        out.push(Violation {
            offset,
            line,
            column,
            kind,
            found,
            expected,
        });
    }
    out
}

/// True iff `text` is matchertext under `config`.
pub fn is_matchertext(text: &str, config: &MatcherConfig) -> bool {
    let mut stack: Vec<char> = Vec::new();
    for ch in text.chars() {
        if !config.in_alphabet(ch) {
            return false;
        }
        if let Some(close) = config.closer_for(ch) {
            stack.push(close);
        } else if config.is_closer(ch) && stack.pop() != Some(ch) {
            return false;
        }
    }
    stack.is_empty()
}

/// Byte offsets of matcher characters that take part in a matched pair.
///
/// Everything else that is a matcher has to be escaped before the text can
/// be embedded as matchertext. Stray closers are skipped rather than
/// popping the stack, so one stray character never unpairs its neighbours.
pub fn matched_offsets(text: &str, config: &MatcherConfig) -> Vec<usize> {
    let mut out = Vec::new();
    pair_up(text, config, Recovery::SkipCloser, |ev| {
        if let MatchEvent::Matched { open, close } = ev {
            out.push(open);
            out.push(close);
        }
    });
    out.sort_unstable();
    out
}

/// Resolves increasing byte offsets to (line, column) in one forward pass.
pub(crate) struct LineCursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> LineCursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        LineCursor {
            text,
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    /// `offset` must not be smaller than any previously requested offset.
    pub(crate) fn advance_to(&mut self, offset: usize) -> (usize, usize) {
        debug_assert!(offset >= self.pos);
        for ch in self.text[self.pos..offset].chars() {
            if ch == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        self.pos = offset;
        (self.line, self.column)
    }
}
