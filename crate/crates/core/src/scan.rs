//! Finding the end of an embedded matchertext payload without looking
//! inside it.

use std::ops::Range;

use thiserror::Error;

use crate::config::MatcherConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("offset {offset} is not an opener")]
    NotAnOpener { offset: usize },
    #[error("input ended with {depth} open matcher(s); innermost opened at offset {offset}")]
    NoMatchingCloser { depth: usize, offset: usize },
    #[error("closer {found:?} at offset {offset} does not match; expected {expected:?}")]
    MismatchedInterior { offset: usize, found: char, expected: char },
    #[error("character {found:?} at offset {offset} is outside the alphabet")]
    ForbiddenChar { offset: usize, found: char },
}

/// Returns the byte offset of the closer matching the opener at `open_index`.
///
/// The text strictly between the two is guaranteed to be matchertext under
/// `config`; nothing else about it is inspected.
pub fn scan_embedded(text: &str, open_index: usize, config: &MatcherConfig) -> Result<usize, ScanError> {
    let first = text
        .get(open_index..)
        .and_then(|rest| rest.chars().next())
        .filter(|&ch| config.is_opener(ch))
        .ok_or(ScanError::NotAnOpener { offset: open_index })?;

    // (offset of opener, closer it expects)
    let mut stack: Vec<(usize, char)> = vec![(open_index, config.closer_for(first).unwrap())];
    let body_start = open_index + first.len_utf8();
    for (rel, ch) in text[body_start..].char_indices() {
        let offset = body_start + rel;
        if !config.in_alphabet(ch) {
            return Err(ScanError::ForbiddenChar { offset, found: ch });
        }
        if let Some(close) = config.closer_for(ch) {
            stack.push((offset, close));
        } else if config.is_closer(ch) {
            let (_, expected) = *stack.last().expect("stack is never empty inside the loop");
            if ch != expected {
                return Err(ScanError::MismatchedInterior {
                    offset,
                    found: ch,
                    expected,
                });
            }
            stack.pop();
            if stack.is_empty() {
                return Ok(offset);
            }
        }
    }
    let (offset, _) = *stack.last().unwrap();
    Err(ScanError::NoMatchingCloser {
        depth: stack.len(),
        offset,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DelimiterError {
    #[error("opening delimiter {0:?} has no unmatched opener")]
    NoUnmatchedOpener(String),
    #[error("opening delimiter {0:?} contains a stray closer")]
    StrayCloserInOpener(String),
    #[error("closing delimiter {closer:?} does not close the openers left by {opener:?}")]
    CloserMismatch { opener: String, closer: String },
}

/// Host-side delimiters `s_o` and `s_c` around an embedded payload.
///
/// `opener` must leave at least one opener unmatched, and `closer` must
/// close exactly those openers, innermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedDelimiters {
    opener: String,
    closer: String,
    /// Byte offset, within `opener`, of its innermost unmatched opener.
    inner_open: usize,
    /// Byte offset, within `closer`, of the closer paired with `inner_open`.
    inner_close: usize,
}

impl EmbedDelimiters {
    pub fn new(
        opener: impl Into<String>,
        closer: impl Into<String>,
        config: &MatcherConfig,
    ) -> Result<Self, DelimiterError> {
        let opener = opener.into();
        let closer = closer.into();

        let mut open_stack: Vec<(usize, char)> = Vec::new();
        for (off, ch) in opener.char_indices() {
            if config.is_opener(ch) {
                open_stack.push((off, ch));
            } else if config.is_closer(ch) {
                match open_stack.last() {
                    Some(&(_, o)) if config.closer_for(o) == Some(ch) => {
                        open_stack.pop();
                    }
                    _ => return Err(DelimiterError::StrayCloserInOpener(opener)),
                }
            }
        }
        let Some(&(inner_open, _)) = open_stack.last() else {
            return Err(DelimiterError::NoUnmatchedOpener(opener));
        };

        // Walk the closer backwards to find closers it leaves unmatched, then
        // compare them with the pending openers, innermost first.
        let mut pending: Vec<(usize, char)> = Vec::new();
        let mut close_stack: Vec<char> = Vec::new();
        for (off, ch) in closer.char_indices().rev() {
            if config.is_closer(ch) {
                close_stack.push(ch);
                pending.push((off, ch));
            } else if config.is_opener(ch) {
                let want = config.closer_for(ch);
                if close_stack.last().copied() == want {
                    close_stack.pop();
                    pending.pop();
                } else {
                    return Err(DelimiterError::CloserMismatch { opener, closer });
                }
            }
        }
        pending.reverse();
        let expected: Vec<char> = open_stack
            .iter()
            .rev()
            .map(|&(_, o)| config.closer_for(o).unwrap())
            .collect();
        let got: Vec<char> = pending.iter().map(|&(_, c)| c).collect();
        if expected != got {
            return Err(DelimiterError::CloserMismatch { opener, closer });
        }
        let inner_close = pending[0].0;
        Ok(EmbedDelimiters {
            opener,
            closer,
            inner_open,
            inner_close,
        })
    }

    pub fn opener(&self) -> &str {
        &self.opener
    }

    pub fn closer(&self) -> &str {
        &self.closer
    }

    /// `opener || payload || closer`.
    pub fn wrap(&self, payload: &str) -> String {
        let mut out = String::with_capacity(self.opener.len() + payload.len() + self.closer.len());
        out.push_str(&self.opener);
        out.push_str(payload);
        out.push_str(&self.closer);
        out
    }

    /// Given `text` with the opening delimiter at `start`, returns the byte
    /// range of the payload.
    pub fn locate(&self, text: &str, start: usize, config: &MatcherConfig) -> Result<Range<usize>, ScanError> {
        if !text[start..].starts_with(self.opener.as_str()) {
            return Err(ScanError::NotAnOpener { offset: start });
        }
        let close_at = scan_embedded(text, start + self.inner_open, config)?;
        let payload = start + self.opener.len()..close_at - self.inner_close;
        if payload.start > payload.end || !text[payload.end..].starts_with(self.closer.as_str()) {
            return Err(ScanError::NoMatchingCloser {
                depth: 1,
                offset: start + self.inner_open,
            });
        }
        Ok(payload)
    }
}
