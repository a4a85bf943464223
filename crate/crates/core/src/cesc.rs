//! String-literal body codec for a C-family dialect extended with the
//! matchertext hosting escape `\[m]` and the matcher-select escapes
//! `\o()`, `\c()`, `\o[]`, `\c[]`, `\o{}`, `\c{}`.
//!
//! Recognized escapes: `\n \t \r \0 \\ \" \'`, `\xNN` (two hex digits, the
//! code point U+00NN), `\uNNNN` (four hex digits), the matcher-select
//! escapes, and `\[m]`, whose matchertext payload `m` is copied through
//! without any escape processing.

use thiserror::Error;

use crate::config::MatcherConfig;
use crate::scan::scan_embedded;
use crate::validate::{is_matchertext, matched_offsets, validate, Violation};

/// How `encode` spells a matcher that has no partner in the text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EscapeStyle {
    /// `\o()`, `\c()` and friends.
    #[default]
    MatcherSelect,
    /// `\x28`
    NumericHex,
    /// `\u0028`
    NumericUniversal,
}

/// Quote character delimiting the literal the body will live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QuoteContext {
    #[default]
    Double,
    Single,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CescError {
    #[error("invalid escape sequence at offset {offset}: {sequence:?}")]
    InvalidEscape { offset: usize, sequence: String },
    #[error("embed opened at offset {offset} is never closed")]
    UnterminatedEmbed { offset: usize },
    #[error("input is not matchertext ({} violation(s), first: {})", .0.len(), .0[0])]
    NotMatchertext(Vec<Violation>),
}

fn check_matchertext(text: &str, config: &MatcherConfig) -> Result<(), CescError> {
    let violations = validate(text, config);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CescError::NotMatchertext(violations))
    }
}

/// Decodes a literal body into the string it denotes.
pub fn decode(body: &str) -> Result<String, CescError> {
    let config = MatcherConfig::standard();
    check_matchertext(body, &config)?;

    let mut out = String::with_capacity(body.len());
    let mut rest = body.char_indices().peekable();
    while let Some((at, ch)) = rest.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        let invalid = |end: usize| CescError::InvalidEscape {
            offset: at,
            sequence: body[at..end.min(body.len())].to_string(),
        };
        let Some((_, esc)) = rest.next() else {
            return Err(invalid(body.len()));
        };
        match esc {
            'n' => out.push('\n'),
            't' => out.push('\t'),
            'r' => out.push('\r'),
            '0' => out.push('\0'),
            '\\' | '"' | '\'' => out.push(esc),
            'x' | 'u' => {
                let digits = if esc == 'x' { 2 } else { 4 };
                let start = at + 2;
                let hex = body
                    .get(start..start + digits)
                    .filter(|h| h.bytes().all(|b| b.is_ascii_hexdigit()));
                let value = hex
                    .and_then(|h| u32::from_str_radix(h, 16).ok())
                    .and_then(char::from_u32)
                    .ok_or_else(|| invalid(start + digits))?;
                out.push(value);
                for _ in 0..digits {
                    rest.next();
                }
            }
            'o' | 'c' => {
                let pair = body.get(at + 2..at + 4).ok_or_else(|| invalid(at + 4))?;
                let (open, close) = match pair {
                    "()" => ('(', ')'),
                    "[]" => ('[', ']'),
                    "{}" => ('{', '}'),
                    _ => return Err(invalid(at + 4)),
                };
                out.push(if esc == 'o' { open } else { close });
                rest.next();
                rest.next();
            }
            '[' => {
                let open = at + 1;
                // cannot fail once the whole body has validated
                let close =
                    scan_embedded(body, open, &config).map_err(|_| CescError::UnterminatedEmbed { offset: at })?;
                out.push_str(&body[open + 1..close]);
                while rest.next_if(|&(i, _)| i <= close).is_some() {}
            }
            _ => return Err(invalid(at + 1 + esc.len_utf8())),
        }
    }
    Ok(out)
}

/// Encodes `text` as a double-quoted literal body.
///
/// The result decodes back to `text` and is itself matchertext.
pub fn encode(text: &str, style: EscapeStyle) -> String {
    encode_with(text, style, QuoteContext::Double)
}

/// Like [`encode`], for a literal delimited by `quote`.
pub fn encode_with(text: &str, style: EscapeStyle, quote: QuoteContext) -> String {
    let config = MatcherConfig::standard();
    let matched = matched_offsets(text, &config);
    let mut matched = matched.iter().peekable();

    let mut out = String::with_capacity(text.len() + 8);
    for (at, ch) in text.char_indices() {
        if config.is_matcher(ch) {
            if matched.next_if(|&&m| m == at).is_some() {
                out.push(ch);
            } else {
                push_matcher_escape(&mut out, ch, style);
            }
            continue;
        }
        match ch {
            '\\' => out.push_str("\\\\"),
            '"' if quote == QuoteContext::Double => out.push_str("\\\""),
            '\'' if quote == QuoteContext::Single => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            c if c.is_control() => push_numeric(&mut out, c, style),
            c => out.push(c),
        }
    }
    out
}

fn push_numeric(out: &mut String, ch: char, style: EscapeStyle) {
    use std::fmt::Write;
    let code = ch as u32;
    match style {
        EscapeStyle::NumericUniversal => write!(out, "\\u{code:04X}"),
        _ if code <= 0xFF => write!(out, "\\x{code:02X}"),
        _ => write!(out, "\\u{code:04X}"),
    }
    .expect("writing to a String cannot fail");
}

fn push_matcher_escape(out: &mut String, ch: char, style: EscapeStyle) {
    match style {
        EscapeStyle::MatcherSelect => {
            let (kind, pair) = match ch {
                '(' => ('o', "()"),
                ')' => ('c', "()"),
                '[' => ('o', "[]"),
                ']' => ('c', "[]"),
                '{' => ('o', "{}"),
                '}' => ('c', "{}"),
                _ => unreachable!("standard matchers only"),
            };
            out.push('\\');
            out.push(kind);
            out.push_str(pair);
        }
        _ => push_numeric(out, ch, style),
    }
}

/// Wraps verbatim matchertext `m` as a `\[m]` fragment.
///
/// `m` is checked, never transformed: anything that is not matchertext is
/// rejected.
pub fn embed(m: &str) -> Result<String, CescError> {
    check_matchertext(m, &MatcherConfig::standard())?;
    let mut out = String::with_capacity(m.len() + 3);
    out.push_str("\\[");
    out.push_str(m);
    out.push(']');
    Ok(out)
}

/// True if `body` is acceptable input to [`decode`] without checking escapes.
pub fn is_valid_body(body: &str) -> bool {
    is_matchertext(body, &MatcherConfig::standard())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decode_examples() {
        assert_eq!(decode(r#"\["'\]"#).unwrap(), "\"'\\");
        assert_eq!(decode(r"\o()").unwrap(), "(");
        assert_eq!(decode(r#"\["[^"]*"]"#).unwrap(), r#""[^"]*""#);
        assert_eq!(decode(r"\[]").unwrap(), "");
        assert_eq!(decode(r"\x5B").unwrap(), "[");
        assert_eq!(decode(r#"\"\'\\"#).unwrap(), decode(r#"\["'\]"#).unwrap());
    }

    #[test]
    fn decode_mixed_literal() {
        assert_eq!(
            decode("\\t\\[let's indent]\\n\\t\\[a \"quote\"]").unwrap(),
            "\tlet's indent\n\ta \"quote\""
        );
        assert_eq!(decode("\\[line\none]").unwrap(), "line\none");
        assert_eq!(decode("\\[\\n]").unwrap(), "\\n");
        assert_eq!(decode("\\c{}\\u00e9\\0").unwrap(), "}\u{e9}\0");
    }

    #[test]
    fn decode_errors() {
        assert!(matches!(decode("\\q"), Err(CescError::InvalidEscape { offset: 0, .. })));
        assert!(matches!(
            decode("ab\\"),
            Err(CescError::InvalidEscape { offset: 2, .. })
        ));
        assert!(matches!(decode("\\x5"), Err(CescError::InvalidEscape { .. })));
        assert!(matches!(decode("\\uD800"), Err(CescError::InvalidEscape { .. })));
        assert!(matches!(decode("\\o(x)"), Err(CescError::InvalidEscape { .. })));
        assert!(matches!(decode("\\[abc"), Err(CescError::NotMatchertext(_))));
        assert!(matches!(decode("{"), Err(CescError::NotMatchertext(_))));
        assert!(matches!(decode("\\x5B]"), Err(CescError::NotMatchertext(_))));
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode("(", EscapeStyle::MatcherSelect), r"\o()");
        assert_eq!(encode("[", EscapeStyle::NumericHex), r"\x5B");
        assert_eq!(encode("]", EscapeStyle::NumericUniversal), r"\u005D");
        assert_eq!(encode("(a)", EscapeStyle::MatcherSelect), "(a)");
        assert_eq!(encode("\"'\\\n", EscapeStyle::NumericHex), "\\\"'\\\\\\n");
        assert_eq!(
            encode_with("\"'", EscapeStyle::NumericHex, QuoteContext::Single),
            "\"\\'"
        );
        assert_eq!(encode("\u{1b}\u{85}é", EscapeStyle::NumericHex), "\\x1B\\x85é");
        assert_eq!(encode("\u{1b}", EscapeStyle::NumericUniversal), "\\u001B");
        assert_eq!(encode("(a]b)", EscapeStyle::MatcherSelect), "(a\\c[]b)");
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(r#""[^"]*""#).unwrap(), r#"\["[^"]*"]"#);
        assert_eq!(embed("").unwrap(), r"\[]");
        assert!(matches!(embed("{a]"), Err(CescError::NotMatchertext(_))));
    }

    proptest! {
        #[test]
        fn round_trip(text in "\\PC*|[\\[\\](){}\\\\\"'a\\x00-\\x1f]*", style_ix in 0usize..3) {
            let style = [EscapeStyle::MatcherSelect, EscapeStyle::NumericHex, EscapeStyle::NumericUniversal][style_ix];
            let body = encode(&text, style);
            prop_assert!(is_valid_body(&body));
            prop_assert_eq!(decode(&body).unwrap(), text);
        }
    }
}
