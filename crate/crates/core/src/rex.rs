//! Regex preprocessor: rewrites matchertext regex extensions into a plain
//! backslash-escaped dialect.
//!
//! * `{{m}}` quotes `m` literally;
//! * `\o()`, `\c()`, `\o[]`, `\c[]`, `\o{}`, `\c{}` select one matcher;
//! * inside a character class, `(<)`, `(>)`, `[<]`, `[>]`, `{<}`, `{>}` select
//!   the opener (`<`) or closer (`>`) of the surrounding pair.
//!
//! Matchers inside classes are always emitted as `\xNN`; literal matchers
//! elsewhere are backslash-escaped. `\o{...}` with a non-empty payload is
//! left alone (it is an octal escape in some dialects).

use thiserror::Error;

use crate::config::MatcherConfig;
use crate::scan::scan_embedded;
use crate::validate::{validate, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RexError {
    #[error("pattern is not matchertext ({} violation(s))", .0.len())]
    NotMatchertext(Vec<Violation>),
    #[error("`{{{{` at offset {offset} does not close with `}}}}`")]
    UnterminatedQuote { offset: usize },
    #[error("ambiguous matcher selector in character class at offset {offset}")]
    BadClassSelector { offset: usize },
}

/// A regex source that has been checked to be matchertext.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RexPattern {
    source: String,
}

impl RexPattern {
    pub fn new(source: impl Into<String>) -> Result<Self, RexError> {
        let source = source.into();
        let violations = validate(&source, &MatcherConfig::standard());
        if violations.is_empty() {
            Ok(RexPattern { source })
        } else {
            Err(RexError::NotMatchertext(violations))
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

const METACHARACTERS: &str = ".^$*+?()[]{}|\\";

/// Appends `s` with every regex metacharacter backslash-escaped.
pub fn push_escaped_literal(out: &mut String, s: &str) {
    for ch in s.chars() {
        if METACHARACTERS.contains(ch) {
            out.push('\\');
        }
        out.push(ch);
    }
}

fn push_hex(out: &mut String, ch: char) {
    out.push_str(&format!("\\x{:02X}", ch as u32));
}

/// `\o()`-style selection at `pos`, which points at the backslash.
fn matcher_select(src: &str, pos: usize) -> Option<char> {
    let seq = src.get(pos..pos + 4)?;
    let (open, close) = match &seq[2..] {
        "()" => ('(', ')'),
        "[]" => ('[', ']'),
        "{}" => ('{', '}'),
        _ => return None,
    };
    match &seq[..2] {
        "\\o" => Some(open),
        "\\c" => Some(close),
        _ => None,
    }
}

pub fn translate_rex(pattern: &RexPattern) -> Result<String, RexError> {
    let src = pattern.source();
    let config = MatcherConfig::standard();
    let mut out = String::with_capacity(src.len() + 8);
    let mut pos = 0;
    while pos < src.len() {
        let ch = src[pos..].chars().next().unwrap();
        match ch {
            '\\' => {
                if let Some(m) = matcher_select(src, pos) {
                    out.push('\\');
                    out.push(m);
                    pos += 4;
                } else {
                    // copy the escape and whatever it escapes
                    let next_len = src[pos + 1..].chars().next().map_or(0, char::len_utf8);
                    out.push_str(&src[pos..pos + 1 + next_len]);
                    pos += 1 + next_len;
                }
            }
            '{' if src[pos + 1..].starts_with('{') => {
                let outer = scan_embedded(src, pos, &config).expect("validated");
                let inner = scan_embedded(src, pos + 1, &config).expect("validated");
                if inner + 1 != outer {
                    return Err(RexError::UnterminatedQuote { offset: pos });
                }
                push_escaped_literal(&mut out, &src[pos + 2..inner]);
                pos = outer + 1;
            }
            '[' => {
                let close = scan_embedded(src, pos, &config).expect("validated");
                out.push('[');
                let mut body_start = pos + 1;
                if src[body_start..close].starts_with('^') {
                    out.push('^');
                    body_start += 1;
                }
                class_body(src, body_start, close, &config, &mut out)?;
                out.push(']');
                pos = close + 1;
            }
            _ => {
                out.push(ch);
                pos += ch.len_utf8();
            }
        }
    }
    Ok(out)
}

/// Convenience wrapper validating `source` first.
pub fn translate_rex_str(source: &str) -> Result<String, RexError> {
    translate_rex(&RexPattern::new(source)?)
}

fn class_body(src: &str, start: usize, end: usize, config: &MatcherConfig, out: &mut String) -> Result<(), RexError> {
    let mut pos = start;
    while pos < end {
        let ch = src[pos..].chars().next().unwrap();
        if ch == '\\' {
            if let Some(m) = matcher_select(src, pos).filter(|_| pos + 4 <= end) {
                push_hex(out, m);
                pos += 4;
                continue;
            }
            match src[pos + 1..end].chars().next() {
                Some(next) if config.is_matcher(next) => {
                    // the escaped matcher is still paired in the source
                    let close = scan_embedded(src, pos + 1, config).ok().filter(|&c| c < end);
                    match close {
                        Some(close) => {
                            push_hex(out, next);
                            class_body(src, pos + 2, close, config, out)?;
                            push_hex(out, config.closer_for(next).unwrap());
                            pos = close + 1;
                        }
                        None => {
                            push_hex(out, next);
                            pos += 2;
                        }
                    }
                }
                Some(next) => {
                    out.push('\\');
                    out.push(next);
                    pos += 1 + next.len_utf8();
                }
                // the escaped character is the closer ending this segment,
                // which the caller emits in hex
                None => pos += 1,
            }
            continue;
        }
        let Some(closer) = config.closer_for(ch) else {
            if config.is_closer(ch) {
                push_hex(out, ch);
            } else {
                out.push(ch);
            }
            pos += ch.len_utf8();
            continue;
        };
        let close = scan_embedded(src, pos, config).expect("validated");
        let inner = &src[pos + 1..close];
        match inner {
            "<" => push_hex(out, ch),
            ">" => push_hex(out, closer),
            _ if inner.len() > 1 && inner.chars().all(|c| c == '<' || c == '>') => {
                return Err(RexError::BadClassSelector { offset: pos });
            }
            _ if ch == '[' && is_bracket_expression(inner) => {
                out.push('[');
                out.push_str(inner);
                out.push(']');
            }
            _ => {
                push_hex(out, ch);
                class_body(src, pos + 1, close, config, out)?;
                push_hex(out, closer);
            }
        }
        pos = close + 1;
    }
    Ok(())
}

/// POSIX `[:name:]`, `[=c=]` and `[.c.]` forms inside a class.
fn is_bracket_expression(inner: &str) -> bool {
    [':', '=', '.']
        .iter()
        .any(|&d| inner.len() >= 2 && inner.starts_with(d) && inner.ends_with(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> String {
        translate_rex_str(s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(t(r"{{\\}}"), r"\\\\");
        assert_eq!(t("[a-z{<}]"), r"[a-z\x7B]");
        assert_eq!(t("[^[>]]"), r"[^\x5D]");
        assert_eq!(t("abc"), "abc");
        assert_eq!(t("{{a.b}}"), r"a\.b");
    }

    #[test]
    fn quotes_and_quantifiers() {
        assert_eq!(t("a{1,3}"), "a{1,3}");
        assert_eq!(t("a{{1}}"), "a1");
        assert_eq!(t("{{}}"), "");
        assert_eq!(t("x{{(a|b)*}}y"), r"x\(a\|b\)\*y");
        assert_eq!(t("{{[{}]}}"), r"\[\{\}\]");
        assert!(matches!(
            translate_rex_str("{{a}{b}}"),
            Err(RexError::UnterminatedQuote { offset: 0 })
        ));
    }

    #[test]
    fn matcher_select_outside_classes() {
        assert_eq!(t(r"([a-z]|\o{})"), r"([a-z]|\{)");
        assert_eq!(t(r"\c()\o[]\c[]"), r"\)\[\]");
        assert_eq!(t(r"\o{101}"), r"\o{101}");
        assert_eq!(t(r"\d+\(x\)"), r"\d+\(x\)");
    }

    #[test]
    fn classes() {
        assert_eq!(t("[()[]{}]"), r"[\x28\x29\x5B\x5D\x7B\x7D]");
        assert_eq!(t("[^[]]"), r"[^\x5B\x5D]");
        assert_eq!(t("[[:alpha:](>)]"), r"[[:alpha:]\x29]");
        assert_eq!(t(r"[\o()\d]"), r"[\x28\d]");
        assert_eq!(t("[(a)]"), r"[\x28a\x29]");
        assert_eq!(t(r"[\(\)]"), r"[\x28\x29]");
        assert_eq!(t(r"[\(\)]"), r"[\x28\x29]");
        assert!(matches!(
            translate_rex_str("[(<>)]"),
            Err(RexError::BadClassSelector { offset: 1 })
        ));
    }

    #[test]
    fn rejects_non_matchertext() {
        assert!(matches!(translate_rex_str("[a-z{]"), Err(RexError::NotMatchertext(_))));
        assert!(matches!(translate_rex_str(r"\{"), Err(RexError::NotMatchertext(_))));
    }

    #[test]
    fn probe_with_engine() {
        let re = regex::Regex::new(&format!("^{}$", t("[()[]{}]"))).unwrap();
        for b in 0u8..128 {
            let c = b as char;
            assert_eq!(re.is_match(&c.to_string()), "()[]{}".contains(c), "{c:?}");
        }
    }
}
