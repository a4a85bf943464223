//! Matchertext violation survey for existing source files.
//!
//! A [`LanguageProfile`] describes just enough lexical structure (line
//! comments, block comments, string literal forms) to tell which region
//! each violation falls in. The lexing is coarse: it estimates where
//! violations live and does not parse.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::MatcherConfig;
use crate::validate::{validate, Violation};

/// One string-literal form of a language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringForm {
    pub delimiter: String,
    #[serde(default)]
    pub escape_char: Option<char>,
    #[serde(default)]
    pub multiline: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageProfile {
    pub name: String,
    #[serde(default)]
    pub line_comment: Option<String>,
    #[serde(default)]
    pub block_comment: Option<(String, String)>,
    /// Whether block comments nest.
    #[serde(default)]
    pub nested_comments: bool,
    #[serde(default)]
    pub string_forms: Vec<StringForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Parse(String),
    #[error("profile {profile:?}: empty {what}")]
    EmptyMarker { profile: String, what: &'static str },
    #[error("profile {profile:?}: marker {marker:?} is used twice")]
    DuplicateMarker { profile: String, marker: String },
    #[error("unknown built-in profile {0:?}")]
    UnknownBuiltin(String),
}

const BUILTIN: [(&str, &str); 3] = [
    ("c", include_str!("../profiles/c.toml")),
    ("shell", include_str!("../profiles/shell.toml")),
    ("markup", include_str!("../profiles/markup.toml")),
];

impl LanguageProfile {
    pub fn from_toml_str(src: &str) -> Result<Self, ProfileError> {
        let profile: LanguageProfile = toml::from_str(src).map_err(|e| ProfileError::Parse(e.to_string()))?;
        profile.check()?;
        Ok(profile)
    }

    /// Names of the profiles shipped with the crate.
    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTIN.iter().map(|(name, _)| *name)
    }

    pub fn builtin(name: &str) -> Result<Self, ProfileError> {
        let (_, src) = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| ProfileError::UnknownBuiltin(name.to_string()))?;
        LanguageProfile::from_toml_str(src)
    }

    fn check(&self) -> Result<(), ProfileError> {
        let mut markers: Vec<(&str, &'static str)> = Vec::new();
        if let Some(lc) = &self.line_comment {
            markers.push((lc, "line comment marker"));
        }
        if let Some((open, close)) = &self.block_comment {
            markers.push((open, "block comment opener"));
            if close.is_empty() {
                return Err(ProfileError::EmptyMarker {
                    profile: self.name.clone(),
                    what: "block comment closer",
                });
            }
        }
        for form in &self.string_forms {
            markers.push((&form.delimiter, "string delimiter"));
        }
        for (i, (marker, what)) in markers.iter().enumerate() {
            if marker.is_empty() {
                return Err(ProfileError::EmptyMarker {
                    profile: self.name.clone(),
                    what,
                });
            }
            if markers[..i].iter().any(|(m, _)| m == marker) {
                return Err(ProfileError::DuplicateMarker {
                    profile: self.name.clone(),
                    marker: marker.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Lexical region a byte belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionContext {
    StringLiteral,
    Comment,
    Code,
}

impl RegionContext {
    pub const ALL: [RegionContext; 3] = [
        RegionContext::StringLiteral,
        RegionContext::Comment,
        RegionContext::Code,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionContext::StringLiteral => "string_literal",
            RegionContext::Comment => "comment",
            RegionContext::Code => "code",
        }
    }
}

impl fmt::Display for RegionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContextViolation {
    pub file: String,
    pub violation: Violation,
    pub context: RegionContext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexWarningKind {
    UnterminatedString,
    UnterminatedComment,
}

/// A lexing problem that does not stop the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LexWarning {
    pub offset: usize,
    pub kind: LexWarningKind,
}

/// A maximal run of bytes sharing one context. Regions partition the text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub start: usize,
    pub end: usize,
    pub context: RegionContext,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceAnalysis {
    pub violations: Vec<ContextViolation>,
    pub warnings: Vec<LexWarning>,
}

impl SourceAnalysis {
    /// Tags every violation with `path`.
    pub fn in_file(mut self, path: &str) -> Self {
        for v in &mut self.violations {
            v.file = path.to_string();
        }
        self
    }
}

enum Marker<'p> {
    Line,
    Block,
    Str(&'p StringForm),
}

/// Splits `text` into string, comment and code regions.
pub fn lex_regions(text: &str, profile: &LanguageProfile) -> (Vec<Region>, Vec<LexWarning>) {
    let mut regions = Vec::new();
    let mut warnings = Vec::new();
    let push = |regions: &mut Vec<Region>, start: usize, end: usize, context| {
        if start < end {
            regions.push(Region { start, end, context });
        }
    };

    let mut code_start = 0;
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        let mut best: Option<(usize, Marker)> = None;
        let mut candidates: Vec<(usize, Marker)> = Vec::new();
        if let Some(lc) = profile.line_comment.as_deref().filter(|lc| rest.starts_with(lc)) {
            candidates.push((lc.len(), Marker::Line));
        }
        if let Some((open, _)) = profile
            .block_comment
            .as_ref()
            .filter(|(o, _)| rest.starts_with(o.as_str()))
        {
            candidates.push((open.len(), Marker::Block));
        }
        for form in &profile.string_forms {
            if rest.starts_with(form.delimiter.as_str()) {
                candidates.push((form.delimiter.len(), Marker::Str(form)));
            }
        }
        // longest marker wins; ties go to the earlier candidate
        for (len, marker) in candidates {
            if best.as_ref().is_none_or(|(l, _)| len > *l) {
                best = Some((len, marker));
            }
        }
        let Some((len, marker)) = best else {
            pos += rest.chars().next().unwrap().len_utf8();
            continue;
        };

        push(&mut regions, code_start, pos, RegionContext::Code);
        let (end, context) = match marker {
            Marker::Line => (rest.find('\n').map_or(text.len(), |i| pos + i), RegionContext::Comment),
            Marker::Block => {
                let (open, close) = profile.block_comment.as_ref().unwrap();
                let end = block_comment_end(text, pos + len, open, close, profile.nested_comments);
                let end = end.unwrap_or_else(|| {
                    warnings.push(LexWarning {
                        offset: pos,
                        kind: LexWarningKind::UnterminatedComment,
                    });
                    text.len()
                });
                (end, RegionContext::Comment)
            }
            Marker::Str(form) => {
                let end = string_end(text, pos + len, form).unwrap_or_else(|stop| {
                    warnings.push(LexWarning {
                        offset: pos,
                        kind: LexWarningKind::UnterminatedString,
                    });
                    stop
                });
                (end, RegionContext::StringLiteral)
            }
        };
        push(&mut regions, pos, end, context);
        pos = end;
        code_start = end;
    }
    push(&mut regions, code_start, text.len(), RegionContext::Code);
    (regions, warnings)
}

fn block_comment_end(text: &str, from: usize, open: &str, close: &str, nested: bool) -> Option<usize> {
    let mut depth = 1usize;
    let mut pos = from;
    while pos < text.len() {
        let rest = &text[pos..];
        if rest.starts_with(close) {
            depth -= 1;
            pos += close.len();
            if depth == 0 {
                return Some(pos);
            }
        } else if nested && rest.starts_with(open) {
            depth += 1;
            pos += open.len();
        } else {
            pos += rest.chars().next().unwrap().len_utf8();
        }
    }
    None
}

/// End offset (exclusive) of a string literal body starting at `from`, or
/// `Err(stop)` if it is unterminated, with `stop` where the region ends.
fn string_end(text: &str, from: usize, form: &StringForm) -> Result<usize, usize> {
    let mut chars = text[from..].char_indices();
    while let Some((rel, ch)) = chars.next() {
        let at = from + rel;
        if Some(ch) == form.escape_char {
            chars.next();
            continue;
        }
        if text[at..].starts_with(form.delimiter.as_str()) {
            return Ok(at + form.delimiter.len());
        }
        if ch == '\n' && !form.multiline {
            return Err(at);
        }
    }
    Err(text.len())
}

fn context_at(regions: &[Region], offset: usize) -> RegionContext {
    let i = regions.partition_point(|r| r.end <= offset);
    regions.get(i).map_or(RegionContext::Code, |r| r.context)
}

/// Validates `text` and labels each violation with its lexical context.
///
/// The violations are exactly those of [`validate`], in the same order.
pub fn analyze_source(text: &str, profile: &LanguageProfile, config: &MatcherConfig) -> SourceAnalysis {
    let (regions, warnings) = lex_regions(text, profile);
    let violations = validate(text, config)
        .into_iter()
        .map(|violation| ContextViolation {
            file: String::new(),
            context: context_at(&regions, violation.offset),
            violation,
        })
        .collect();
    SourceAnalysis { violations, warnings }
}
