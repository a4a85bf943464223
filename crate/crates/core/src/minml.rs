//! MinML: markup written with brackets instead of start and end tags.
//!
//! The character right before each `[` decides what the group means:
//!
//! | Source          | Node                        |
//! |-----------------|-----------------------------|
//! | `em[...]`       | element `em`                |
//! | `"[...]`        | quotation                   |
//! | `-[...]`        | comment (verbatim content)  |
//! | `+[...]`        | verbatim text               |
//! | `[star]`        | character reference `star`  |
//! | `[(<)]`, `[(>)]`, `[[<]]`, `[[>]]`, `[{<}]`, `[{>}]` | a single matcher |
//!
//! A sigil takes precedence over an element name ending in `-`, and the name
//! must be directly adjacent to its bracket.

use std::fmt::Write;

use thiserror::Error;

use crate::config::MatcherConfig;
use crate::scan::scan_embedded;
use crate::validate::{validate, Violation};
use crate::xmltext::{cdata_chain, escape_markup_start};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinMLNode {
    Element { name: String, children: Vec<MinMLNode> },
    Text { content: String },
    CharRef { name: String },
    Quotation { children: Vec<MinMLNode> },
    Comment { content: String },
    Verbatim { content: String },
    MatcherLiteral { ch: char },
}

impl MinMLNode {
    pub fn text(content: impl Into<String>) -> Self {
        MinMLNode::Text {
            content: content.into(),
        }
    }

    pub fn element(name: impl Into<String>, children: Vec<MinMLNode>) -> Self {
        MinMLNode::Element {
            name: name.into(),
            children,
        }
    }

    /// Nesting depth of element and quotation structure; leaves count as 0.
    pub fn depth(&self) -> usize {
        match self {
            MinMLNode::Element { children, .. } | MinMLNode::Quotation { children } => {
                1 + children.iter().map(MinMLNode::depth).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinmlError {
    #[error("input is not matchertext ({} violation(s))", .0.len())]
    NotMatchertext(Vec<Violation>),
    #[error("bracket group at offset {offset} is neither a matcher escape nor a reference name: {content:?}")]
    BareBracketGroup { offset: usize, content: String },
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '-')
}

fn is_numeric_ref(s: &str) -> bool {
    match s.strip_prefix('#') {
        Some(hex) if hex.starts_with(['x', 'X']) => hex.len() > 1 && hex[1..].bytes().all(|b| b.is_ascii_hexdigit()),
        Some(dec) => !dec.is_empty() && dec.bytes().all(|b| b.is_ascii_digit()),
        None => false,
    }
}

fn matcher_escape(content: &str) -> Option<char> {
    Some(match content {
        "(<)" => '(',
        "(>)" => ')',
        "[<]" => '[',
        "[>]" => ']',
        "{<}" => '{',
        "{>}" => '}',
        _ => return None,
    })
}

/// Splits an element name off the end of pending text, if there is one.
fn take_trailing_name(text: &mut String) -> Option<String> {
    if !text.chars().next_back().is_some_and(|c| c.is_ascii_alphanumeric()) {
        return None;
    }
    let run_start = text
        .char_indices()
        .rev()
        .take_while(|&(_, c)| c.is_ascii_alphanumeric() || c == '-')
        .last()
        .map(|(i, _)| i)?;
    let name_start = run_start + text[run_start..].find(|c: char| c.is_ascii_alphabetic())?;
    let name = text[name_start..].to_string();
    text.truncate(name_start);
    Some(name)
}

/// Parses MinML source into a node list.
pub fn parse_minml(text: &str) -> Result<Vec<MinMLNode>, MinmlError> {
    let config = MatcherConfig::standard();
    let violations = validate(text, &config);
    if !violations.is_empty() {
        return Err(MinmlError::NotMatchertext(violations));
    }
    parse_range(text, 0, text.len(), &config)
}

fn parse_range(src: &str, start: usize, end: usize, config: &MatcherConfig) -> Result<Vec<MinMLNode>, MinmlError> {
    let mut nodes = Vec::new();
    let mut pending = String::new();
    let mut pos = start;
    while pos < end {
        let ch = src[pos..].chars().next().unwrap();
        if ch != '[' {
            pending.push(ch);
            pos += ch.len_utf8();
            continue;
        }
        let close = scan_embedded(src, pos, config).expect("source validated as matchertext");
        let inner = &src[pos + 1..close];

        let node = if let Some(name) = take_trailing_name(&mut pending) {
            MinMLNode::Element {
                name,
                children: parse_range(src, pos + 1, close, config)?,
            }
        } else {
            match pending.chars().next_back() {
                Some('"') => {
                    pending.pop();
                    MinMLNode::Quotation {
                        children: parse_range(src, pos + 1, close, config)?,
                    }
                }
                Some('-') => {
                    pending.pop();
                    MinMLNode::Comment {
                        content: inner.to_string(),
                    }
                }
                Some('+') => {
                    pending.pop();
                    MinMLNode::Verbatim {
                        content: inner.to_string(),
                    }
                }
                _ => {
                    if let Some(ch) = matcher_escape(inner) {
                        MinMLNode::MatcherLiteral { ch }
                    } else if is_name(inner) || is_numeric_ref(inner) {
                        MinMLNode::CharRef {
                            name: inner.to_string(),
                        }
                    } else {
                        return Err(MinmlError::BareBracketGroup {
                            offset: pos,
                            content: inner.to_string(),
                        });
                    }
                }
            }
        };
        if !pending.is_empty() {
            nodes.push(MinMLNode::Text {
                content: std::mem::take(&mut pending),
            });
        }
        nodes.push(node);
        pos = close + 1;
    }
    if !pending.is_empty() {
        nodes.push(MinMLNode::Text { content: pending });
    }
    Ok(nodes)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Html,
    Xml,
}

pub fn minml_to_html(nodes: &[MinMLNode]) -> String {
    let mut out = String::new();
    emit(nodes, Target::Html, &mut out);
    out
}

pub fn minml_to_xml(nodes: &[MinMLNode]) -> String {
    let mut out = String::new();
    emit(nodes, Target::Xml, &mut out);
    out
}

fn emit(nodes: &[MinMLNode], target: Target, out: &mut String) {
    for node in nodes {
        match node {
            MinMLNode::Element { name, children } => {
                let _ = write!(out, "<{name}>");
                emit(children, target, out);
                let _ = write!(out, "</{name}>");
            }
            MinMLNode::Text { content } => out.push_str(&escape_markup_start(content)),
            MinMLNode::CharRef { name } => {
                let _ = write!(out, "&{name};");
            }
            MinMLNode::Quotation { children } => {
                let (open, close) = match target {
                    Target::Html => ("&ldquo;", "&rdquo;"),
                    Target::Xml => ("&#x201C;", "&#x201D;"),
                };
                out.push_str(open);
                emit(children, target, out);
                out.push_str(close);
            }
            MinMLNode::Comment { content } => {
                let _ = write!(out, "<!--{content}-->");
            }
            MinMLNode::Verbatim { content } => match target {
                Target::Html => out.push_str(&escape_markup_start(content)),
                Target::Xml => out.push_str(&cdata_chain(&verbatim_for_xml(content))),
            },
            MinMLNode::MatcherLiteral { ch } => out.push(*ch),
        }
    }
}

/// Verbatim text that itself contains `+[...]` verbatim groups is rendered
/// with those inner groups in their XML spelling, recursively, so that
/// `+[+[example]]` reads in XML as a CDATA section quoting a CDATA section.
fn verbatim_for_xml(content: &str) -> String {
    let config = MatcherConfig::standard();
    let mut out = String::with_capacity(content.len());
    let mut pos = 0;
    let mut search = 0;
    while let Some(rel) = content[search..].find("+[") {
        let plus = search + rel;
        match scan_embedded(content, plus + 1, &config) {
            Ok(close) => {
                out.push_str(&content[pos..plus]);
                out.push_str(&cdata_chain(&verbatim_for_xml(&content[plus + 2..close])));
                pos = close + 1;
                search = pos;
            }
            Err(_) => search = plus + 2,
        }
    }
    out.push_str(&content[pos..]);
    out
}
