//! Expansion of the bracketed markup hosting forms into standard HTML or
//! XHTML:
//!
//! * `<name attrs [m]>` is a whole element whose content is `m`;
//! * `attr=[m]` is an attribute value;
//! * `<![MDATA[m]]>` is a verbatim section.
//!
//! Scanning is shallow: start tags, attributes, comments and CDATA sections
//! are recognized lexically and everything else is copied through byte for
//! byte. Payload ends are found by matcher counting only.

use std::ops::Range;

use thiserror::Error;

use crate::config::MatcherConfig;
use crate::scan::{scan_embedded, ScanError};
use crate::xmltext::{cdata_chain, escape_attribute, escape_content};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MlDialect {
    /// `script` and `style` content is raw text.
    #[default]
    Html,
    /// Entity escaping applies everywhere; verbatim sections become CDATA.
    Xhtml,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MlxError {
    #[error("payload starting at offset {offset} is not matchertext")]
    NotMatchertext { offset: usize, source: ScanError },
    #[error("extension starting at offset {offset} is not terminated")]
    UnterminatedExtension { offset: usize },
    #[error(
        "content of <{tag}> at offset {offset} contains its own end tag; \
         entity escaping is unavailable inside raw-text elements"
    )]
    RawContextConflict { offset: usize, tag: String },
}

const MDATA_OPEN: &str = "<![MDATA[";
const CDATA_OPEN: &str = "<![CDATA[";

/// Expands every hosting extension in `input`.
pub fn expand_ml(input: &str, dialect: MlDialect) -> Result<String, MlxError> {
    Ok(Expander::new(input, dialect).run()?.out)
}

/// Byte ranges of the raw payloads of the top-level extensions in `input`,
/// in document order. Each range is exactly the embedded text, untouched.
pub fn extension_payloads(input: &str) -> Result<Vec<Range<usize>>, MlxError> {
    Ok(Expander::new(input, MlDialect::Xhtml).run()?.payloads)
}

struct Expander<'a> {
    src: &'a str,
    out: String,
    dialect: MlDialect,
    config: MatcherConfig,
    payloads: Vec<Range<usize>>,
}

fn is_name_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b':' | b'.')
}

fn is_raw_text_element(name: &str) -> bool {
    name.eq_ignore_ascii_case("script") || name.eq_ignore_ascii_case("style")
}

fn find_ci(haystack: &str, needle: &str) -> Option<usize> {
    let (h, n) = (haystack.as_bytes(), needle.as_bytes());
    (0..=h.len().saturating_sub(n.len())).find(|&i| h.len() >= n.len() && h[i..i + n.len()].eq_ignore_ascii_case(n))
}

impl<'a> Expander<'a> {
    fn new(src: &'a str, dialect: MlDialect) -> Self {
        Expander {
            src,
            out: String::with_capacity(src.len()),
            dialect,
            config: MatcherConfig::standard(),
            payloads: Vec::new(),
        }
    }

    fn run(mut self) -> Result<Self, MlxError> {
        let bytes = self.src.as_bytes();
        let mut pos = 0;
        while pos < bytes.len() {
            let rest = &self.src[pos..];
            if rest.starts_with(MDATA_OPEN) {
                pos = self.mdata(pos)?;
            } else if rest.starts_with("<!--") {
                pos = self.copy_through(pos, "<!--".len(), "-->");
            } else if rest.starts_with(CDATA_OPEN) {
                pos = self.copy_through(pos, CDATA_OPEN.len(), "]]>");
            } else if bytes[pos] == b'<' && bytes.get(pos + 1).is_some_and(u8::is_ascii_alphabetic) {
                pos = self.start_tag(pos)?;
            } else {
                let ch = rest.chars().next().unwrap();
                self.out.push(ch);
                pos += ch.len_utf8();
            }
        }
        Ok(self)
    }

    /// Copies from `pos` through the first `end` after `skip` bytes, or to
    /// the end of input.
    fn copy_through(&mut self, pos: usize, skip: usize, end: &str) -> usize {
        let stop = self.src[pos + skip..]
            .find(end)
            .map_or(self.src.len(), |i| pos + skip + i + end.len());
        self.out.push_str(&self.src[pos..stop]);
        stop
    }

    /// Locates the payload of a bracket at `open`; returns the offset of the
    /// matching `]`.
    fn payload_end(&mut self, open: usize, ext_start: usize) -> Result<usize, MlxError> {
        let close = scan_embedded(self.src, open, &self.config).map_err(|e| match e {
            ScanError::NoMatchingCloser { .. } => MlxError::UnterminatedExtension { offset: ext_start },
            source => MlxError::NotMatchertext {
                offset: open + 1,
                source,
            },
        })?;
        self.payloads.push(open + 1..close);
        Ok(close)
    }

    fn mdata(&mut self, pos: usize) -> Result<usize, MlxError> {
        let open = pos + MDATA_OPEN.len() - 1;
        let close = self.payload_end(open, pos)?;
        if !self.src[close + 1..].starts_with("]>") {
            return Err(MlxError::UnterminatedExtension { offset: pos });
        }
        let payload =
            nested_sections_to_cdata(&self.src[open + 1..close], &self.config).map_err(|e| shift(e, open + 1))?;
        match self.dialect {
            MlDialect::Xhtml => self.out.push_str(&cdata_chain(&payload)),
            MlDialect::Html => self.out.push_str(&escape_content(&payload)),
        }
        Ok(close + 3)
    }

    fn start_tag(&mut self, pos: usize) -> Result<usize, MlxError> {
        let bytes = self.src.as_bytes();
        let mut at = pos + 1;
        while at < bytes.len() && is_name_char(bytes[at]) {
            at += 1;
        }
        let name = &self.src[pos + 1..at];
        self.out.push_str(&self.src[pos..at]);

        while at < bytes.len() {
            let b = bytes[at];
            if b == b' ' && bytes.get(at + 1) == Some(&b'[') && !bytes[at - 1].is_ascii_whitespace() {
                return self.element_content(pos, name, at + 1);
            }
            if b == b'>' {
                self.out.push('>');
                at += 1;
                if self.dialect == MlDialect::Html && is_raw_text_element(name) {
                    let close_tag = format!("</{name}");
                    let stop = find_ci(&self.src[at..], &close_tag).map_or(self.src.len(), |i| at + i);
                    self.out.push_str(&self.src[at..stop]);
                    at = stop;
                }
                return Ok(at);
            }
            if b.is_ascii_whitespace() || b == b'/' || b == b'=' || !is_attr_name_start(b) {
                let ch = self.src[at..].chars().next().unwrap();
                self.out.push(ch);
                at += ch.len_utf8();
                continue;
            }
            at = self.attribute(at)?;
        }
        Ok(at)
    }

    fn attribute(&mut self, start: usize) -> Result<usize, MlxError> {
        let bytes = self.src.as_bytes();
        let mut at = start;
        while at < bytes.len() && !bytes[at].is_ascii_whitespace() && !matches!(bytes[at], b'=' | b'>' | b'/' | b'[') {
            at += 1;
        }
        self.out.push_str(&self.src[start..at]);
        if bytes.get(at) != Some(&b'=') {
            return Ok(at);
        }
        self.out.push('=');
        at += 1;
        match bytes.get(at) {
            Some(b'[') => {
                let close = self.payload_end(at, start)?;
                self.out.push('"');
                self.out.push_str(&escape_attribute(&self.src[at + 1..close]));
                self.out.push('"');
                Ok(close + 1)
            }
            Some(&q @ (b'"' | b'\'')) => {
                let stop = self.src[at + 1..]
                    .find(q as char)
                    .map_or(self.src.len(), |i| at + 1 + i + 1);
                self.out.push_str(&self.src[at..stop]);
                Ok(stop)
            }
            _ => {
                let stop = self.src[at..]
                    .find(|c: char| c.is_ascii_whitespace() || c == '>')
                    .map_or(self.src.len(), |i| at + i);
                self.out.push_str(&self.src[at..stop]);
                Ok(stop)
            }
        }
    }

    fn element_content(&mut self, tag_start: usize, name: &str, open: usize) -> Result<usize, MlxError> {
        let close = self.payload_end(open, tag_start)?;
        if self.src.as_bytes().get(close + 1) != Some(&b'>') {
            return Err(MlxError::UnterminatedExtension { offset: tag_start });
        }
        let payload = &self.src[open + 1..close];
        self.out.push('>');
        if self.dialect == MlDialect::Html && is_raw_text_element(name) {
            if find_ci(payload, &format!("</{name}")).is_some() {
                return Err(MlxError::RawContextConflict {
                    offset: tag_start,
                    tag: name.to_string(),
                });
            }
            self.out.push_str(payload);
        } else {
            self.out.push_str(&escape_content(payload));
        }
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push('>');
        Ok(close + 2)
    }
}

fn is_attr_name_start(b: u8) -> bool {
    !matches!(b, b'"' | b'\'' | b'<' | b'[' | b']')
}

fn shift(e: MlxError, by: usize) -> MlxError {
    match e {
        MlxError::NotMatchertext { offset, source } => MlxError::NotMatchertext {
            offset: offset + by,
            source,
        },
        MlxError::UnterminatedExtension { offset } => MlxError::UnterminatedExtension { offset: offset + by },
        MlxError::RawContextConflict { offset, tag } => MlxError::RawContextConflict {
            offset: offset + by,
            tag,
        },
    }
}

/// Rewrites verbatim sections nested inside a verbatim payload into their
/// CDATA spelling, innermost first. Nothing else in the payload changes.
fn nested_sections_to_cdata(payload: &str, config: &MatcherConfig) -> Result<String, MlxError> {
    let Some(first) = payload.find(MDATA_OPEN) else {
        return Ok(payload.to_string());
    };
    let mut out = String::with_capacity(payload.len() + 16);
    let mut pos = 0;
    let mut next = Some(first);
    while let Some(start) = next {
        out.push_str(&payload[pos..start]);
        let open = start + MDATA_OPEN.len() - 1;
        let close = scan_embedded(payload, open, config).map_err(|e| match e {
            ScanError::NoMatchingCloser { .. } => MlxError::UnterminatedExtension { offset: start },
            source => MlxError::NotMatchertext {
                offset: open + 1,
                source,
            },
        })?;
        if payload[close + 1..].starts_with("]>") {
            let inner = nested_sections_to_cdata(&payload[open + 1..close], config).map_err(|e| shift(e, open + 1))?;
            out.push_str(&cdata_chain(&inner));
            pos = close + 3;
        } else {
            // not a section after all; leave the text alone
            out.push_str(&payload[start..open + 1]);
            pos = open + 1;
        }
        next = payload[pos..].find(MDATA_OPEN).map(|i| pos + i);
    }
    out.push_str(&payload[pos..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(input: &str) -> String {
        expand_ml(input, MlDialect::Xhtml).unwrap()
    }
    fn h(input: &str) -> String {
        expand_ml(input, MlDialect::Html).unwrap()
    }

    #[test]
    fn element_content() {
        assert_eq!(
            h(r#"<code [printf("Hello world!");]>"#),
            r#"<code>printf("Hello world!");</code>"#
        );
        assert_eq!(h("<code []>"), "<code></code>");
        assert_eq!(
            h(r#"<pre class="x" [a<b & c>d]>"#),
            r#"<pre class="x">a&lt;b &amp; c&gt;d</pre>"#
        );
    }

    #[test]
    fn raw_text_elements() {
        assert_eq!(
            h("<script [if (a < b && c) {}]>"),
            "<script>if (a < b && c) {}</script>"
        );
        assert_eq!(x("<script [a<b]>"), "<script>a&lt;b</script>");
        let err = expand_ml(r#"<script [s = "a </script> end tag";]>"#, MlDialect::Html).unwrap_err();
        assert!(matches!(err, MlxError::RawContextConflict { offset: 0, ref tag } if tag == "script"));
        assert_eq!(
            x(r#"<script [s = "</script>";]>"#),
            r#"<script>s = "&lt;/script&gt;";</script>"#
        );
        // already-raw content is not rescanned for extensions
        assert_eq!(h("<style>a [x]=[y]</style>"), "<style>a [x]=[y]</style>");
    }

    #[test]
    fn attributes() {
        assert_eq!(
            h("<button onclick=[okClicked()]>OK</button>"),
            r#"<button onclick="okClicked()">OK</button>"#
        );
        assert_eq!(
            h(r#"<button onclick=[emitCharacter("'")]>Emit</button>"#),
            r#"<button onclick="emitCharacter(&quot;'&quot;)">Emit</button>"#
        );
        assert_eq!(h("<a b=[] c='[' d=e>"), r#"<a b="" c='[' d=e>"#);
        assert_eq!(h("<p title=[x] [y]>"), r#"<p title="x">y</p>"#);
    }

    #[test]
    fn mdata_sections() {
        assert_eq!(x("<![MDATA[<b>bold</b>]]>"), "<![CDATA[<b>bold</b>]]>");
        assert_eq!(
            x("<![MDATA[<![CDATA[character data]]>]]>"),
            "<![CDATA[<![CDATA[character data]]]]><![CDATA[>]]>"
        );
        assert_eq!(
            x("<![MDATA[<![MDATA[character data]]>]]>"),
            "<![CDATA[<![CDATA[character data]]]]><![CDATA[>]]>"
        );
        assert_eq!(h("<![MDATA[<b>&</b>]]>"), "&lt;b&gt;&amp;&lt;/b&gt;");
        assert_eq!(x("<![MDATA[]]>"), "<![CDATA[]]>");
    }

    #[test]
    fn payload_ranges() {
        let input = "<p [a(b)c]> <a href=[x[y]]>t</a> <![MDATA[<![MDATA[z]]>]]>";
        let got: Vec<&str> = extension_payloads(input)
            .unwrap()
            .into_iter()
            .map(|r| &input[r])
            .collect();
        assert_eq!(got, ["a(b)c", "x[y]", "<![MDATA[z]]>"]);
    }

    #[test]
    fn passthrough() {
        for input in [
            "",
            "plain [text] with (matchers",
            "<p class='a' id=b>x</p><br/><!-- <code [x]> --><![CDATA[ [ ]]>",
            "<code  [two spaces]>",
            "a < b",
            "<p\n[x]>",
        ] {
            assert_eq!(h(input), input);
            assert_eq!(x(input), input);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            expand_ml("<code [a(]>", MlDialect::Html),
            Err(MlxError::NotMatchertext { offset: 7, .. })
        ));
        assert!(matches!(
            expand_ml("<code [abc", MlDialect::Html),
            Err(MlxError::UnterminatedExtension { offset: 0 })
        ));
        assert!(matches!(
            expand_ml("<code [abc] x>", MlDialect::Html),
            Err(MlxError::UnterminatedExtension { offset: 0 })
        ));
        assert!(matches!(
            expand_ml("<![MDATA[abc]>", MlDialect::Xhtml),
            Err(MlxError::UnterminatedExtension { .. })
        ));
        assert!(matches!(
            expand_ml("x <a href=[(]>", MlDialect::Xhtml),
            Err(MlxError::NotMatchertext { offset: 11, .. })
        ));
    }

    #[test]
    fn nested_extensions_in_content_are_left_alone() {
        assert_eq!(x("<code [<b [x]>]>"), "<code>&lt;b [x]&gt;</code>");
        assert_eq!(x("<code [<a h=[x]>]>"), "<code>&lt;a h=[x]&gt;</code>");
    }
}
