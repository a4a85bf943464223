//! Matchertext resource identifiers.
//!
//! An MRI is written `scheme[body]` instead of `scheme:body`. The body is
//! matchertext over the graphical-only alphabet, so an MRI is
//! self-delimiting and other MRIs nest inside it unescaped:
//!
//! ```
//! use matchertext::mri::{parse_mri, mri_to_uri};
//!
//! let mri = parse_mri("http[//search.engine/linksto?site=http[//my.site/]&results=50]").unwrap();
//! assert_eq!(
//!     mri_to_uri(&mri),
//!     "http://search.engine/linksto?site=http%3A%2F%2Fmy.site%2F&results=50",
//! );
//! ```
//!
//! Conversion to a URI is lossless; the reverse direction only wraps the
//! body and percent-encodes what must be, so it never rebuilds nested MRIs.

use std::fmt;

use thiserror::Error;

use crate::config::MatcherConfig;
use crate::scan::{scan_embedded, ScanError};
use crate::validate::{matched_offsets, validate, Violation, ViolationKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mri {
    pub scheme: String,
    pub body: String,
}

impl fmt::Display for Mri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.scheme, self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MriError {
    #[error("missing or malformed scheme")]
    BadScheme,
    #[error("scheme is not followed by a bracketed body")]
    MissingBrackets,
    #[error("body is not matchertext: {0}")]
    NotMatchertext(Violation),
    #[error("character {found:?} at offset {offset} is not allowed in an identifier")]
    ForbiddenChar { offset: usize, found: char },
    #[error("unexpected text after the closing bracket at offset {offset}")]
    TrailingGarbage { offset: usize },
    #[error("malformed host {0:?}")]
    MalformedHost(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UriDecodeError {
    #[error("bad percent escape at offset {offset}")]
    BadPercentTriplet { offset: usize },
    #[error("matchertext escape at offset {offset} is never closed")]
    UnterminatedEmbed { offset: usize },
    #[error("matchertext escape at offset {offset} is not matchertext: {source}")]
    NotMatchertext { offset: usize, source: ScanError },
    #[error("percent escapes do not decode to UTF-8")]
    InvalidUtf8,
}

/// The host part of an MRI authority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostKind {
    Domain(String),
    /// Dotted-decimal payload of `ip4[...]`.
    Ip4(String),
    /// Hex-colon payload of `ip6[...]` (or of a legacy `[...]` literal).
    Ip6(String),
    NestedMri(Mri),
}

pub(crate) fn is_scheme_start(ch: char) -> bool {
    ch.is_ascii_alphabetic()
}

pub(crate) fn is_scheme_char(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || matches!(ch, '+' | '-' | '.')
}

fn is_valid_scheme(s: &str) -> bool {
    s.chars().next().is_some_and(is_scheme_start) && s.chars().all(is_scheme_char)
}

fn is_unreserved(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || matches!(ch, '-' | '.' | '_' | '~')
}

fn is_sub_delim(ch: char) -> bool {
    matches!(ch, '!' | '$' | '&' | '\'' | '(' | ')' | '*' | '+' | ',' | ';' | '=')
}

/// Characters that may appear verbatim inside a bracket quote.
fn is_quote_allowed(ch: char) -> bool {
    is_unreserved(ch) || is_sub_delim(ch) || matches!(ch, ':' | '@' | '/' | '?')
}

/// Characters that may appear verbatim at the top level of a URI body.
fn is_body_allowed(ch: char) -> bool {
    is_quote_allowed(ch) || ch == '#'
}

fn is_hex_triplet(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() >= 3 && b[0] == b'%' && b[1].is_ascii_hexdigit() && b[2].is_ascii_hexdigit()
}

/// Appends the uppercase percent-encoding of every UTF-8 byte of `ch`.
pub fn push_percent_encoded(out: &mut String, ch: char) {
    const HEX: &[u8; 16] = b"0123456789ABCDEF";
    let mut buf = [0u8; 4];
    for &b in ch.encode_utf8(&mut buf).as_bytes() {
        out.push('%');
        out.push(HEX[(b >> 4) as usize] as char);
        out.push(HEX[(b & 0xF) as usize] as char);
    }
}

/// Percent-encodes everything except unreserved characters.
pub fn percent_encode_strict(s: &str) -> String {
    let mut out = String::with_capacity(s.len() * 3);
    for ch in s.chars() {
        if is_unreserved(ch) {
            out.push(ch);
        } else {
            push_percent_encoded(&mut out, ch);
        }
    }
    out
}

/// Parses `scheme[body]` with the body checked against the graphical-only
/// configuration.
pub fn parse_mri(text: &str) -> Result<Mri, MriError> {
    parse_mri_with(text, &MatcherConfig::graphical())
}

/// Parses an MRI whose body is checked against `config`.
pub fn parse_mri_with(text: &str, config: &MatcherConfig) -> Result<Mri, MriError> {
    let scheme_end = text.find(|c: char| !is_scheme_char(c)).unwrap_or(text.len());
    let scheme = &text[..scheme_end];
    if !is_valid_scheme(scheme) {
        return Err(MriError::BadScheme);
    }
    if !text[scheme_end..].starts_with('[') {
        return Err(MriError::MissingBrackets);
    }
    let close = match scan_embedded(text, scheme_end, config) {
        Ok(close) => close,
        Err(ScanError::NoMatchingCloser { .. }) => {
            // report the first real problem in the body, if any
            return Err(
                body_error(&text[scheme_end + 1..], scheme_end + 1, config).unwrap_or(MriError::MissingBrackets)
            );
        }
        Err(ScanError::ForbiddenChar { offset, found }) => return Err(MriError::ForbiddenChar { offset, found }),
        Err(_) => {
            return Err(body_error(&text[scheme_end + 1..], scheme_end + 1, config).unwrap_or(MriError::MissingBrackets))
        }
    };
    if close + 1 != text.len() {
        return Err(MriError::TrailingGarbage { offset: close + 1 });
    }
    Ok(Mri {
        scheme: scheme.to_string(),
        body: text[scheme_end + 1..close].to_string(),
    })
}

fn body_error(body: &str, shift: usize, config: &MatcherConfig) -> Option<MriError> {
    let v = validate(body, config).into_iter().next()?;
    Some(match v.kind {
        ViolationKind::ForbiddenChar => MriError::ForbiddenChar {
            offset: v.offset + shift,
            found: v.found,
        },
        ViolationKind::UnmatchedOpener => return None,
        _ => MriError::NotMatchertext(Violation {
            offset: v.offset + shift,
            ..v
        }),
    })
}

/// Converts an MRI to a conventional URI.
///
/// Nested MRIs are converted recursively and then percent-encoded except
/// for unreserved characters; bracket quotes keep their brackets as
/// `%5B`...`%5D`; `ip4[...]` and `ip6[...]` hosts become ordinary IP hosts.
pub fn mri_to_uri(mri: &Mri) -> String {
    let config = MatcherConfig::standard();
    let mut out = String::with_capacity(mri.scheme.len() + mri.body.len() + 8);
    out.push_str(&mri.scheme);
    out.push(':');
    let body = mri.body.as_str();
    match body.strip_prefix("//") {
        Some(rest) => {
            out.push_str("//");
            let auth_end = depth0_find(rest, &['/', '?', '#'], &config).unwrap_or(rest.len());
            convert_authority(&rest[..auth_end], &config, &mut out);
            convert_segment(&rest[auth_end..], &config, &mut out);
        }
        None => convert_segment(body, &config, &mut out),
    }
    out
}

/// First offset of any of `targets` outside matcher nesting.
fn depth0_find(s: &str, targets: &[char], config: &MatcherConfig) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in s.char_indices() {
        if config.is_opener(ch) {
            depth += 1;
        } else if config.is_closer(ch) {
            depth = depth.saturating_sub(1);
        } else if depth == 0 && targets.contains(&ch) {
            return Some(i);
        }
    }
    None
}

fn depth0_rfind(s: &str, target: char, config: &MatcherConfig) -> Option<usize> {
    let mut depth = 0usize;
    let mut found = None;
    for (i, ch) in s.char_indices() {
        if config.is_opener(ch) {
            depth += 1;
        } else if config.is_closer(ch) {
            depth = depth.saturating_sub(1);
        } else if depth == 0 && ch == target {
            found = Some(i);
        }
    }
    found
}

fn convert_authority(auth: &str, config: &MatcherConfig, out: &mut String) {
    let host_start = match depth0_rfind(auth, '@', config) {
        Some(at) => {
            convert_segment(&auth[..=at], config, out);
            at + 1
        }
        None => 0,
    };
    let hostport = &auth[host_start..];
    let (host, port) = match depth0_rfind(hostport, ':', config) {
        Some(colon) if hostport[colon + 1..].bytes().all(|b| b.is_ascii_digit()) => {
            (&hostport[..colon], &hostport[colon..])
        }
        _ => (hostport, ""),
    };
    match classify_mri_host(host) {
        Ok(HostKind::Ip4(addr)) => out.push_str(&addr),
        Ok(HostKind::Ip6(addr)) => {
            out.push('[');
            out.push_str(&addr);
            out.push(']');
        }
        _ => convert_segment(host, config, out),
    }
    out.push_str(port);
}

fn convert_segment(s: &str, config: &MatcherConfig, out: &mut String) {
    let mut pos = 0;
    let mut prev: Option<char> = None;
    while pos < s.len() {
        let ch = s[pos..].chars().next().unwrap();
        if is_scheme_start(ch) && !prev.is_some_and(is_scheme_char) {
            let run_end = s[pos..].find(|c: char| !is_scheme_char(c)).map_or(s.len(), |i| pos + i);
            if s[run_end..].starts_with('[') {
                if let Ok(close) = scan_embedded(s, run_end, config) {
                    let nested = Mri {
                        scheme: s[pos..run_end].to_string(),
                        body: s[run_end + 1..close].to_string(),
                    };
                    out.push_str(&percent_encode_strict(&mri_to_uri(&nested)));
                    pos = close + 1;
                    prev = Some(']');
                    continue;
                }
            }
            out.push_str(&s[pos..run_end]);
            prev = s[..run_end].chars().next_back();
            pos = run_end;
            continue;
        }
        if ch == '[' {
            if let Ok(close) = scan_embedded(s, pos, config) {
                out.push_str("%5B");
                for inner in s[pos + 1..close].chars() {
                    if is_quote_allowed(inner) {
                        out.push(inner);
                    } else {
                        push_percent_encoded(out, inner);
                    }
                }
                out.push_str("%5D");
                pos = close + 1;
                prev = Some(']');
                continue;
            }
        }
        if ch == '%' && is_hex_triplet(&s[pos..]) {
            out.push_str(&s[pos..pos + 3]);
            pos += 3;
            prev = Some(s[..pos].chars().next_back().unwrap());
            continue;
        }
        if is_body_allowed(ch) {
            out.push(ch);
        } else {
            push_percent_encoded(out, ch);
        }
        pos += ch.len_utf8();
        prev = Some(ch);
    }
}

/// Wraps a conventional URI as an MRI.
///
/// Unmatched matchers and non-graphical characters in the body are
/// percent-encoded; existing percent escapes are kept as they are.
pub fn uri_to_mri(uri: &str) -> Result<Mri, MriError> {
    let colon = uri.find(':').ok_or(MriError::BadScheme)?;
    let scheme = &uri[..colon];
    if !is_valid_scheme(scheme) {
        return Err(MriError::BadScheme);
    }
    let rest = &uri[colon + 1..];
    let config = MatcherConfig::graphical();
    let matched = matched_offsets(rest, &config);
    let mut matched = matched.iter().peekable();
    let mut body = String::with_capacity(rest.len());
    for (at, ch) in rest.char_indices() {
        let keep = if config.is_matcher(ch) {
            matched.next_if(|&&m| m == at).is_some()
        } else {
            config.in_alphabet(ch)
        };
        if keep {
            body.push(ch);
        } else {
            push_percent_encoded(&mut body, ch);
        }
    }
    Ok(Mri {
        scheme: scheme.to_string(),
        body,
    })
}

/// Decodes a URI component containing `%XX` escapes and `%[m]` matchertext
/// escapes. The payload `m` is inserted verbatim.
pub fn decode_uri_extended(component: &str) -> Result<String, UriDecodeError> {
    decode_uri_extended_with(component, &MatcherConfig::graphical())
}

pub fn decode_uri_extended_with(component: &str, config: &MatcherConfig) -> Result<String, UriDecodeError> {
    let bytes = component.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(bytes.len());
    let mut pos = 0;
    while pos < bytes.len() {
        if bytes[pos] != b'%' {
            out.push(bytes[pos]);
            pos += 1;
            continue;
        }
        if bytes.get(pos + 1) == Some(&b'[') {
            let close = scan_embedded(component, pos + 1, config).map_err(|e| match e {
                ScanError::NoMatchingCloser { .. } => UriDecodeError::UnterminatedEmbed { offset: pos },
                source => UriDecodeError::NotMatchertext { offset: pos, source },
            })?;
            out.extend_from_slice(&bytes[pos + 2..close]);
            pos = close + 1;
            continue;
        }
        if !is_hex_triplet(&component[pos..]) {
            return Err(UriDecodeError::BadPercentTriplet { offset: pos });
        }
        let value = u8::from_str_radix(&component[pos + 1..pos + 3], 16).expect("checked hex digits");
        out.push(value);
        pos += 3;
    }
    String::from_utf8(out).map_err(|_| UriDecodeError::InvalidUtf8)
}

/// Classifies the host field of an MRI authority.
pub fn classify_mri_host(host: &str) -> Result<HostKind, MriError> {
    let malformed = || MriError::MalformedHost(host.to_string());
    let ip6_ok = |p: &str| !p.is_empty() && p.chars().all(|c| c.is_ascii_hexdigit() || c == ':' || c == '.');

    if let Some(payload) = host.strip_prefix("ip4[").and_then(|r| r.strip_suffix(']')) {
        let ok = !payload.is_empty() && payload.chars().all(|c| c.is_ascii_digit() || c == '.');
        return if ok {
            Ok(HostKind::Ip4(payload.to_string()))
        } else {
            Err(malformed())
        };
    }
    if let Some(payload) = host.strip_prefix("ip6[").and_then(|r| r.strip_suffix(']')) {
        return if ip6_ok(payload) {
            Ok(HostKind::Ip6(payload.to_string()))
        } else {
            Err(malformed())
        };
    }
    if let Some(payload) = host.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        return if ip6_ok(payload) {
            Ok(HostKind::Ip6(payload.to_string()))
        } else {
            Err(malformed())
        };
    }
    if host.contains('[') {
        return parse_mri(host).map(HostKind::NestedMri).map_err(|_| malformed());
    }
    let config = MatcherConfig::graphical();
    let domain_ok = host
        .chars()
        .all(|c| config.in_alphabet(c) && !config.is_matcher(c) && !matches!(c, '/' | '?' | '#' | '@' | ':'));
    if domain_ok {
        Ok(HostKind::Domain(host.to_string()))
    } else {
        Err(malformed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mri(scheme: &str, body: &str) -> Mri {
        Mri {
            scheme: scheme.into(),
            body: body.into(),
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_mri("http[//my.site/path]").unwrap(),
            mri("http", "//my.site/path")
        );
        assert_eq!(parse_mri("x[]").unwrap(), mri("x", ""));
        assert_eq!(parse_mri("http://my.site/"), Err(MriError::MissingBrackets));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_mri("[x]"), Err(MriError::BadScheme));
        assert_eq!(parse_mri("1a[x]"), Err(MriError::BadScheme));
        assert_eq!(parse_mri("http"), Err(MriError::MissingBrackets));
        assert_eq!(parse_mri("http[x"), Err(MriError::MissingBrackets));
        assert_eq!(
            parse_mri("http[a b]"),
            Err(MriError::ForbiddenChar { offset: 6, found: ' ' })
        );
        assert_eq!(parse_mri("http[x]y"), Err(MriError::TrailingGarbage { offset: 7 }));
        assert!(matches!(parse_mri("http[(]"), Err(MriError::NotMatchertext(_))));
        assert!(matches!(
            parse_mri("http[a b"),
            Err(MriError::ForbiddenChar { offset: 6, .. })
        ));
        assert!(parse_mri_with("http[a b]", &MatcherConfig::standard()).is_ok());
    }

    #[test]
    fn to_uri_nested_queries() {
        let m = parse_mri("http[//search.engine/linksto?site=http[//my.site/]&results=50]").unwrap();
        assert_eq!(
            mri_to_uri(&m),
            "http://search.engine/linksto?site=http%3A%2F%2Fmy.site%2F&results=50"
        );
        let m = parse_mri("http[//historical.archive/get?site=http[//my.site/]&year=1998]").unwrap();
        assert_eq!(
            mri_to_uri(&m),
            "http://historical.archive/get?site=http%3A%2F%2Fmy.site%2F&year=1998"
        );
        assert_eq!(mri_to_uri(&mri("x", "")), "x:");
    }

    #[test]
    fn to_uri_hosts_and_quotes() {
        assert_eq!(
            mri_to_uri(&parse_mri("http[//ip4[1.2.3.4]:80/]").unwrap()),
            "http://1.2.3.4:80/"
        );
        assert_eq!(
            mri_to_uri(&parse_mri("http[//ip6[1234::abcd]:80/]").unwrap()),
            "http://[1234::abcd]:80/"
        );
        assert_eq!(mri_to_uri(&parse_mri("http[//[::1]/]").unwrap()), "http://[::1]/");
        assert_eq!(mri_to_uri(&parse_mri("http[//u@h.x/]").unwrap()), "http://u@h.x/");
        assert_eq!(mri_to_uri(&parse_mri("mailto[x/[@]b]").unwrap()), "mailto:x/%5B@%5Db");
        // a name directly before `[` makes a nested MRI, not a quote
        assert_eq!(mri_to_uri(&parse_mri("mailto[a[@]b]").unwrap()), "mailto:a%3A%40b");
        assert_eq!(mri_to_uri(&parse_mri("x[/a%28b/<c>]").unwrap()), "x:/a%28b/%3Cc%3E");
        assert_eq!(mri_to_uri(&parse_mri("x[q=\u{e9}]").unwrap()), "x:q=%C3%A9");
        assert_eq!(mri_to_uri(&parse_mri("x[/f(1)]").unwrap()), "x:/f(1)");
    }

    #[test]
    fn from_uri_examples() {
        assert_eq!(
            uri_to_mri("http://my.site/path/").unwrap().to_string(),
            "http[//my.site/path/]"
        );
        assert_eq!(
            uri_to_mri("http://a.b/open(").unwrap().to_string(),
            "http[//a.b/open%28]"
        );
        assert_eq!(uri_to_mri("x:").unwrap().to_string(), "x[]");
        assert_eq!(uri_to_mri("x:a%20b c").unwrap().to_string(), "x[a%20b%20c]");
        assert_eq!(uri_to_mri("x:)(").unwrap().to_string(), "x[%29%28]");
        assert_eq!(uri_to_mri("nocolon"), Err(MriError::BadScheme));
        assert_eq!(uri_to_mri("9x:y"), Err(MriError::BadScheme));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_uri_extended("%[a<b>c`d]").unwrap(), "a<b>c`d");
        assert_eq!(decode_uri_extended("%41").unwrap(), "A");
        assert_eq!(decode_uri_extended("%[]").unwrap(), "");
        assert_eq!(decode_uri_extended("a%2fb%[%41]").unwrap(), "a/b%41");
        assert_eq!(decode_uri_extended("%C3%A9").unwrap(), "\u{e9}");
    }

    #[test]
    fn decode_errors() {
        assert_eq!(
            decode_uri_extended("%4"),
            Err(UriDecodeError::BadPercentTriplet { offset: 0 })
        );
        assert_eq!(
            decode_uri_extended("a%zz"),
            Err(UriDecodeError::BadPercentTriplet { offset: 1 })
        );
        assert_eq!(
            decode_uri_extended("%[ab"),
            Err(UriDecodeError::UnterminatedEmbed { offset: 0 })
        );
        assert!(matches!(
            decode_uri_extended("%[a(]"),
            Err(UriDecodeError::NotMatchertext { .. })
        ));
        assert!(matches!(
            decode_uri_extended("%[a b]"),
            Err(UriDecodeError::NotMatchertext { .. })
        ));
        assert_eq!(decode_uri_extended("%FF"), Err(UriDecodeError::InvalidUtf8));
    }

    #[test]
    fn hosts() {
        assert_eq!(classify_mri_host("ip4[1.2.3.4]"), Ok(HostKind::Ip4("1.2.3.4".into())));
        assert_eq!(
            classify_mri_host("ip6[1234::abcd]"),
            Ok(HostKind::Ip6("1234::abcd".into()))
        );
        assert_eq!(classify_mri_host("my.site"), Ok(HostKind::Domain("my.site".into())));
        assert_eq!(
            classify_mri_host("onion[abc]"),
            Ok(HostKind::NestedMri(mri("onion", "abc")))
        );
        assert!(classify_mri_host("ip4[1.2.x.4]").is_err());
        assert!(classify_mri_host("ip6[zz]").is_err());
        assert!(classify_mri_host("a/b").is_err());
        assert!(classify_mri_host("a[b").is_err());
    }
}
