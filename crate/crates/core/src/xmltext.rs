//! Character-data helpers shared by the markup emitters.

/// Encodes `text` as one or more adjacent CDATA sections.
///
/// Every `]]>` in `text` is split across two sections as
/// `]]]]><![CDATA[>`, so the concatenated character data is exactly `text`.
pub fn cdata_chain(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 12);
    out.push_str("<![CDATA[");
    let mut rest = text;
    while let Some(at) = rest.find("]]>") {
        out.push_str(&rest[..at]);
        out.push_str("]]]]><![CDATA[>");
        rest = &rest[at + 3..];
    }
    out.push_str(rest);
    out.push_str("]]>");
    out
}

fn escape_with(text: &str, out: &mut String, pick: impl Fn(char) -> Option<&'static str>) {
    for ch in text.chars() {
        match pick(ch) {
            Some(entity) => out.push_str(entity),
            None => out.push(ch),
        }
    }
}

/// Element content: `&`, `<` and `>`.
pub fn escape_content(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    escape_with(text, &mut out, |ch| match ch {
        '&' => Some("&amp;"),
        '<' => Some("&lt;"),
        '>' => Some("&gt;"),
        _ => None,
    });
    out
}

/// Double-quoted attribute values: `&`, `<` and `"`.
pub fn escape_attribute(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    escape_with(text, &mut out, |ch| match ch {
        '&' => Some("&amp;"),
        '<' => Some("&lt;"),
        '"' => Some("&quot;"),
        _ => None,
    });
    out
}

/// Only the two characters that can start markup: `&` and `<`.
pub fn escape_markup_start(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    escape_with(text, &mut out, |ch| match ch {
        '&' => Some("&amp;"),
        '<' => Some("&lt;"),
        _ => None,
    });
    out
}
