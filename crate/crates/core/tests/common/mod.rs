#![allow(dead_code)]

use proptest::prelude::*;

pub const PAIRS: [(char, char); 3] = [('(', ')'), ('[', ']'), ('{', '}')];

/// Runs of arbitrary non-matcher characters.
pub fn any_filler() -> impl Strategy<Value = String> {
    r"[^()\[\]{}]{0,5}"
}

/// Runs of printable ASCII with no matchers and no space.
pub fn graphical_filler() -> impl Strategy<Value = String> {
    r"[!-'*-Z\\^-z|~]{0,5}"
}

/// Balanced text grown from `filler` by concatenation and wrapping.
pub fn balanced(filler: impl Strategy<Value = String> + 'static, max_chars: usize) -> BoxedStrategy<String> {
    filler
        .prop_recursive(5, 48, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(|parts| parts.concat()),
                (inner, 0..PAIRS.len()).prop_map(|(m, i)| format!("{}{}{}", PAIRS[i].0, m, PAIRS[i].1)),
            ]
        })
        .prop_filter("too long", move |s| s.chars().count() <= max_chars)
        .boxed()
}

pub fn matchertext() -> BoxedStrategy<String> {
    balanced(any_filler(), 64)
}

pub fn graphical_matchertext() -> BoxedStrategy<String> {
    balanced(graphical_filler(), 64)
}

/// Reference CDATA reader: concatenates the contents of consecutive
/// `<![CDATA[ ... ]]>` sections.
pub fn decode_cdata_sections(mut s: &str) -> Option<String> {
    let mut out = String::new();
    while !s.is_empty() {
        s = s.strip_prefix("<![CDATA[")?;
        let end = s.find("]]>")?;
        out.push_str(&s[..end]);
        s = &s[end + 3..];
    }
    Some(out)
}
