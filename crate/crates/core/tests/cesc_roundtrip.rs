mod common;

use matchertext::cesc::{decode, embed, encode, encode_with, EscapeStyle, QuoteContext};
use matchertext::{is_matchertext, MatcherConfig};
use proptest::prelude::*;

const STYLES: [EscapeStyle; 3] = [
    EscapeStyle::MatcherSelect,
    EscapeStyle::NumericHex,
    EscapeStyle::NumericUniversal,
];

fn unicode_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![
            3 => any::<char>(),
            2 => prop::sample::select(vec!['(', ')', '[', ']', '{', '}', '\\', '"', '\'', '\n', '\0']),
        ],
        0..48,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn encode_then_decode_is_identity(t in unicode_text()) {
        for style in STYLES {
            let body = encode(&t, style);
            prop_assert!(is_matchertext(&body, &MatcherConfig::standard()), "{:?} -> {:?}", t, body);
            prop_assert_eq!(decode(&body).unwrap(), t.as_str());
        }
    }
}

proptest! {
    #[test]
    fn single_quote_context_escapes_apostrophes(t in unicode_text()) {
        let body = encode_with(&t, EscapeStyle::MatcherSelect, QuoteContext::Single);
        let unescaped_apostrophe = body
            .char_indices()
            .any(|(i, c)| c == '\'' && !body[..i].ends_with('\\'));
        prop_assert!(!unescaped_apostrophe || body.contains("\\["));
        prop_assert_eq!(decode(&body).unwrap(), t);
    }

    #[test]
    fn embed_is_identity(m in common::matchertext()) {
        let body = embed(&m).unwrap();
        prop_assert_eq!(body.len(), m.len() + 3);
        prop_assert_eq!(decode(&body).unwrap(), m);
    }

    #[test]
    fn decode_rejects_non_matchertext(t in unicode_text()) {
        if !is_matchertext(&t, &MatcherConfig::standard()) {
            prop_assert!(decode(&t).is_err());
        }
    }
}

#[test]
fn embedded_quotes_example() {
    assert_eq!(decode(r#"\["'\]"#).unwrap(), "\"'\\");
}
