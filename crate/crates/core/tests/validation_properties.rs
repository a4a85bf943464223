mod common;

use matchertext::{is_matchertext, scan_embedded, validate, EmbedDelimiters, MatcherConfig};
use proptest::prelude::*;

use common::{matchertext, PAIRS};

/// Arbitrary text with a heavy share of matchers.
fn noisy_text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![3 => prop::sample::select(vec!['(', ')', '[', ']', '{', '}']), 2 => any::<char>()],
        0..40,
    )
    .prop_map(|cs| cs.into_iter().collect())
}

proptest! {
    #[test]
    fn generated_text_is_matchertext(m in matchertext()) {
        prop_assert!(is_matchertext(&m, &MatcherConfig::standard()));
    }

    #[test]
    fn concatenation_closure(a in matchertext(), b in matchertext()) {
        prop_assert!(is_matchertext(&(a + &b), &MatcherConfig::standard()));
    }

    #[test]
    fn wrap_closure(m in matchertext()) {
        let cfg = MatcherConfig::standard();
        for pair in cfg.pairs() {
            let wrapped = format!("{}{}{}", pair.opener, m, pair.closer);
            prop_assert!(is_matchertext(&wrapped, &cfg));
        }
    }

    #[test]
    fn embedding_locality(m in matchertext(), pre in "[a-z\"' ]{0,3}", post in "[a-z\"' ]{0,3}", i in 0..3usize) {
        let cfg = MatcherConfig::standard();
        let (o, c) = PAIRS[i];
        let delims = EmbedDelimiters::new(format!("{pre}{o}"), format!("{c}{post}"), &cfg).unwrap();
        let host = format!("<<{}>>", delims.wrap(&m));
        let open = 2 + pre.len();
        prop_assert_eq!(scan_embedded(&host, open, &cfg), Ok(open + 1 + m.len()));
        prop_assert_eq!(&host[delims.locate(&host, 2, &cfg).unwrap()], m.as_str());
    }

    #[test]
    fn validate_is_sorted_and_consistent(t in noisy_text()) {
        let cfg = MatcherConfig::standard();
        let vs = validate(&t, &cfg);
        prop_assert!(vs.windows(2).all(|w| w[0].offset < w[1].offset));
        prop_assert_eq!(vs.is_empty(), is_matchertext(&t, &cfg));
        prop_assert_eq!(&vs, &validate(&t, &cfg));
        for v in &vs {
            prop_assert_eq!(t[v.offset..].chars().next(), Some(v.found));
            let line_start = t[..v.offset].rfind('\n').map_or(0, |i| i + 1);
            prop_assert_eq!(v.line, t[..v.offset].matches('\n').count() + 1);
            prop_assert_eq!(v.column, t[line_start..v.offset].chars().count() + 1);
        }
    }

    #[test]
    fn graphical_config_rejects_whitespace(m in matchertext()) {
        let graphical = MatcherConfig::graphical();
        let has_bad = m.chars().any(|c| c.is_whitespace() || c.is_control());
        prop_assert_eq!(is_matchertext(&m, &graphical), !has_bad);
    }
}

#[test]
fn validity_table() {
    let cfg = MatcherConfig::standard();
    for ok in ["(a{b}c)", "a({'}[\"])d", ""] {
        assert!(validate(ok, &cfg).is_empty(), "{ok}");
    }
    for bad in ["(", "{a]", "[(])", "}{"] {
        assert!(!validate(bad, &cfg).is_empty(), "{bad}");
    }
}
