mod common;

use matchertext::rex::translate_rex_str;
use proptest::prelude::*;
use regex::Regex;

fn anchored(pattern: &str) -> Regex {
    Regex::new(&format!("^(?:{pattern})$")).unwrap_or_else(|e| panic!("{pattern}: {e}"))
}

proptest! {
    #[test]
    fn quoted_literal_matches_only_itself(s in common::matchertext(), at in any::<prop::sample::Index>(), repl in any::<char>()) {
        // a quote body cannot end in `}` right before the frame closes
        let s = format!("{s}.");
        let re = anchored(&translate_rex_str(&format!("{{{{{s}}}}}")).unwrap());
        prop_assert!(re.is_match(&s));
        let mut chars: Vec<char> = s.chars().collect();
        let i = at.index(chars.len());
        prop_assume!(chars[i] != repl);
        chars[i] = repl;
        let mutated: String = chars.into_iter().collect();
        prop_assert!(!re.is_match(&mutated));
    }

    #[test]
    fn extension_free_output_is_a_fixed_point(s in "[a-z.*+?|^$]{0,12}") {
        let once = translate_rex_str(&s).unwrap();
        prop_assert_eq!(translate_rex_str(&once).unwrap(), once);
    }
}

#[test]
fn matcher_class_probe() {
    let re = anchored(&translate_rex_str("[()[]{}]").unwrap());
    let matched: String = (0u8..128)
        .map(char::from)
        .filter(|c| re.is_match(&c.to_string()))
        .collect();
    assert_eq!(matched, "()[]{}");
}
