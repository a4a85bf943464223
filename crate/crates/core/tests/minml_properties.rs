mod common;

use matchertext::minml::{minml_to_html, minml_to_xml, parse_minml, MinMLNode};
use proptest::prelude::*;

use common::decode_cdata_sections;

/// A generated element tree and its MinML spelling.
#[derive(Debug, Clone)]
struct Doc {
    source: String,
    text: String,
    depth: usize,
}

fn plain_text() -> impl Strategy<Value = String> {
    // ends in a non-name character so a following element name stays separate
    "[a-z&<>.,!]{0,6} "
}

fn doc() -> impl Strategy<Value = Doc> {
    plain_text()
        .prop_map(|t| Doc {
            source: t.clone(),
            text: t,
            depth: 0,
        })
        .prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(|parts| Doc {
                    source: parts.iter().map(|d| d.source.as_str()).collect(),
                    text: parts.iter().map(|d| d.text.as_str()).collect(),
                    depth: parts.iter().map(|d| d.depth).max().unwrap(),
                }),
                ("[a-z][a-z0-9]{0,3}", inner).prop_map(|(name, d)| Doc {
                    source: format!("{name}[{}]", d.source),
                    text: d.text,
                    depth: d.depth + 1,
                }),
            ]
        })
}

fn html_text(html: &str) -> String {
    let mut out = String::new();
    let mut rest = html;
    while let Some(lt) = rest.find('<') {
        out.push_str(&rest[..lt]);
        rest = &rest[lt + rest[lt..].find('>').unwrap() + 1..];
    }
    out.push_str(rest);
    out.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

proptest! {
    #[test]
    fn text_is_preserved(d in doc()) {
        let nodes = parse_minml(&d.source).unwrap();
        prop_assert_eq!(html_text(&minml_to_html(&nodes)), d.text);
    }

    #[test]
    fn depth_follows_brackets(d in doc()) {
        let nodes = parse_minml(&d.source).unwrap();
        prop_assert_eq!(nodes.iter().map(MinMLNode::depth).max().unwrap_or(0), d.depth);
    }

    #[test]
    fn verbatim_round_trip(v in common::matchertext()) {
        prop_assume!(!v.contains("+["));
        let xml = minml_to_xml(&parse_minml(&format!("+[{v}]")).unwrap());
        prop_assert_eq!(decode_cdata_sections(&xml), Some(v));
    }
}
