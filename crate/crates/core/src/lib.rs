//! Tools for the matchertext syntactic discipline: text in which every
//! opening matcher (`(`, `[`, `{`) is closed by its partner, properly
//! nested, so that any such text can be embedded verbatim inside any host
//! syntax that follows the same rule.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`config`] | [`MatcherConfig`]: alphabet and matcher pairs |
//! | [`validate`] | the validator and [`Violation`] diagnostics |
//! | [`scan`] | [`scan_embedded`], [`EmbedDelimiters`] |
//! | [`cesc`] | string-literal codec with `\[m]` and `\o()`-style escapes |
//! | [`mlx`] | bracketed HTML/XHTML hosting forms to standard markup |
//! | [`minml`] | MinML parser and HTML/XML emitters |
//! | [`mri`] | matchertext resource identifiers and URI hosting escapes |
//! | [`rex`] | regex preprocessor for `{{m}}` quotes and class selectors |
//! | [`analyzer`] | violation survey over legacy source files |
//! | [`report`] | JSON report schema and aggregate counts |
//!
//! ```
//! use matchertext::{is_matchertext, validate, MatcherConfig};
//!
//! let cfg = MatcherConfig::standard();
//! assert!(is_matchertext("a({'}[\"])d", &cfg));
//! assert_eq!(validate("}{", &cfg).len(), 2);
//! ```

pub mod analyzer;
pub mod cesc;
pub mod config;
pub mod minml;
pub mod mlx;
pub mod mri;
pub mod report;
pub mod rex;
pub mod scan;
pub mod validate;
pub mod xmltext;

pub use analyzer::{analyze_source, ContextViolation, LanguageProfile, RegionContext};
pub use config::{Alphabet, ConfigError, MatcherConfig, MatcherPair};
pub use report::{aggregate_report, Report, Summary};
pub use scan::{scan_embedded, EmbedDelimiters, ScanError};
pub use validate::{is_matchertext, validate, Violation, ViolationKind};
