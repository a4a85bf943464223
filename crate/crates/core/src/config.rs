//! Matcher configurations: which characters are allowed and which of them
//! pair up as openers and closers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The character alphabet a configuration admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alphabet {
    /// Every Unicode scalar value.
    #[default]
    #[serde(alias = "standard", alias = "all")]
    AllUnicodeScalars,
    /// Tightened alphabet: no control codes and no whitespace (space included).
    #[serde(alias = "graphical")]
    GraphicalOnly,
}

impl Alphabet {
    #[inline]
    pub fn contains(self, ch: char) -> bool {
        match self {
            Alphabet::AllUnicodeScalars => true,
            Alphabet::GraphicalOnly => !ch.is_control() && !ch.is_whitespace(),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::AllUnicodeScalars => "all-unicode-scalars",
            Alphabet::GraphicalOnly => "graphical-only",
        })
    }
}

/// One opener/closer pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatcherPair {
    pub opener: char,
    pub closer: char,
}

impl MatcherPair {
    pub const fn new(opener: char, closer: char) -> Self {
        MatcherPair { opener, closer }
    }
}

/// The three ASCII pairs every standard configuration uses.
pub const STANDARD_PAIRS: [MatcherPair; 3] = [
    MatcherPair::new('(', ')'),
    MatcherPair::new('[', ']'),
    MatcherPair::new('{', '}'),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("character {0:?} is used in more than one matcher role")]
    DuplicateMatcher(char),
    #[error("matcher {ch:?} is not a member of the {alphabet} alphabet")]
    MatcherOutsideAlphabet { ch: char, alphabet: Alphabet },
    #[error("invalid configuration file: {0}")]
    Parse(String),
}

/// A matchertext configuration: an alphabet plus a set of matcher pairs.
///
/// Invariants are checked on construction, so a value of this type always
/// has disjoint opener and closer sets and every matcher inside the
/// alphabet. Tightened and loosened variants are ordinary values of this
/// type; nothing downstream special-cases them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatcherConfig {
    pairs: Vec<MatcherPair>,
    alphabet: Alphabet,
}

impl MatcherConfig {
    pub fn new(pairs: impl IntoIterator<Item = MatcherPair>, alphabet: Alphabet) -> Result<Self, ConfigError> {
        let pairs: Vec<MatcherPair> = pairs.into_iter().collect();
        let mut seen: Vec<char> = Vec::with_capacity(pairs.len() * 2);
        for pair in &pairs {
            for ch in [pair.opener, pair.closer] {
                if seen.contains(&ch) {
                    return Err(ConfigError::DuplicateMatcher(ch));
                }
                if !alphabet.contains(ch) {
                    return Err(ConfigError::MatcherOutsideAlphabet { ch, alphabet });
                }
                seen.push(ch);
            }
        }
        Ok(MatcherConfig { pairs, alphabet })
    }

    /// All Unicode scalars, with `()`, `[]` and `{}` as matchers.
    pub fn standard() -> Self {
        MatcherConfig {
            pairs: STANDARD_PAIRS.to_vec(),
            alphabet: Alphabet::AllUnicodeScalars,
        }
    }

    /// The standard pairs over the tightened graphical-only alphabet.
    pub fn graphical() -> Self {
        MatcherConfig {
            pairs: STANDARD_PAIRS.to_vec(),
            alphabet: Alphabet::GraphicalOnly,
        }
    }

    /// Same pairs, different alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self, ConfigError> {
        MatcherConfig::new(self.pairs.iter().copied(), alphabet)
    }

    /// Parses a TOML configuration file of the form
    ///
    /// ```toml
    /// alphabet = "graphical-only"
    /// pairs = [["(", ")"], ["[", "]"]]
    /// ```
    ///
    /// Both keys are optional and default to the standard configuration.
    pub fn from_toml_str(src: &str) -> Result<Self, ConfigError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            #[serde(default)]
            alphabet: Alphabet,
            pairs: Option<Vec<(char, char)>>,
        }
        let raw: Raw = toml::from_str(src).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let pairs = match raw.pairs {
            Some(p) => p.into_iter().map(|(o, c)| MatcherPair::new(o, c)).collect(),
            None => STANDARD_PAIRS.to_vec(),
        };
        MatcherConfig::new(pairs, raw.alphabet)
    }

    pub fn pairs(&self) -> &[MatcherPair] {
        &self.pairs
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn in_alphabet(&self, ch: char) -> bool {
        self.alphabet.contains(ch)
    }

    #[inline]
    pub fn is_opener(&self, ch: char) -> bool {
        self.pairs.iter().any(|p| p.opener == ch)
    }

    #[inline]
    pub fn is_closer(&self, ch: char) -> bool {
        self.pairs.iter().any(|p| p.closer == ch)
    }

    #[inline]
    pub fn is_matcher(&self, ch: char) -> bool {
        self.pairs.iter().any(|p| p.opener == ch || p.closer == ch)
    }

    /// Alphabet members that are not matchers.
    #[inline]
    pub fn is_nonmatcher(&self, ch: char) -> bool {
        self.in_alphabet(ch) && !self.is_matcher(ch)
    }

    pub fn closer_for(&self, opener: char) -> Option<char> {
        self.pairs.iter().find(|p| p.opener == opener).map(|p| p.closer)
    }

    pub fn opener_for(&self, closer: char) -> Option<char> {
        self.pairs.iter().find(|p| p.closer == closer).map(|p| p.opener)
    }
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig::standard()
    }
}
