use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::token::{is_token, tokenize};
use crate::ModelError;

/// A monitored substance and the surface forms it is recognised by.
///
/// Aliases are stored case-folded and must each be a single token, so
/// matching is a set lookup over a text's tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSubstance", into = "RawSubstance")]
pub struct SubstanceEntry {
    canonical_name: String,
    aliases: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct RawSubstance {
    canonical_name: String,
    #[serde(default)]
    aliases: Vec<String>,
}

impl SubstanceEntry {
    /// Builds an entry; the canonical name is always added as an alias.
    pub fn new<I, S>(canonical_name: &str, aliases: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut folded = BTreeSet::new();
        let canonical = canonical_name.trim();
        for alias in std::iter::once(canonical.to_string())
            .chain(aliases.into_iter().map(|a| a.as_ref().trim().to_string()))
        {
            let f = alias.to_lowercase();
            if !is_token(&f) {
                return Err(ModelError::InvalidAlias { substance: canonical.to_string(), alias });
            }
            // Repeating the canonical name is harmless; other repeats are not.
            if !folded.insert(f) && alias.to_lowercase() != canonical.to_lowercase() {
                return Err(ModelError::DuplicateAlias { substance: canonical.to_string(), alias });
            }
        }
        Ok(SubstanceEntry { canonical_name: canonical.to_string(), aliases: folded })
    }

    pub fn canonical_name(&self) -> &str {
        &self.canonical_name
    }

    /// Case-folded aliases, including the canonical name.
    pub fn aliases(&self) -> &BTreeSet<String> {
        &self.aliases
    }

    pub fn matches_token(&self, token: &str) -> bool {
        self.aliases.contains(token)
    }
}

impl TryFrom<RawSubstance> for SubstanceEntry {
    type Error = ModelError;

    fn try_from(raw: RawSubstance) -> Result<Self, ModelError> {
        SubstanceEntry::new(&raw.canonical_name, raw.aliases)
    }
}

impl From<SubstanceEntry> for RawSubstance {
    fn from(e: SubstanceEntry) -> Self {
        RawSubstance { canonical_name: e.canonical_name, aliases: e.aliases.into_iter().collect() }
    }
}

/// True iff some alias of `entry` equals a whole token of `text`.
///
/// ```
/// use npswatch_corpus::{alias_matches, SubstanceEntry};
/// let lsd = SubstanceEntry::new("1P-LSD", ["1p-lsd"]).unwrap();
/// assert!(alias_matches("I tried 1P-LSD yesterday", &lsd));
/// assert!(!alias_matches("lsd trip report", &lsd));
/// ```
pub fn alias_matches(text: &str, entry: &SubstanceEntry) -> bool {
    tokenize(text).iter().any(|t| entry.matches_token(t))
}

/// Parses a lexicon file: one substance per line, aliases separated by
/// commas after the canonical name, `#` comments.
///
/// ```text
/// MDAI
/// 1P-LSD, 1p-lsd25
/// ```
pub fn parse_lexicon(text: &str) -> Result<Vec<SubstanceEntry>, ModelError> {
    let mut out: Vec<SubstanceEntry> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',').map(str::trim).filter(|p| !p.is_empty());
        let canonical = parts.next().expect("non-empty line has a first field");
        let entry = SubstanceEntry::new(canonical, parts)?;
        if let Some(clash) = out.iter().find(|e| !e.aliases.is_disjoint(&entry.aliases)) {
            return Err(ModelError::DuplicateAlias {
                substance: entry.canonical_name,
                alias: clash.canonical_name.clone(),
            });
        }
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_name_is_an_alias() {
        let e = SubstanceEntry::new("AB-CHMINACA", Vec::<String>::new()).unwrap();
        assert!(e.aliases().contains("ab-chminaca"));
        assert!(alias_matches("AB-CHMINACA batch", &e));
        assert!(!alias_matches("ab chminaca", &e));
    }

    #[test]
    fn invalid_and_duplicate_aliases() {
        assert!(matches!(
            SubstanceEntry::new("MDAI", ["m d a i"]),
            Err(ModelError::InvalidAlias { .. })
        ));
        assert!(matches!(
            SubstanceEntry::new("MDAI", ["mdai2", "MDAI2"]),
            Err(ModelError::DuplicateAlias { .. })
        ));
        assert!(SubstanceEntry::new("MDAI", ["mdai"]).is_ok());
    }

    #[test]
    fn lexicon_file() {
        let lex = parse_lexicon("# monitored\nMDAI\n1P-LSD, 1p-lsd25\n\nα-PVP, alpha-pvp, flakka\n").unwrap();
        assert_eq!(lex.len(), 3);
        assert_eq!(lex[2].aliases().len(), 3);
        assert!(parse_lexicon("MDAI\nmdai\n").is_err());
    }

    #[test]
    fn serde_validates() {
        let json = r#"{"canonical_name":"MDPV","aliases":["mdpv","Bath-Salts"]}"#;
        let e: SubstanceEntry = serde_json::from_str(json).unwrap();
        assert!(e.matches_token("bath-salts"));
        let bad = r#"{"canonical_name":"MDPV","aliases":["two words"]}"#;
        assert!(serde_json::from_str::<SubstanceEntry>(bad).is_err());
    }
}
