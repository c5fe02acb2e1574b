use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The family a document comes from. Serialised as a short tag
/// (`forum-bl`, `forum-df`, `shop`, `microblog`); any other tag is kept
/// verbatim as [`SourceKind::Other`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceKind {
    /// A large general forum with a shallow section tree.
    ForumBluelightLike,
    /// A forum with deeper, topic-organised sections.
    ForumDrugsforumLike,
    Shop,
    Microblog,
    Other(String),
}

impl SourceKind {
    pub fn tag(&self) -> &str {
        match self {
            SourceKind::ForumBluelightLike => "forum-bl",
            SourceKind::ForumDrugsforumLike => "forum-df",
            SourceKind::Shop => "shop",
            SourceKind::Microblog => "microblog",
            SourceKind::Other(tag) => tag,
        }
    }

    /// Forum kinds are the ones that carry section trees and threads.
    pub fn is_forum(&self) -> bool {
        match self {
            SourceKind::ForumBluelightLike | SourceKind::ForumDrugsforumLike => true,
            SourceKind::Other(tag) => tag.starts_with("forum-"),
            _ => false,
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid source tag {0:?}")]
pub struct InvalidSourceTag(pub String);

impl FromStr for SourceKind {
    type Err = InvalidSourceTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "forum-bl" => SourceKind::ForumBluelightLike,
            "forum-df" => SourceKind::ForumDrugsforumLike,
            "shop" => SourceKind::Shop,
            "microblog" => SourceKind::Microblog,
            other => {
                let valid = !other.is_empty()
                    && other.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-');
                if !valid {
                    return Err(InvalidSourceTag(other.to_string()));
                }
                SourceKind::Other(other.to_string())
            }
        })
    }
}

impl Serialize for SourceKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for SourceKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
