//! The store's `config.toml`.

use std::path::PathBuf;

use npswatch_corpus::SourceKind;
use npswatch_ingest::{default_shops, FetchPolicy, ShopDescriptor};
use serde::{Deserialize, Serialize};

use crate::ServiceError;

/// A monitored forum. Sections, threads and posts refer to it by `id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForumConfig {
    pub id: String,
    pub name: String,
    pub source: SourceKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Keyword list for the microblog stream; the shipped list when absent.
    /// Relative paths are resolved against the store root.
    pub keywords: Option<PathBuf>,
    /// Substance lexicon; the shipped lexicon when absent.
    pub lexicon: Option<PathBuf>,
    /// Tie-break order for first-seen attribution.
    pub source_priority: Vec<SourceKind>,
    pub fetch: FetchPolicy,
    #[serde(rename = "forum")]
    pub forums: Vec<ForumConfig>,
    #[serde(rename = "shop")]
    pub shops: Vec<ShopDescriptor>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            keywords: None,
            lexicon: None,
            source_priority: npswatch_analytics::default_source_priority(),
            fetch: FetchPolicy::default(),
            forums: Vec::new(),
            shops: default_shops(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ServiceError> {
        let config: Config = toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
        config.fetch.validate()?;
        let mut ids: Vec<u32> = config.shops.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(ServiceError::Config("duplicate shop id".into()));
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises to TOML")
    }

    pub fn forum(&self, id: &str) -> Option<&ForumConfig> {
        self.forums.iter().find(|f| f.id == id)
    }

    pub fn shop_domains(&self) -> Vec<&str> {
        self.shops.iter().map(|s| s.domain.as_str()).collect()
    }
}
