//! Hyperlinks in free text.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub url: String,
    /// Host without scheme, port, path or a leading "www.", lowercased.
    pub domain: String,
}

/// Absolute http and https links in `text`, in order of appearance.
/// Trailing sentence punctuation is not part of a link. Candidates that do
/// not parse as URLs with a host are skipped.
///
/// ```
/// let links = npswatch_ingest::extract_links("buy at https://www.iceheadshop.co.uk/x");
/// assert_eq!(links[0].domain, "iceheadshop.co.uk");
/// ```
pub fn extract_links(text: &str) -> Vec<Link> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r#"(?i)\bhttps?://[^\s<>"'()\[\]{}]+"#).expect("valid regex"));
    re.find_iter(text)
        .filter_map(|m| {
            let candidate = m.as_str().trim_end_matches(['.', ',', ';', ':', '!', '?']);
            let url = Url::parse(candidate).ok()?;
            let host = url.host_str()?.trim_end_matches('.').to_lowercase();
            let domain = host.strip_prefix("www.").unwrap_or(&host).to_string();
            (!domain.is_empty()).then(|| Link { url: url.to_string(), domain })
        })
        .collect()
}
