//! Turns forum pages, shop showcases and microblog streams into corpus
//! records, and defines the JSON Lines archive they are stored in.
//!
//! Extraction is driven by [`SiteAdapter`] tables of CSS selectors and is
//! deterministic: the same page bytes always give the same records. Pages
//! come from local dumps; fetching over the network needs the `live-fetch`
//! feature.

mod adapter;
mod archive;
mod dates;
mod error;
mod fetch;
mod forum;
mod links;
mod shop;
mod stream;

pub use adapter::{ListingRules, PostRules, ProfileRules, SectionRules, SiteAdapter, ThreadRules};
pub use archive::{read_archive, write_archive, ArchiveRecord, Record};
pub use dates::parse_post_date;
pub use error::{FetchFailure, HostUnreachable, IngestError};
#[cfg(feature = "live-fetch")]
pub use fetch::HttpFetcher;
pub use fetch::{host_of, schedule_fetch, FetchLogEntry, FetchOutcome, FetchPolicy, FetchReport, Fetcher};
pub use forum::{extract_forum_records, BlockIssue, Extraction};
pub use links::{extract_links, Link};
pub use shop::{
    default_shops, extract_shop_snapshot, parse_price, parse_shop_config, shop_config_toml, ShopCapture,
    ShopDescriptor,
};
pub use stream::{ingest_stream, match_keywords, parse_keywords, StreamBuffer, StreamOutcome, StreamRecord};

const BUILTIN: [&str; 3] = [
    include_str!("../adapters/bluelight-like.toml"),
    include_str!("../adapters/drugsforum-like.toml"),
    include_str!("../adapters/generic-shop.toml"),
];

/// The adapters shipped with the crate.
pub fn builtin_adapters() -> Vec<SiteAdapter> {
    BUILTIN.iter().map(|t| SiteAdapter::from_toml(t).expect("shipped adapter is valid")).collect()
}

/// A shipped adapter by name.
pub fn builtin_adapter(name: &str) -> Option<SiteAdapter> {
    builtin_adapters().into_iter().find(|a| a.name == name)
}
