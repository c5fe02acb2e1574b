//! Shop showcases and the shop registry.

use std::sync::OnceLock;

use chrono::NaiveDate;
use npswatch_corpus::{ShopListing, ShopSnapshot};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::adapter::first_text;
use crate::forum::parse_page;
use crate::{IngestError, SiteAdapter};

/// A monitored shop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShopDescriptor {
    pub id: u32,
    pub domain: String,
    /// Showcase pages making up one capture.
    #[serde(default)]
    pub showcase: Vec<String>,
    /// Adapter name used to read the showcase.
    #[serde(default = "default_shop_adapter")]
    pub adapter: String,
}

fn default_shop_adapter() -> String {
    "generic-shop".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShopFile {
    #[serde(default)]
    shop: Vec<ShopDescriptor>,
}

/// The ten shops monitored by default.
pub fn default_shops() -> Vec<ShopDescriptor> {
    const SHOPS: [(u32, &str, &str); 10] = [
        (1, "chem-shop.co.uk", "http"),
        (2, "researchchemist.co.uk", "http"),
        (3, "researchchemistry.co.uk", "http"),
        (4, "sciencesuppliesdirect.com", "http"),
        (5, "bitcoinhighs.co.uk", "http"),
        (6, "buylegalrc.eu", "http"),
        (7, "legalhighlabs.com", "http"),
        (8, "ukhighs.com", "http"),
        (9, "buyanychem.eu", "https"),
        (10, "iceheadshop.co.uk", "https"),
    ];
    SHOPS
        .iter()
        .map(|&(id, domain, scheme)| ShopDescriptor {
            id,
            domain: domain.into(),
            showcase: vec![format!("{scheme}://{domain}/")],
            adapter: default_shop_adapter(),
        })
        .collect()
}

/// Parses a shop registry: a TOML array of `[[shop]]` tables with `id`,
/// `domain`, `showcase` URLs and optional `adapter`. Ids and domains must be
/// unique.
pub fn parse_shop_config(text: &str) -> Result<Vec<ShopDescriptor>, IngestError> {
    let file: ShopFile = toml::from_str(text)?;
    let mut ids = std::collections::HashSet::new();
    let mut domains = std::collections::HashSet::new();
    for s in &file.shop {
        if !ids.insert(s.id) {
            return Err(IngestError::InvalidShopConfig(format!("duplicate shop id {}", s.id)));
        }
        if s.domain.is_empty() || !domains.insert(s.domain.to_lowercase()) {
            return Err(IngestError::InvalidShopConfig(format!("empty or duplicate domain {:?}", s.domain)));
        }
    }
    Ok(file.shop)
}

/// Renders a shop registry in the format read by [`parse_shop_config`].
pub fn shop_config_toml(shops: &[ShopDescriptor]) -> String {
    toml::to_string(&ShopFile { shop: shops.to_vec() }).expect("shop registry serialises")
}

/// Price and ISO currency from a printed price; `None` when no amount is
/// shown (e.g. "Out of stock").
pub fn parse_price(raw: &str) -> Option<(f64, String)> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"(?i)(£|€|\$|gbp|eur|usd|btc|฿)?\s*(\d+(?:[.,]\d+)?)\s*(£|€|\$|gbp|eur|usd|btc|฿)?").expect("valid regex")
    });
    let c = re.captures(raw)?;
    let symbol = c.get(1).or(c.get(3))?.as_str().to_lowercase();
    let currency = match symbol.as_str() {
        "£" | "gbp" => "GBP",
        "€" | "eur" => "EUR",
        "$" | "usd" => "USD",
        _ => "BTC",
    };
    let amount: f64 = c[2].replace(',', ".").parse().ok()?;
    Some((amount, currency.to_string()))
}

/// A capture of one shop, flagged when the showcase listed nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct ShopCapture {
    pub snapshot: ShopSnapshot,
    pub empty_showcase: bool,
}

/// Reads the product cards of every showcase page of `shop` into one
/// snapshot dated `captured_at`. Listing names are trimmed; cards without a
/// name are skipped.
pub fn extract_shop_snapshot(
    pages: &[&[u8]],
    shop: &ShopDescriptor,
    adapter: &SiteAdapter,
    captured_at: NaiveDate,
) -> Result<ShopCapture, IngestError> {
    let Some(rules) = &adapter.listings else {
        return Err(IngestError::InvalidAdapter { adapter: adapter.name.clone(), problem: "no listing rules".into() });
    };
    let mut listings = Vec::new();
    for page in pages {
        let (html, sel) = parse_page(page, adapter)?;
        for card in html.root_element().select(sel.get(&rules.card)) {
            let name = first_text(card, sel.get(&rules.name)).unwrap_or_default();
            if name.is_empty() {
                tracing::warn!(shop = shop.id, "skipped product card without a name");
                continue;
            }
            let price = rules.price.as_ref().and_then(|p| first_text(card, sel.get(p))).and_then(|t| parse_price(&t));
            let unit = rules.unit.as_ref().and_then(|u| first_text(card, sel.get(u))).filter(|u| !u.is_empty());
            listings.push(ShopListing {
                name,
                price: price.as_ref().map(|p| p.0),
                currency: price.map(|p| p.1),
                unit,
            });
        }
    }
    let empty_showcase = listings.is_empty();
    if empty_showcase {
        tracing::warn!(shop = shop.id, "empty showcase");
    }
    Ok(ShopCapture {
        snapshot: ShopSnapshot { shop_id: shop.id, domain: shop.domain.clone(), captured_at, listings },
        empty_showcase,
    })
}
