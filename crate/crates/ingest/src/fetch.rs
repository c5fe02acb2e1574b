//! Polite fetch scheduling.
//!
//! Hosts are fetched concurrently, up to `max_concurrent_hosts` at a time;
//! requests to one host are serialized and spaced by at least
//! `min_delay_per_host`. Failed requests are retried with exponential
//! backoff. Network access goes through a [`Fetcher`]; the default build
//! ships none that touches the network.

use std::collections::BTreeMap;
use std::future::Future;
use std::time::Duration;

use futures::future::join_all;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;
use tokio::time::{sleep_until, Instant};
use url::Url;

use crate::{FetchFailure, HostUnreachable, IngestError};

mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

/// Timing and retry limits. Durations are written in seconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FetchPolicy {
    #[serde(with = "secs", rename = "min_delay_per_host_secs")]
    pub min_delay_per_host: Duration,
    pub max_concurrent_hosts: usize,
    pub max_retries: u32,
    /// How often a shop showcase is captured again.
    #[serde(with = "secs", rename = "revisit_interval_secs")]
    pub revisit_interval: Duration,
    /// Wait before the first retry; doubled for each further retry.
    #[serde(with = "secs", rename = "backoff_base_secs")]
    pub backoff_base: Duration,
}

impl Default for FetchPolicy {
    fn default() -> Self {
        FetchPolicy {
            min_delay_per_host: Duration::from_secs(2),
            max_concurrent_hosts: 4,
            max_retries: 2,
            revisit_interval: Duration::from_secs(7 * 24 * 3600),
            backoff_base: Duration::from_secs(1),
        }
    }
}

impl FetchPolicy {
    pub fn validate(&self) -> Result<(), IngestError> {
        if self.min_delay_per_host.is_zero() {
            return Err(IngestError::InvalidShopConfig("min_delay_per_host must be positive".into()));
        }
        if self.max_concurrent_hosts == 0 {
            return Err(IngestError::InvalidShopConfig("max_concurrent_hosts must be at least 1".into()));
        }
        Ok(())
    }

    /// Whether a showcase last captured on `last` is due again on `today`.
    pub fn is_due(&self, last: Option<chrono::NaiveDate>, today: chrono::NaiveDate) -> bool {
        let days = self.revisit_interval.as_secs().div_ceil(86_400) as i64;
        last.is_none_or(|l| (today - l).num_days() >= days)
    }

    fn backoff(&self, retry: u32) -> Duration {
        self.backoff_base.saturating_mul(1 << (retry.saturating_sub(1)).min(16))
    }
}

/// Source of page bytes.
pub trait Fetcher {
    fn fetch(&self, url: &str) -> impl Future<Output = Result<Vec<u8>, FetchFailure>>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum FetchOutcome {
    Ok,
    Failed(String),
}

/// One request as issued.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchLogEntry {
    pub url: String,
    pub host: String,
    /// 1 for the first try of a URL.
    pub attempt: u32,
    /// Offset from the start of the run at which the request was issued.
    pub at: Duration,
    pub outcome: FetchOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FetchReport {
    /// Every request in issue order.
    pub log: Vec<FetchLogEntry>,
    pub pages: BTreeMap<String, Vec<u8>>,
    pub failed: Vec<HostUnreachable>,
}

impl FetchReport {
    /// Smallest gap between consecutive requests to the same host.
    pub fn min_same_host_gap(&self) -> Option<Duration> {
        let mut last: BTreeMap<&str, Duration> = BTreeMap::new();
        let mut min: Option<Duration> = None;
        for e in &self.log {
            if let Some(prev) = last.insert(&e.host, e.at) {
                let gap = e.at.saturating_sub(prev);
                min = Some(min.map_or(gap, |m| m.min(gap)));
            }
        }
        min
    }
}

/// Host of `url`, lowercased.
pub fn host_of(url: &str) -> Result<String, IngestError> {
    let parsed = Url::parse(url).map_err(|e| IngestError::MalformedPage(format!("bad url {url:?}: {e}")))?;
    parsed.host_str().map(str::to_lowercase).ok_or_else(|| IngestError::MalformedPage(format!("url {url:?} has no host")))
}

/// Fetches every URL under `policy`. A URL whose retries are exhausted is
/// recorded in [`FetchReport::failed`] and the run continues.
pub async fn schedule_fetch<F: Fetcher>(
    urls: &[String],
    policy: &FetchPolicy,
    fetcher: &F,
) -> Result<FetchReport, IngestError> {
    policy.validate()?;
    let mut by_host: BTreeMap<String, Vec<&str>> = BTreeMap::new();
    for url in urls {
        by_host.entry(host_of(url)?).or_default().push(url);
    }
    let slots = Semaphore::new(policy.max_concurrent_hosts);
    let start = Instant::now();

    let workers = by_host.into_iter().map(|(host, urls)| {
        let slots = &slots;
        async move {
            let _slot = slots.acquire().await.expect("semaphore is never closed");
            let mut log = Vec::new();
            let mut pages = Vec::new();
            let mut failed = Vec::new();
            let mut last: Option<Instant> = None;
            for url in urls {
                let mut attempt = 0;
                loop {
                    attempt += 1;
                    if let Some(prev) = last {
                        let mut wait = policy.min_delay_per_host;
                        if attempt > 1 {
                            wait = wait.max(policy.backoff(attempt - 1));
                        }
                        sleep_until(prev + wait).await;
                    }
                    let issued = Instant::now();
                    last = Some(issued);
                    let result = fetcher.fetch(url).await;
                    let outcome = match &result {
                        Ok(_) => FetchOutcome::Ok,
                        Err(e) => FetchOutcome::Failed(e.reason.clone()),
                    };
                    log.push(FetchLogEntry {
                        url: url.to_string(),
                        host: host.clone(),
                        attempt,
                        at: issued - start,
                        outcome,
                    });
                    match result {
                        Ok(bytes) => {
                            pages.push((url.to_string(), bytes));
                            break;
                        }
                        Err(e) if attempt > policy.max_retries => {
                            tracing::warn!("giving up on {url}: {}", e.reason);
                            failed.push(HostUnreachable { url: url.to_string(), attempts: attempt, last_reason: e.reason });
                            break;
                        }
                        Err(_) => {}
                    }
                }
            }
            (log, pages, failed)
        }
    });

    let mut report = FetchReport::default();
    for (log, pages, failed) in join_all(workers).await {
        report.log.extend(log);
        report.pages.extend(pages);
        report.failed.extend(failed);
    }
    report.log.sort_by(|a, b| (a.at, &a.host, a.attempt).cmp(&(b.at, &b.host, b.attempt)));
    Ok(report)
}

/// Fetches pages over HTTP.
#[cfg(feature = "live-fetch")]
#[derive(Debug, Clone, Default)]
pub struct HttpFetcher {
    client: reqwest::Client,
}

#[cfg(feature = "live-fetch")]
impl Fetcher for HttpFetcher {
    async fn fetch(&self, url: &str) -> Result<Vec<u8>, FetchFailure> {
        let fail = |reason: String| FetchFailure { url: url.to_string(), reason };
        let response = self.client.get(url).send().await.map_err(|e| fail(e.to_string()))?;
        let response = response.error_for_status().map_err(|e| fail(e.to_string()))?;
        Ok(response.bytes().await.map_err(|e| fail(e.to_string()))?.to_vec())
    }
}
