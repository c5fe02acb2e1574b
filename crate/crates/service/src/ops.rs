//! Batch operations behind the `ingest`, `index` and `snapshot-shops`
//! commands.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, Utc};
use npswatch_corpus::Added;
use npswatch_ingest::{
    builtin_adapter, extract_forum_records, extract_shop_snapshot, host_of, ingest_stream, parse_keywords,
    schedule_fetch, ArchiveRecord, FetchFailure, Fetcher, Record, SiteAdapter, StreamRecord,
};
use npswatch_textindex::TermIndex;
use serde::{Deserialize, Serialize};

use crate::error::read_file;
use crate::{ForumConfig, ServiceError, Store};

/// Adapter name for JSON Lines files of raw microblog stream records.
pub const STREAM_ADAPTER: &str = "stream";

const STREAM_CAPACITY: usize = 65_536;
const STREAM_BATCH: usize = 1_024;

/// A shipped adapter, or `adapters/<name>.toml` in the store.
pub fn find_adapter(store: &Store, name: &str) -> Result<SiteAdapter, ServiceError> {
    if let Some(a) = builtin_adapter(name) {
        return Ok(a);
    }
    let path = store.root().join("adapters").join(format!("{name}.toml"));
    if path.is_file() {
        return Ok(SiteAdapter::from_toml(&read_file(&path)?)?);
    }
    Err(ServiceError::UnknownAdapter(name.to_string()))
}

/// The configured keyword list, or the shipped one.
pub fn keywords(store: &Store) -> Result<std::collections::BTreeSet<String>, ServiceError> {
    let text = match store.config()?.keywords {
        Some(p) => read_file(&store.resolve(&p))?,
        None => include_str!("../data/keywords.txt").to_string(),
    };
    Ok(parse_keywords(&text)?)
}

/// The configured substance lexicon, or the shipped one.
pub fn lexicon(store: &Store) -> Result<Vec<npswatch_corpus::SubstanceEntry>, ServiceError> {
    let text = match store.config()?.lexicon {
        Some(p) => read_file(&store.resolve(&p))?,
        None => include_str!("../data/lexicon.txt").to_string(),
    };
    Ok(npswatch_corpus::parse_lexicon(&text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub adapter: String,
    /// Input files read.
    pub files: u64,
    /// New documents written.
    pub posts: u64,
    pub tweets: u64,
    /// New or changed sections, threads and user profiles written.
    pub structure: u64,
    /// Documents whose id the store already held.
    pub skipped: u64,
    /// Structural records identical to stored ones.
    pub unchanged: u64,
    /// Stream records lost to back-pressure.
    pub dropped: u64,
    /// Blocks or lines that could not be read.
    pub errors: Vec<String>,
}

fn input_files(input: &Path, extensions: &[&str]) -> Result<Vec<PathBuf>, ServiceError> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut out: Vec<PathBuf> = fs::read_dir(input)
        .map_err(|source| ServiceError::File { path: input.to_path_buf(), source })?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    out.retain(|p| p.extension().and_then(|e| e.to_str()).is_some_and(|e| extensions.contains(&e)));
    out.sort();
    Ok(out)
}

/// Reads pages (or, for the `stream` adapter, JSON Lines stream records)
/// from a file or directory and appends the records the store does not yet
/// hold to `archives/<adapter>.jsonl`.
pub fn ingest(store: &Store, adapter: &str, input: &Path, captured_at: DateTime<Utc>) -> Result<IngestReport, ServiceError> {
    let mut report = IngestReport { adapter: adapter.to_string(), ..Default::default() };
    let mut extracted = Vec::new();
    if adapter == STREAM_ADAPTER {
        let mut records = Vec::new();
        for path in input_files(input, &["jsonl", "json"])? {
            report.files += 1;
            let file = fs::File::open(&path).map_err(|source| ServiceError::File { path: path.clone(), source })?;
            for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<StreamRecord>(&line) {
                    Ok(r) => records.push(r),
                    Err(e) => report.errors.push(format!("{}:{}: {e}", path.display(), i + 1)),
                }
            }
        }
        let out = ingest_stream(records, &keywords(store)?, STREAM_CAPACITY, STREAM_BATCH);
        report.dropped = out.dropped;
        extracted.extend(out.tweets.into_iter().map(|t| ArchiveRecord::new(Record::Tweet(t), captured_at)));
    } else {
        let site = find_adapter(store, adapter)?;
        let Some(forum_id) = site.forum_id.clone() else {
            return Err(ServiceError::Config(format!(
                "adapter {adapter:?} reads shop showcases; use snapshot-shops"
            )));
        };
        store.declare_forum(ForumConfig { id: forum_id.clone(), name: forum_id, source: site.source.clone() })?;
        for path in input_files(input, &["html", "htm"])? {
            report.files += 1;
            let page = fs::read(&path).map_err(|source| ServiceError::File { path: path.clone(), source })?;
            let ex = extract_forum_records(&page, &site, captured_at)?;
            report.errors.extend(
                ex.issues.iter().map(|i| format!("{}: {} block {}: {}", path.display(), i.kind, i.index, i.problem)),
            );
            extracted.extend(ex.records);
        }
    }
    let mut builder = store.builder()?;
    let mut fresh = Vec::new();
    for r in extracted {
        let is_doc = matches!(r.record, Record::Post(_) | Record::Tweet(_));
        match r.apply(&mut builder)? {
            Added::Duplicate if is_doc => report.skipped += 1,
            Added::Duplicate => report.unchanged += 1,
            Added::New | Added::Updated => {
                match r.record {
                    Record::Post(_) => report.posts += 1,
                    Record::Tweet(_) => report.tweets += 1,
                    _ => report.structure += 1,
                }
                fresh.push(r);
            }
        }
    }
    store.append_records(adapter, &fresh)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub path: PathBuf,
    pub bytes: u64,
    pub docs: u64,
    pub vocabulary: u64,
    pub docs_per_source: BTreeMap<String, u64>,
}

/// Rebuilds the index from everything in the store and replaces the
/// artifact atomically.
pub fn build_index(store: &Store) -> Result<IndexReport, ServiceError> {
    let index = TermIndex::build(&store.corpus()?);
    if index.doc_count() == 0 {
        return Err(ServiceError::EmptyStore);
    }
    let bytes = store.write_index(&index)?;
    Ok(IndexReport {
        path: store.index_path(),
        bytes,
        docs: index.doc_count() as u64,
        vocabulary: index.vocabulary_size() as u64,
        docs_per_source: index.sources().into_iter().map(|(s, n)| (s.tag().to_string(), n)).collect(),
    })
}

/// Serves pages from a directory laid out as `<host>/<path>`, with
/// `index.html` for paths ending in `/` and `.html` appended to paths
/// without an extension.
#[derive(Debug, Clone)]
pub struct PageDir {
    root: PathBuf,
}

impl PageDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        PageDir { root: root.into() }
    }

    pub fn path_for(&self, url: &str) -> Option<PathBuf> {
        let host = host_of(url).ok()?;
        let rest = url.split_once("://")?.1;
        let path = rest.find('/').map_or("", |i| &rest[i + 1..]);
        let path = path.split(['?', '#']).next().unwrap_or("");
        if path.split('/').any(|seg| seg == "..") {
            return None;
        }
        let mut file = self.root.join(host);
        if path.is_empty() || path.ends_with('/') {
            file = file.join(path).join("index.html");
        } else if Path::new(path).extension().is_none() {
            file = file.join(format!("{path}.html"));
        } else {
            file = file.join(path);
        }
        Some(file)
    }
}

impl Fetcher for PageDir {
    async fn fetch(&self, url: &str) -> Result<Vec<u8>, FetchFailure> {
        let fail = |reason: String| FetchFailure { url: url.to_string(), reason };
        let path = self.path_for(url).ok_or_else(|| fail("cannot map url to a file".into()))?;
        fs::read(&path).map_err(|e| fail(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShopFailure {
    pub shop_id: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotReport {
    pub captured_at: NaiveDate,
    /// Shops captured by this run.
    pub created: Vec<u32>,
    /// Shops already captured on this date.
    pub duplicates: Vec<u32>,
    pub failures: Vec<ShopFailure>,
    /// Captured shops whose showcase held no listings.
    pub empty_showcase: Vec<u32>,
}

/// Captures every configured shop once for `captured_at`. Failures are
/// reported per shop and do not stop the run.
pub async fn snapshot_shops<F: Fetcher>(
    store: &Store,
    fetcher: &F,
    captured_at: NaiveDate,
) -> Result<SnapshotReport, ServiceError> {
    let config = store.config()?;
    let mut report =
        SnapshotReport { captured_at, created: vec![], duplicates: vec![], failures: vec![], empty_showcase: vec![] };
    let mut due = Vec::new();
    for shop in &config.shops {
        if store.has_snapshot(shop.id, captured_at)? {
            report.duplicates.push(shop.id);
        } else {
            due.push(shop);
        }
    }
    let urls: Vec<String> = due.iter().flat_map(|s| s.showcase.iter().cloned()).collect();
    let fetched = schedule_fetch(&urls, &config.fetch, fetcher).await?;
    for shop in due {
        let fail = |reason: String| ShopFailure { shop_id: shop.id, reason };
        if shop.showcase.is_empty() {
            report.failures.push(fail("no showcase pages configured".into()));
            continue;
        }
        if let Some(missing) = shop.showcase.iter().find(|u| !fetched.pages.contains_key(*u)) {
            let reason = fetched
                .failed
                .iter()
                .find(|f| &f.url == missing)
                .map_or_else(|| format!("{missing} not fetched"), |f| f.to_string());
            report.failures.push(fail(reason));
            continue;
        }
        let pages: Vec<&[u8]> = shop.showcase.iter().map(|u| fetched.pages[u].as_slice()).collect();
        let capture = find_adapter(store, &shop.adapter)
            .and_then(|adapter| Ok(extract_shop_snapshot(&pages, shop, &adapter, captured_at)?));
        match capture {
            Err(e) => report.failures.push(fail(e.to_string())),
            Ok(capture) => match store.insert_snapshot(&capture.snapshot) {
                Ok(()) => {
                    report.created.push(shop.id);
                    if capture.empty_showcase {
                        report.empty_showcase.push(shop.id);
                    }
                }
                Err(ServiceError::DuplicateSnapshot { .. }) => report.duplicates.push(shop.id),
                Err(e) => return Err(e),
            },
        }
    }
    Ok(report)
}
