//! JSON Lines archive of ingested records.
//!
//! Each line is one object with fields `record_type`, `payload` and
//! `ingested_at`:
//!
//! ```text
//! {"record_type":"post","payload":{"id":"p1",...},"ingested_at":"2015-06-01T00:00:00Z"}
//! ```

use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use npswatch_corpus::{Added, CorpusBuilder, ModelError, Post, SectionNode, ShopSnapshot, Thread, Tweet, UserProfile};
use serde::{Deserialize, Serialize};

use crate::IngestError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record_type", content = "payload", rename_all = "snake_case")]
pub enum Record {
    Section(SectionNode),
    Thread(Thread),
    Post(Post),
    User(UserProfile),
    ListingSnapshot(ShopSnapshot),
    Tweet(Tweet),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveRecord {
    #[serde(flatten)]
    pub record: Record,
    pub ingested_at: DateTime<Utc>,
}

impl ArchiveRecord {
    pub fn new(record: Record, ingested_at: DateTime<Utc>) -> Self {
        ArchiveRecord { record, ingested_at }
    }

    /// Checks the payload against the invariants of its type that can be
    /// decided from the record alone.
    pub fn validate(&self) -> Result<(), IngestError> {
        let bad = |kind, id: &str, problem: &str| {
            Err(IngestError::InvalidRecord { kind, id: id.to_string(), problem: problem.to_string() })
        };
        match &self.record {
            Record::Section(s) => {
                if s.id.is_empty() || s.forum_id.is_empty() {
                    return bad("section", &s.id, "empty id");
                }
                if s.parent_id.is_none() != (s.depth == 0) {
                    return bad("section", &s.id, "only the root may lack a parent, and it has depth 0");
                }
            }
            Record::Thread(t) => {
                if t.id.is_empty() || t.forum_id.is_empty() || t.section_id.is_empty() {
                    return bad("thread", &t.id, "empty id or reference");
                }
            }
            Record::Post(p) => {
                if p.id.is_empty() || p.thread_id.is_empty() || p.author_id.is_empty() {
                    return bad("post", &p.id, "empty id or reference");
                }
                if p.created_at > self.ingested_at {
                    return bad("post", &p.id, "dated after ingestion");
                }
            }
            Record::User(u) => {
                if u.id.is_empty() || u.forum_id.is_empty() {
                    return bad("user", &u.id, "empty id or forum");
                }
            }
            Record::ListingSnapshot(s) => {
                let id = format!("shop-{}/{}", s.shop_id, s.captured_at);
                for l in &s.listings {
                    if l.name.trim().is_empty() || l.name.trim() != l.name {
                        return bad("listing_snapshot", &id, "listing names must be trimmed and non-empty");
                    }
                    if l.price.is_some_and(|p| p.is_nan() || p < 0.0) {
                        return bad("listing_snapshot", &id, "negative price");
                    }
                }
            }
            Record::Tweet(t) => {
                if t.matched_keywords.is_empty() {
                    return bad("tweet", &t.id, "no matched keyword");
                }
            }
        }
        Ok(())
    }

    /// Adds the payload to a corpus under construction.
    pub fn apply(&self, b: &mut CorpusBuilder) -> Result<Added, ModelError> {
        Ok(match &self.record {
            Record::Section(s) => return b.add_section(s.clone()),
            Record::Thread(t) => b.add_thread(t.clone()),
            Record::Post(p) => b.add_post(p.clone()),
            Record::User(u) => b.add_user(u.clone()),
            Record::ListingSnapshot(s) => b.add_snapshot(s.clone()),
            Record::Tweet(t) => b.add_tweet(t.clone()),
        })
    }
}

/// Validates and appends records, one JSON object per line.
pub fn write_archive<'a, W: Write>(
    out: &mut W,
    records: impl IntoIterator<Item = &'a ArchiveRecord>,
) -> Result<usize, IngestError> {
    let mut n = 0;
    for r in records {
        r.validate()?;
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
        n += 1;
    }
    out.flush()?;
    Ok(n)
}

/// Reads every record of an archive; blank lines are skipped.
pub fn read_archive<R: BufRead>(input: R) -> Result<Vec<ArchiveRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| IngestError::ArchiveLine { line: i + 1, source })?;
        out.push(record);
    }
    Ok(out)
}
