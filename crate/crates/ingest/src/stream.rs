//! Keyword-filtered microblog stream.

use std::collections::{BTreeSet, VecDeque};

use chrono::{DateTime, Utc};
use npswatch_corpus::token::is_token;
use npswatch_corpus::{tokenize, Tweet};
use serde::{Deserialize, Serialize};

use crate::IngestError;

/// A record as delivered by the streaming source, before filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub author_handle: String,
    pub text: String,
}

/// Parses a keyword list: one term per line, `#` comments. Every keyword
/// must be a single token; keywords are case-folded.
pub fn parse_keywords(text: &str) -> Result<BTreeSet<String>, IngestError> {
    let mut out = BTreeSet::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let folded = line.to_lowercase();
        if !is_token(&folded) {
            return Err(IngestError::InvalidKeyword(line.to_string()));
        }
        out.insert(folded);
    }
    Ok(out)
}

/// Turns a record into a tweet if any keyword occurs among its tokens.
pub fn match_keywords(record: StreamRecord, keywords: &BTreeSet<String>) -> Option<Tweet> {
    let matched: BTreeSet<String> = tokenize(&record.text).into_iter().filter(|t| keywords.contains(t)).collect();
    (!matched.is_empty()).then_some(Tweet {
        id: record.id,
        created_at: record.created_at,
        author_handle: record.author_handle,
        text: record.text,
        matched_keywords: matched,
    })
}

/// Bounded buffer between a streaming source and the filter. When full, the
/// oldest unprocessed record is dropped to make room.
#[derive(Debug)]
pub struct StreamBuffer {
    keywords: BTreeSet<String>,
    capacity: usize,
    pending: VecDeque<StreamRecord>,
    dropped: u64,
}

impl StreamBuffer {
    pub fn new(keywords: BTreeSet<String>, capacity: usize) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        StreamBuffer { keywords, capacity, pending: VecDeque::with_capacity(capacity), dropped: 0 }
    }

    /// Queues a record. On overflow the record is still queued, the oldest
    /// one is discarded, and the overflow is reported.
    pub fn push(&mut self, record: StreamRecord) -> Result<(), IngestError> {
        let overflow = if self.pending.len() == self.capacity { self.pending.pop_front() } else { None };
        self.pending.push_back(record);
        match overflow {
            Some(old) => {
                self.dropped += 1;
                Err(IngestError::BackpressureOverflow { dropped_id: old.id, total_dropped: self.dropped })
            }
            None => Ok(()),
        }
    }

    /// Filters every queued record, in arrival order.
    pub fn drain(&mut self) -> Vec<Tweet> {
        let keywords = &self.keywords;
        self.pending.drain(..).filter_map(|r| match_keywords(r, keywords)).collect()
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// Records discarded because the buffer was full.
    pub fn dropped(&self) -> u64 {
        self.dropped
    }
}

/// Outcome of [`ingest_stream`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StreamOutcome {
    pub tweets: Vec<Tweet>,
    pub dropped: u64,
}

/// Filters a stream through a buffer of `capacity`, draining whenever
/// `batch` records have arrived. With `batch <= capacity` nothing is dropped.
pub fn ingest_stream(
    records: impl IntoIterator<Item = StreamRecord>,
    keywords: &BTreeSet<String>,
    capacity: usize,
    batch: usize,
) -> StreamOutcome {
    let mut buffer = StreamBuffer::new(keywords.clone(), capacity);
    let mut tweets = Vec::new();
    for (i, r) in records.into_iter().enumerate() {
        if let Err(e) = buffer.push(r) {
            tracing::warn!("{e}");
        }
        if (i + 1) % batch.max(1) == 0 {
            tweets.extend(buffer.drain());
        }
    }
    tweets.extend(buffer.drain());
    StreamOutcome { tweets, dropped: buffer.dropped() }
}
