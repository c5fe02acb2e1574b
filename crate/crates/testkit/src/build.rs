//! Small helpers for assembling synthetic corpora.

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use npswatch_corpus::{CorpusBuilder, Post, SectionNode, SourceKind, Thread, UserProfile};
use rand::Rng;

/// Adds a forum whose tree is given as (id, name, parent) rows, root first.
pub fn add_forum(b: &mut CorpusBuilder, id: &str, name: &str, source: SourceKind, tree: &[(&str, &str, Option<&str>)]) {
    b.add_forum(id, name, source);
    let mut depth = std::collections::HashMap::new();
    for &(sid, sname, parent) in tree {
        let d = parent.map_or(0, |p| depth[p] + 1);
        depth.insert(sid, d);
        b.add_section(SectionNode {
            id: sid.into(),
            forum_id: id.into(),
            name: sname.into(),
            parent_id: parent.map(str::to_string),
            depth: d,
            children: Vec::new(),
        })
        .expect("fixture section is valid");
    }
}

pub fn ts(y: i32, m: u32, d: u32, h: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, m, d, h, 0, 0).unwrap()
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

/// Uniform instant in [from, to), whole seconds.
pub fn between(rng: &mut impl Rng, from: DateTime<Utc>, to: DateTime<Utc>) -> DateTime<Utc> {
    let s = rng.random_range(from.timestamp()..to.timestamp());
    Utc.timestamp_opt(s, 0).unwrap()
}

/// Index drawn with probability proportional to 1 / (i + 1)^`exponent`.
pub struct Zipf {
    cdf: Vec<f64>,
}

impl Zipf {
    pub fn new(n: usize, exponent: f64) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (0..n)
            .map(|i| {
                acc += ((i + 1) as f64).powf(-exponent);
                acc
            })
            .collect();
        for c in &mut cdf {
            *c /= acc;
        }
        Zipf { cdf }
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1)
    }
}

/// Random words from `vocab`, joined with assorted separators.
pub fn words(rng: &mut impl Rng, vocab: &[&str], n: usize) -> String {
    const SEPARATORS: [&str; 6] = [" ", " ", " ", ", ", "! ", " -- "];
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            out.push_str(SEPARATORS[rng.random_range(0..SEPARATORS.len())]);
        }
        out.push_str(vocab[rng.random_range(0..vocab.len())]);
    }
    out
}

pub fn thread(id: &str, forum: &str, section: &str, created_at: DateTime<Utc>) -> Thread {
    Thread { id: id.into(), forum_id: forum.into(), section_id: section.into(), title: format!("Thread {id}"), created_at }
}

pub fn post(id: &str, thread: &str, author: &str, created_at: DateTime<Utc>, text: String) -> Post {
    Post { id: id.into(), thread_id: thread.into(), author_id: author.into(), created_at, text }
}

pub fn user(id: &str, forum: &str, location: Option<&str>) -> UserProfile {
    UserProfile {
        id: id.into(),
        forum_id: forum.into(),
        handle: format!("@{id}"),
        location_raw: location.map(str::to_string),
        post_count: 0,
    }
}
