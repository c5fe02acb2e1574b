//! Forum page extraction.

use chrono::{DateTime, Utc};
use npswatch_corpus::{Post, SectionNode, Thread, UserProfile};
use scraper::Html;
use serde::{Deserialize, Serialize};

use crate::adapter::{first_text, text_of, Compiled};
use crate::archive::{ArchiveRecord, Record};
use crate::dates::parse_post_date;
use crate::{IngestError, SiteAdapter};

/// A block skipped during extraction, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockIssue {
    pub kind: String,
    /// Position of the block among those matched on the page.
    pub index: usize,
    pub problem: String,
}

/// Records extracted from one page, in emission order, plus skipped blocks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Extraction {
    pub records: Vec<ArchiveRecord>,
    pub issues: Vec<BlockIssue>,
}

impl Extraction {
    pub fn count(&self, kind: &str) -> usize {
        self.records
            .iter()
            .filter(|r| {
                matches!(
                    (&r.record, kind),
                    (Record::Section(_), "section")
                        | (Record::Thread(_), "thread")
                        | (Record::Post(_), "post")
                        | (Record::User(_), "user")
                )
            })
            .count()
    }
}

pub(crate) fn parse_page(page: &[u8], adapter: &SiteAdapter) -> Result<(Html, Compiled), IngestError> {
    let text = std::str::from_utf8(page).map_err(|e| IngestError::MalformedPage(format!("not UTF-8: {e}")))?;
    let compiled = adapter.compile()?;
    let html = Html::parse_document(text);
    if !adapter.landmarks.iter().any(|l| html.select(compiled.get(l)).next().is_some()) {
        return Err(IngestError::AdapterMismatch { adapter: adapter.name.clone(), landmark: adapter.landmarks.join(" | ") });
    }
    Ok((html, compiled))
}

/// Extracts sections, the thread, its posts and user profiles from one
/// forum page captured at `captured_at`.
///
/// Section records come first: the breadcrumb path outermost first, then any
/// listed sub-sections. Every post belongs to the page's thread, which sits
/// in the last breadcrumb section. Blocks missing an id or an unparseable
/// date are skipped and reported in [`Extraction::issues`].
pub fn extract_forum_records(
    page: &[u8],
    adapter: &SiteAdapter,
    captured_at: DateTime<Utc>,
) -> Result<Extraction, IngestError> {
    if !adapter.source.is_forum() {
        return Err(IngestError::InvalidAdapter { adapter: adapter.name.clone(), problem: "not a forum adapter".into() });
    }
    let forum_id = adapter.forum_id.clone().unwrap_or_default();
    let (html, sel) = parse_page(page, adapter)?;
    let root = html.root_element();
    let mut out = Extraction::default();
    let mut emit = |r: Record| out.records.push(ArchiveRecord::new(r, captured_at));
    let mut issues = Vec::new();

    let mut current_section: Option<(String, u32)> = None;
    if let Some(rules) = &adapter.sections {
        let mut parent: Option<String> = None;
        for (depth, link) in root.select(sel.get(&rules.breadcrumb)).enumerate() {
            let Some(id) = link.value().attr(&rules.id_attr) else {
                issues.push(BlockIssue { kind: "breadcrumb".into(), index: depth, problem: format!("missing {}", rules.id_attr) });
                break;
            };
            emit(Record::Section(SectionNode {
                id: id.to_string(),
                forum_id: forum_id.clone(),
                name: text_of(link),
                parent_id: parent.clone(),
                depth: depth as u32,
                children: Vec::new(),
            }));
            parent = Some(id.to_string());
            current_section = Some((id.to_string(), depth as u32));
        }
        if let (Some(sub), Some((parent_id, depth))) = (&rules.subsection, &current_section) {
            for (i, link) in root.select(sel.get(sub)).enumerate() {
                match link.value().attr(&rules.id_attr) {
                    Some(id) => emit(Record::Section(SectionNode {
                        id: id.to_string(),
                        forum_id: forum_id.clone(),
                        name: text_of(link),
                        parent_id: Some(parent_id.clone()),
                        depth: depth + 1,
                        children: Vec::new(),
                    })),
                    None => issues.push(BlockIssue {
                        kind: "subsection".into(),
                        index: i,
                        problem: format!("missing {}", rules.id_attr),
                    }),
                }
            }
        }
    }

    if let (Some(trules), Some(prules)) = (&adapter.thread, &adapter.posts) {
        if let Some(container) = root.select(sel.get(&trules.container)).next() {
            let Some(thread_id) = container.value().attr(&trules.id_attr) else {
                return Err(IngestError::MalformedPage(format!("thread container lacks {}", trules.id_attr)));
            };
            let Some((section_id, _)) = &current_section else {
                return Err(IngestError::MalformedPage("thread page without a breadcrumb section".into()));
            };
            let title = first_text(container, sel.get(&trules.title)).unwrap_or_default();
            let mut posts = Vec::new();
            for (i, block) in root.select(sel.get(&prules.block)).enumerate() {
                let mut problem = |p: String| issues.push(BlockIssue { kind: "post".into(), index: i, problem: p });
                let Some(id) = block.value().attr(&prules.id_attr) else {
                    problem(format!("missing {}", prules.id_attr));
                    continue;
                };
                let author = block.select(sel.get(&prules.author)).next();
                let Some(author_id) = author.and_then(|a| a.value().attr(&prules.author_id_attr)) else {
                    problem("missing author".into());
                    continue;
                };
                let raw_date = first_text(block, sel.get(&prules.date)).unwrap_or_default();
                let Some(created_at) = parse_post_date(&raw_date, &adapter.date_formats, captured_at) else {
                    problem(format!("unparseable date {raw_date:?}"));
                    continue;
                };
                let text = first_text(block, sel.get(&prules.body)).unwrap_or_default();
                posts.push(Post {
                    id: id.to_string(),
                    thread_id: thread_id.to_string(),
                    author_id: author_id.to_string(),
                    created_at,
                    text,
                });
            }
            let created_at = posts.iter().map(|p| p.created_at).min().unwrap_or(captured_at);
            emit(Record::Thread(Thread {
                id: thread_id.to_string(),
                forum_id: forum_id.clone(),
                section_id: section_id.clone(),
                title,
                created_at,
            }));
            for p in posts {
                emit(Record::Post(p));
            }
        }
    }

    if let Some(rules) = &adapter.profiles {
        for (i, block) in root.select(sel.get(&rules.block)).enumerate() {
            let Some(id) = block.value().attr(&rules.id_attr) else {
                issues.push(BlockIssue { kind: "profile".into(), index: i, problem: format!("missing {}", rules.id_attr) });
                continue;
            };
            let location = first_text(block, sel.get(&rules.location)).filter(|l| !l.is_empty());
            emit(Record::User(UserProfile {
                id: id.to_string(),
                forum_id: forum_id.clone(),
                handle: first_text(block, sel.get(&rules.handle)).unwrap_or_default(),
                location_raw: location,
                post_count: 0,
            }));
        }
    }

    for issue in &issues {
        tracing::warn!(adapter = %adapter.name, kind = %issue.kind, index = issue.index, "skipped block: {}", issue.problem);
    }
    out.issues = issues;
    Ok(out)
}
