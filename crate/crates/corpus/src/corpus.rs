use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::{Forum, ModelError, Post, SectionNode, ShopSnapshot, SourceKind, Thread, Tweet, UserProfile};

/// Everything the engine knows, in one value. Collections are kept in a
/// canonical order by [`Corpus::normalize`] so that equal content serialises
/// identically.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub forums: Vec<Forum>,
    pub threads: Vec<Thread>,
    pub posts: Vec<Post>,
    pub users: Vec<UserProfile>,
    pub tweets: Vec<Tweet>,
    pub snapshots: Vec<ShopSnapshot>,
}

/// Outcome of adding one record to a [`CorpusBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Added {
    New,
    /// A record with this id was already present and nothing changed.
    Duplicate,
    /// A section that was already known has been replaced by a newer view.
    Updated,
}

impl Corpus {
    pub fn forum(&self, id: &str) -> Option<&Forum> {
        self.forums.iter().find(|f| f.id == id)
    }

    pub fn forum_by_source(&self, source: &SourceKind) -> Option<&Forum> {
        self.forums.iter().find(|f| &f.source == source)
    }

    pub fn threads_by_id(&self) -> HashMap<&str, &Thread> {
        self.threads.iter().map(|t| (t.id.as_str(), t)).collect()
    }

    /// Posts whose thread belongs to `forum_id`.
    pub fn forum_posts<'a>(&'a self, forum_id: &'a str) -> impl Iterator<Item = &'a Post> + 'a {
        let threads: HashSet<&str> = self
            .threads
            .iter()
            .filter(|t| t.forum_id == forum_id)
            .map(|t| t.id.as_str())
            .collect();
        self.posts.iter().filter(move |p| threads.contains(p.thread_id.as_str()))
    }

    /// Puts every collection into canonical order, rebuilds section child
    /// lists, and recomputes user post counts.
    pub fn normalize(&mut self) {
        self.forums.sort_by(|a, b| a.id.cmp(&b.id));
        for forum in &mut self.forums {
            forum.relink();
        }
        self.threads.sort_by(|a, b| a.id.cmp(&b.id));
        self.posts.sort_by(|a, b| a.id.cmp(&b.id));
        self.users.sort_by(|a, b| a.id.cmp(&b.id));
        self.tweets.sort_by(|a, b| a.id.cmp(&b.id));
        self.snapshots.sort_by_key(|s| (s.shop_id, s.captured_at));
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for p in &self.posts {
            *counts.entry(p.author_id.as_str()).or_default() += 1;
        }
        for u in &mut self.users {
            u.post_count = counts.get(u.id.as_str()).copied().unwrap_or(0);
        }
    }

    /// Checks every structural and referential invariant. `now` bounds post
    /// timestamps from above.
    pub fn validate(&self, now: DateTime<Utc>) -> Result<(), ModelError> {
        let mut section_ids = HashSet::new();
        unique(self.forums.iter().map(|f| f.id.as_str()), "forum")?;
        for forum in &self.forums {
            validate_tree(forum)?;
            for s in &forum.sections {
                if !section_ids.insert(s.id.as_str()) {
                    return Err(ModelError::DuplicateId { kind: "section", id: s.id.clone() });
                }
            }
        }

        unique(self.threads.iter().map(|t| t.id.as_str()), "thread")?;
        for t in &self.threads {
            let forum = self.forum(&t.forum_id).ok_or_else(|| dangling("thread", &t.id, "forum", &t.forum_id))?;
            if forum.section(&t.section_id).is_none() {
                return Err(dangling("thread", &t.id, "section", &t.section_id));
            }
        }

        unique(
            self.posts.iter().map(|p| p.id.as_str()).chain(self.tweets.iter().map(|t| t.id.as_str())),
            "document",
        )?;
        let threads = self.threads_by_id();
        let mut authored: HashMap<&str, u64> = HashMap::new();
        for p in &self.posts {
            if !threads.contains_key(p.thread_id.as_str()) {
                return Err(dangling("post", &p.id, "thread", &p.thread_id));
            }
            if p.created_at > now {
                return Err(ModelError::PostOutOfRange { id: p.id.clone() });
            }
            *authored.entry(p.author_id.as_str()).or_default() += 1;
        }

        unique(self.users.iter().map(|u| u.id.as_str()), "user")?;
        for u in &self.users {
            if self.forum(&u.forum_id).is_none() {
                return Err(dangling("user", &u.id, "forum", &u.forum_id));
            }
            let actual = authored.get(u.id.as_str()).copied().unwrap_or(0);
            if u.post_count != actual {
                return Err(ModelError::PostCountMismatch { id: u.id.clone(), recorded: u.post_count, actual });
            }
        }

        for t in &self.tweets {
            if t.matched_keywords.is_empty() {
                return Err(ModelError::UnmatchedTweet { id: t.id.clone() });
            }
        }

        let mut last: BTreeMap<u32, chrono::NaiveDate> = BTreeMap::new();
        for s in &self.snapshots {
            if let Some(&previous) = last.get(&s.shop_id) {
                if s.captured_at <= previous {
                    return Err(ModelError::SnapshotOrder { shop_id: s.shop_id, date: s.captured_at, previous });
                }
            }
            last.insert(s.shop_id, s.captured_at);
            for l in &s.listings {
                if l.name.trim().is_empty() {
                    return Err(ModelError::EmptyListingName { shop_id: s.shop_id });
                }
                if l.price.is_some_and(|p| p < 0.0 || p.is_nan()) {
                    return Err(ModelError::NegativePrice { shop_id: s.shop_id, name: l.name.clone() });
                }
            }
        }
        Ok(())
    }
}

fn unique<'a>(ids: impl Iterator<Item = &'a str>, kind: &'static str) -> Result<(), ModelError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(ModelError::DuplicateId { kind, id: id.to_string() });
        }
    }
    Ok(())
}

fn dangling(kind: &'static str, id: &str, target: &'static str, target_id: &str) -> ModelError {
    ModelError::DanglingReference { kind, id: id.to_string(), target, target_id: target_id.to_string() }
}

fn validate_tree(forum: &Forum) -> Result<(), ModelError> {
    let bad = |problem: String| ModelError::InvalidTree { forum: forum.id.clone(), problem };
    let by_id: HashMap<&str, &SectionNode> = forum.sections.iter().map(|s| (s.id.as_str(), s)).collect();
    if by_id.len() != forum.sections.len() {
        return Err(bad("duplicate section id".into()));
    }
    let roots: Vec<&SectionNode> = forum.sections.iter().filter(|s| s.parent_id.is_none()).collect();
    let [root] = roots.as_slice() else {
        return Err(bad(format!("expected one root section, found {}", roots.len())));
    };
    if root.depth != 0 {
        return Err(bad(format!("root {:?} has depth {}", root.id, root.depth)));
    }
    let mut edges = 0;
    for s in &forum.sections {
        if s.forum_id != forum.id {
            return Err(bad(format!("section {:?} belongs to forum {:?}", s.id, s.forum_id)));
        }
        if let Some(pid) = &s.parent_id {
            let parent = by_id.get(pid.as_str()).ok_or_else(|| bad(format!("section {:?} has unknown parent {pid:?}", s.id)))?;
            if s.depth != parent.depth + 1 {
                return Err(bad(format!("section {:?} has depth {} under depth {}", s.id, s.depth, parent.depth)));
            }
            if !parent.children.contains(&s.id) {
                return Err(bad(format!("section {:?} missing from its parent's children", s.id)));
            }
            edges += 1;
        }
        for c in &s.children {
            match by_id.get(c.as_str()) {
                Some(child) if child.parent_id.as_deref() == Some(s.id.as_str()) => {}
                _ => return Err(bad(format!("section {:?} lists {c:?} as a child", s.id))),
            }
        }
    }
    let reachable: BTreeSet<&str> = forum.descendants(&root.id).iter().map(|s| s.id.as_str()).collect();
    if edges + 1 != forum.sections.len() || reachable.len() != forum.sections.len() {
        return Err(bad("sections are not a single rooted tree".into()));
    }
    Ok(())
}

/// Accumulates records from archives into a [`Corpus`], skipping records
/// whose id is already known. Sections are the exception: a later view of a
/// section replaces the earlier one, so the corpus reflects the latest tree.
#[derive(Debug, Default)]
pub struct CorpusBuilder {
    corpus: Corpus,
    threads: HashSet<String>,
    documents: HashSet<String>,
    users: HashSet<String>,
    snapshots: HashSet<(u32, chrono::NaiveDate)>,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        CorpusBuilder::default()
    }

    /// Starts from an existing corpus; its records count as already seen.
    pub fn from_corpus(corpus: Corpus) -> Self {
        CorpusBuilder {
            threads: corpus.threads.iter().map(|t| t.id.clone()).collect(),
            documents: corpus.posts.iter().map(|p| p.id.clone()).chain(corpus.tweets.iter().map(|t| t.id.clone())).collect(),
            users: corpus.users.iter().map(|u| u.id.clone()).collect(),
            snapshots: corpus.snapshots.iter().map(|s| (s.shop_id, s.captured_at)).collect(),
            corpus,
        }
    }

    pub fn add_forum(&mut self, id: &str, name: &str, source: SourceKind) -> Added {
        match self.corpus.forums.iter_mut().find(|f| f.id == id) {
            Some(f) if f.name == name && f.source == source => Added::Duplicate,
            Some(f) => {
                f.name = name.to_string();
                f.source = source;
                Added::Updated
            }
            None => {
                self.corpus.forums.push(Forum { id: id.into(), name: name.into(), source, sections: vec![] });
                Added::New
            }
        }
    }

    pub fn add_section(&mut self, section: SectionNode) -> Result<Added, ModelError> {
        let forum = self
            .corpus
            .forums
            .iter_mut()
            .find(|f| f.id == section.forum_id)
            .ok_or_else(|| dangling("section", &section.id, "forum", &section.forum_id))?;
        // Child lists are rebuilt from parent links on finish().
        let section = SectionNode { children: vec![], ..section };
        match forum.sections.iter_mut().find(|s| s.id == section.id) {
            Some(existing) => {
                let mut known = existing.clone();
                known.children.clear();
                if known == section {
                    Ok(Added::Duplicate)
                } else {
                    *existing = section;
                    Ok(Added::Updated)
                }
            }
            None => {
                forum.sections.push(section);
                Ok(Added::New)
            }
        }
    }

    pub fn add_thread(&mut self, thread: Thread) -> Added {
        if !self.threads.insert(thread.id.clone()) {
            return Added::Duplicate;
        }
        self.corpus.threads.push(thread);
        Added::New
    }

    pub fn add_post(&mut self, post: Post) -> Added {
        if !self.documents.insert(post.id.clone()) {
            return Added::Duplicate;
        }
        self.corpus.posts.push(post);
        Added::New
    }

    pub fn add_user(&mut self, user: UserProfile) -> Added {
        if !self.users.insert(user.id.clone()) {
            return Added::Duplicate;
        }
        self.corpus.users.push(user);
        Added::New
    }

    pub fn add_tweet(&mut self, tweet: Tweet) -> Added {
        if !self.documents.insert(tweet.id.clone()) {
            return Added::Duplicate;
        }
        self.corpus.tweets.push(tweet);
        Added::New
    }

    pub fn add_snapshot(&mut self, snapshot: ShopSnapshot) -> Added {
        if !self.snapshots.insert((snapshot.shop_id, snapshot.captured_at)) {
            return Added::Duplicate;
        }
        self.corpus.snapshots.push(snapshot);
        Added::New
    }

    /// The assembled corpus in canonical order. Not validated.
    pub fn finish(mut self) -> Corpus {
        self.corpus.normalize();
        self.corpus
    }
}
