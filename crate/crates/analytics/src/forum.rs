//! Structural analyses over raw forum records: treemap, activity and
//! geography.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use npswatch_corpus::{Corpus, Forum};
use serde::{Deserialize, Serialize};

use crate::AnalyticsError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreemapNode {
    pub id: String,
    pub name: String,
    /// Posts in threads filed directly under this section.
    pub own_posts: u64,
    /// `own_posts` plus the children's `subtree_posts`.
    pub subtree_posts: u64,
    pub children: Vec<TreemapNode>,
}

impl TreemapNode {
    /// Whether every node's subtree count is its own count plus its
    /// children's.
    pub fn is_additive(&self) -> bool {
        self.subtree_posts == self.own_posts + self.children.iter().map(|c| c.subtree_posts).sum::<u64>()
            && self.children.iter().all(TreemapNode::is_additive)
    }
}

fn forum<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Forum, AnalyticsError> {
    corpus.forum(id).ok_or_else(|| AnalyticsError::UnknownForum(id.to_string()))
}

/// Posts per section of `forum`, aggregated bottom-up over its tree.
pub fn treemap(corpus: &Corpus, forum_id: &str) -> Result<TreemapNode, AnalyticsError> {
    let f = forum(corpus, forum_id)?;
    let section_of: HashMap<&str, &str> =
        corpus.threads.iter().filter(|t| t.forum_id == forum_id).map(|t| (t.id.as_str(), t.section_id.as_str())).collect();
    let mut own: HashMap<&str, u64> = HashMap::new();
    for p in &corpus.posts {
        if let Some(s) = section_of.get(p.thread_id.as_str()) {
            *own.entry(*s).or_default() += 1;
        }
    }
    fn node(f: &Forum, id: &str, own: &HashMap<&str, u64>) -> TreemapNode {
        let s = f.section(id).expect("child ids come from the tree");
        let children: Vec<TreemapNode> = s.children.iter().map(|c| node(f, c, own)).collect();
        let own_posts = own.get(id).copied().unwrap_or(0);
        let subtree_posts = own_posts + children.iter().map(|c| c.subtree_posts).sum::<u64>();
        TreemapNode { id: s.id.clone(), name: s.name.clone(), own_posts, subtree_posts, children }
    }
    let root = f.root().ok_or_else(|| AnalyticsError::UnknownForum(forum_id.to_string()))?;
    Ok(node(f, &root.id, &own))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityMetric {
    PostsPerUser,
    PostsPerThread,
}

impl std::str::FromStr for ActivityMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "posts_per_user" => Ok(ActivityMetric::PostsPerUser),
            "posts_per_thread" => Ok(ActivityMetric::PostsPerThread),
            other => Err(format!("unknown metric {other:?}; expected posts_per_user or posts_per_thread")),
        }
    }
}

/// A multiset of positive counts, stored as value → multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityHistogram {
    pub forum: String,
    pub metric: ActivityMetric,
    pub frequencies: BTreeMap<u64, u64>,
}

impl ActivityHistogram {
    /// All values in ascending order, with repeats.
    pub fn values(&self) -> Vec<u64> {
        self.frequencies.iter().flat_map(|(&v, &n)| std::iter::repeat_n(v, n as usize)).collect()
    }

    pub fn len(&self) -> u64 {
        self.frequencies.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Most frequent value; the largest such value on ties.
    pub fn mode(&self) -> Option<u64> {
        self.frequencies.iter().max_by_key(|(&v, &n)| (n, v)).map(|(&v, _)| v)
    }
}

/// Posts per author or per thread in `forum`. Only authors and threads with
/// at least one post appear.
pub fn activity_histogram(corpus: &Corpus, forum_id: &str, metric: ActivityMetric) -> Result<ActivityHistogram, AnalyticsError> {
    forum(corpus, forum_id)?;
    let threads: HashSet<&str> =
        corpus.threads.iter().filter(|t| t.forum_id == forum_id).map(|t| t.id.as_str()).collect();
    let mut per: HashMap<&str, u64> = HashMap::new();
    for p in corpus.posts.iter().filter(|p| threads.contains(p.thread_id.as_str())) {
        let key = match metric {
            ActivityMetric::PostsPerUser => p.author_id.as_str(),
            ActivityMetric::PostsPerThread => p.thread_id.as_str(),
        };
        *per.entry(key).or_default() += 1;
    }
    let mut frequencies = BTreeMap::new();
    for n in per.into_values() {
        *frequencies.entry(n).or_default() += 1;
    }
    Ok(ActivityHistogram { forum: forum_id.to_string(), metric, frequencies })
}

/// Place names mapped to ISO 3166-1 alpha-2 codes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Gazetteer {
    /// (folded name, code, is a country)
    entries: Vec<(String, String, bool)>,
}

impl Gazetteer {
    /// Tab-separated `name  code  kind` rows, kind being `country` or `city`;
    /// `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, AnalyticsError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |problem: &str| AnalyticsError::InvalidGazetteer { line: i + 1, problem: problem.into() };
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [name, code, kind] = cols.as_slice() else { return Err(bad("expected 3 tab-separated columns")) };
            if name.is_empty() || code.len() != 2 || !code.chars().all(|c| c.is_ascii_uppercase()) {
                return Err(bad("empty name or code not two upper-case letters"));
            }
            let country = match *kind {
                "country" => true,
                "city" => false,
                _ => return Err(bad("kind must be country or city")),
            };
            entries.push((name.to_lowercase(), code.to_string(), country));
        }
        Ok(Gazetteer { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Country code for a free-text location. Matches are case-insensitive
    /// and must not start or end inside a word. Country names take
    /// precedence over city names; among matches of one kind the longest
    /// wins, then the smaller code. `None` when nothing matches.
    pub fn resolve(&self, location: &str) -> Option<&str> {
        let hay = location.to_lowercase();
        let word = |c: Option<char>| c.is_some_and(char::is_alphanumeric);
        self.entries
            .iter()
            .filter(|(name, _, _)| {
                hay.match_indices(name.as_str()).any(|(i, m)| {
                    !word(hay[..i].chars().next_back()) && !word(hay[i + m.len()..].chars().next())
                })
            })
            .max_by(|a, b| (a.2, a.0.chars().count(), &b.1).cmp(&(b.2, b.0.chars().count(), &a.1)))
            .map(|(_, code, _)| code.as_str())
    }
}

/// The gazetteer shipped with the crate.
pub fn default_gazetteer() -> &'static Gazetteer {
    static G: OnceLock<Gazetteer> = OnceLock::new();
    G.get_or_init(|| Gazetteer::parse(include_str!("../data/gazetteer.tsv")).expect("shipped gazetteer is valid"))
}

/// Code used for users whose location is absent or unresolved.
pub const UNKNOWN_COUNTRY: &str = "UNKNOWN";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeoDistribution {
    pub forum: String,
    /// Users considered, i.e. profiles of the forum.
    pub users: u64,
    /// ISO code or `UNKNOWN` → users; sums to `users`.
    pub counts: BTreeMap<String, u64>,
}

/// Users of `forum` per country of their stated location.
pub fn geo_distribution(corpus: &Corpus, forum_id: &str, gazetteer: &Gazetteer) -> Result<GeoDistribution, AnalyticsError> {
    forum(corpus, forum_id)?;
    let mut counts = BTreeMap::new();
    let mut users = 0;
    for u in corpus.users.iter().filter(|u| u.forum_id == forum_id) {
        let code = u.location_raw.as_deref().and_then(|l| gazetteer.resolve(l)).unwrap_or(UNKNOWN_COUNTRY);
        *counts.entry(code.to_string()).or_default() += 1;
        users += 1;
    }
    Ok(GeoDistribution { forum: forum_id.to_string(), users, counts })
}
