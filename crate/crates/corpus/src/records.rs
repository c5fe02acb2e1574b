use std::collections::BTreeSet;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::SourceKind;

/// One node of a forum's section tree. Depth 0 is the forum root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionNode {
    pub id: String,
    pub forum_id: String,
    pub name: String,
    pub parent_id: Option<String>,
    pub depth: u32,
    /// Child ids in display order.
    #[serde(default)]
    pub children: Vec<String>,
}

/// A forum and its section tree, stored root first then in depth-first
/// display order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forum {
    pub id: String,
    pub name: String,
    pub source: SourceKind,
    pub sections: Vec<SectionNode>,
}

impl Forum {
    pub fn root(&self) -> Option<&SectionNode> {
        self.sections.iter().find(|s| s.parent_id.is_none())
    }

    pub fn section(&self, id: &str) -> Option<&SectionNode> {
        self.sections.iter().find(|s| s.id == id)
    }

    pub fn max_depth(&self) -> u32 {
        self.sections.iter().map(|s| s.depth).max().unwrap_or(0)
    }

    /// `id` and every section below it.
    pub fn descendants(&self, id: &str) -> Vec<&SectionNode> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(current) = stack.pop() {
            if let Some(node) = self.section(current) {
                out.push(node);
                stack.extend(node.children.iter().rev().map(String::as_str));
            }
        }
        out
    }

    /// Sections at `depth`, in tree (pre-order) order.
    pub fn sections_at_depth(&self, depth: u32) -> Vec<&SectionNode> {
        match self.root() {
            Some(root) => self.descendants(&root.id).into_iter().filter(|s| s.depth == depth).collect(),
            None => Vec::new(),
        }
    }

    /// Rebuilds every node's `children` from the parent links, keeping the
    /// order in which sections appear, and re-sorts the sections into
    /// pre-order.
    pub fn relink(&mut self) {
        let ids: Vec<(String, Option<String>)> =
            self.sections.iter().map(|s| (s.id.clone(), s.parent_id.clone())).collect();
        for node in &mut self.sections {
            node.children = ids
                .iter()
                .filter(|(_, parent)| parent.as_deref() == Some(node.id.as_str()))
                .map(|(id, _)| id.clone())
                .collect();
        }
        if let Some(root) = self.root().map(|r| r.id.clone()) {
            let order: Vec<String> = self.descendants(&root).iter().map(|s| s.id.clone()).collect();
            if order.len() == self.sections.len() {
                self.sections.sort_by_key(|s| order.iter().position(|o| *o == s.id));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thread {
    pub id: String,
    pub forum_id: String,
    pub section_id: String,
    pub title: String,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub thread_id: String,
    pub author_id: String,
    pub created_at: DateTime<Utc>,
    /// May be empty after sanitisation; the record is kept regardless.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub id: String,
    pub forum_id: String,
    pub handle: String,
    pub location_raw: Option<String>,
    /// Number of posts authored; recomputed when a corpus is assembled.
    #[serde(default)]
    pub post_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub created_at: DateTime<Utc>,
    pub author_handle: String,
    pub text: String,
    /// Lexicon terms found in the text; never empty.
    pub matched_keywords: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShopSnapshot {
    pub shop_id: u32,
    pub domain: String,
    pub captured_at: NaiveDate,
    pub listings: Vec<ShopListing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShopListing {
    pub name: String,
    pub price: Option<f64>,
    /// ISO 4217 code, or `BTC`.
    pub currency: Option<String>,
    pub unit: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, parent: Option<&str>, depth: u32) -> SectionNode {
        SectionNode {
            id: id.into(),
            forum_id: "f".into(),
            name: id.to_uppercase(),
            parent_id: parent.map(Into::into),
            depth,
            children: vec![],
        }
    }

    #[test]
    fn relink_orders_preorder() {
        let mut f = Forum {
            id: "f".into(),
            name: "F".into(),
            source: SourceKind::ForumDrugsforumLike,
            sections: vec![
                node("b1", Some("b"), 2),
                node("a", Some("root"), 1),
                node("root", None, 0),
                node("b", Some("root"), 1),
                node("a1", Some("a"), 2),
            ],
        };
        f.relink();
        let order: Vec<&str> = f.sections.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(order, ["root", "a", "a1", "b", "b1"]);
        assert_eq!(f.section("root").unwrap().children, ["a", "b"]);
        let at2: Vec<&str> = f.sections_at_depth(2).iter().map(|s| s.id.as_str()).collect();
        assert_eq!(at2, ["a1", "b1"]);
        assert_eq!(f.descendants("b").len(), 2);
        assert_eq!(f.max_depth(), 2);
    }
}
