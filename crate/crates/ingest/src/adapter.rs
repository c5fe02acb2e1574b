//! Declarative site adapters.
//!
//! An adapter is a TOML table of CSS selectors describing where a site keeps
//! its breadcrumbs, sub-sections, thread header, post blocks, user profiles
//! and product cards. Supporting a new site means writing a new table.
//!
//! ```toml
//! name = "example-forum"
//! source = "forum-bl"
//! forum_id = "example"
//! date_formats = ["%Y-%m-%d %H:%M"]
//! landmarks = ["div#forum"]
//!
//! [sections]
//! breadcrumb = "nav.crumbs a"
//! id_attr = "data-id"
//! subsection = "ul.subforums a"
//!
//! [thread]
//! container = "div.thread"
//! id_attr = "data-thread"
//! title = "h1"
//!
//! [posts]
//! block = "div.post"
//! id_attr = "data-post"
//! author = "a.author"
//! author_id_attr = "data-user"
//! date = "span.date"
//! body = "div.body"
//! ```

use std::collections::HashMap;

use npswatch_corpus::SourceKind;
use scraper::{ElementRef, Selector};
use serde::{Deserialize, Serialize};

use crate::IngestError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionRules {
    /// Breadcrumb links, outermost first; the last one is the page's section.
    pub breadcrumb: String,
    /// Attribute carrying a section id on breadcrumb and sub-section links.
    pub id_attr: String,
    /// Links to the sub-sections listed on a section index page.
    #[serde(default)]
    pub subsection: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreadRules {
    pub container: String,
    pub id_attr: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostRules {
    pub block: String,
    pub id_attr: String,
    pub author: String,
    pub author_id_attr: String,
    pub date: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRules {
    pub block: String,
    pub id_attr: String,
    pub handle: String,
    pub location: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListingRules {
    pub card: String,
    pub name: String,
    #[serde(default)]
    pub price: Option<String>,
    #[serde(default)]
    pub unit: Option<String>,
}

/// Extraction rules for one site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteAdapter {
    pub name: String,
    pub source: SourceKind,
    /// Forum the extracted records belong to; forum adapters only.
    #[serde(default)]
    pub forum_id: Option<String>,
    /// chrono formats tried in order for absolute post dates.
    #[serde(default)]
    pub date_formats: Vec<String>,
    /// Selectors of which at least one must match for the page to be
    /// recognised as this site's.
    pub landmarks: Vec<String>,
    #[serde(default)]
    pub sections: Option<SectionRules>,
    #[serde(default)]
    pub thread: Option<ThreadRules>,
    #[serde(default)]
    pub posts: Option<PostRules>,
    #[serde(default)]
    pub profiles: Option<ProfileRules>,
    #[serde(default)]
    pub listings: Option<ListingRules>,
}

impl SiteAdapter {
    pub fn from_toml(text: &str) -> Result<Self, IngestError> {
        let adapter: SiteAdapter = toml::from_str(text)?;
        adapter.compile()?;
        Ok(adapter)
    }

    fn invalid(&self, problem: impl Into<String>) -> IngestError {
        IngestError::InvalidAdapter { adapter: self.name.clone(), problem: problem.into() }
    }

    /// Parses every selector once, reporting the first invalid one.
    pub(crate) fn compile(&self) -> Result<Compiled, IngestError> {
        if self.landmarks.is_empty() {
            return Err(self.invalid("no landmarks"));
        }
        if self.source.is_forum() && self.forum_id.is_none() {
            return Err(self.invalid("forum adapters need forum_id"));
        }
        let mut selectors = HashMap::new();
        let mut all: Vec<&str> = self.landmarks.iter().map(String::as_str).collect();
        if let Some(s) = &self.sections {
            all.push(&s.breadcrumb);
            all.extend(s.subsection.as_deref());
        }
        if let Some(t) = &self.thread {
            all.extend([t.container.as_str(), &t.title]);
        }
        if let Some(p) = &self.posts {
            all.extend([p.block.as_str(), &p.author, &p.date, &p.body]);
        }
        if let Some(p) = &self.profiles {
            all.extend([p.block.as_str(), &p.handle, &p.location]);
        }
        if let Some(l) = &self.listings {
            all.push(&l.card);
            all.push(&l.name);
            all.extend(l.price.as_deref());
            all.extend(l.unit.as_deref());
        }
        for css in all {
            let sel = Selector::parse(css).map_err(|e| self.invalid(format!("bad selector {css:?}: {e}")))?;
            selectors.insert(css.to_string(), sel);
        }
        Ok(Compiled { selectors })
    }
}

pub(crate) struct Compiled {
    selectors: HashMap<String, Selector>,
}

impl Compiled {
    pub fn get(&self, css: &str) -> &Selector {
        &self.selectors[css]
    }
}

/// Whitespace-normalised text content of an element.
pub(crate) fn text_of(el: ElementRef<'_>) -> String {
    el.text().flat_map(str::split_whitespace).collect::<Vec<_>>().join(" ")
}

/// Text of the first descendant of `el` matching `sel`.
pub(crate) fn first_text(el: ElementRef<'_>, sel: &Selector) -> Option<String> {
    el.select(sel).next().map(text_of)
}
