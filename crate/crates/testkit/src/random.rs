//! Small random corpora for index and property tests.

use std::collections::BTreeSet;

use npswatch_corpus::{Corpus, CorpusBuilder, ShopListing, ShopSnapshot, SourceKind, Tweet};
use rand::Rng;

use crate::build::{add_forum, between, date, post, thread, ts, user, words};
use crate::rng;

/// Mixed vocabulary exercising the token grammar: hyphenated names, Greek
/// letters, bare numbers, unit suffixes and mixed case.
pub const VOCAB: &[&str] = &[
    "mephedrone", "Mephedrone", "plant-food", "MDAI", "mdai", "1P-LSD", "α-PVP", "the", "and", "of", "bath-salts",
    "MDPV", "4-MMC", "2010", "100mg", "500", "a", "i", "x-y-z", "dose", "Dose", "tolerance", "legal", "high",
    "research", "chemical", "vendor", "order", "pellets", "powder", "nasal", "oral", "redose", "come-up", "comedown",
    "euphoria", "anxiety", "sleep", "weekend", "friend",
];

/// A two-forum corpus with `n_posts` posts, about `n_posts / 5` tweets and
/// three shops. The first forum has a depth-2 subtree and posts at every
/// non-root level; the second has depth-1 leaves only.
pub fn random_corpus(seed: u64, n_posts: usize) -> Corpus {
    let mut r = rng(seed);
    let mut b = CorpusBuilder::new();
    add_forum(
        &mut b,
        "alpha",
        "Alpha",
        SourceKind::ForumBluelightLike,
        &[
            ("a", "Alpha", None),
            ("a-1", "General", Some("a")),
            ("a-2", "Substances", Some("a")),
            ("a-2-x", "Stimulants", Some("a-2")),
            ("a-2-y", "Opioids", Some("a-2")),
        ],
    );
    add_forum(
        &mut b,
        "beta",
        "Beta",
        SourceKind::ForumDrugsforumLike,
        &[("b", "Beta", None), ("b-1", "News", Some("b")), ("b-2", "Chat", Some("b"))],
    );
    let sections: [(&str, &str); 6] =
        [("alpha", "a-1"), ("alpha", "a-2"), ("alpha", "a-2-x"), ("alpha", "a-2-y"), ("beta", "b-1"), ("beta", "b-2")];
    let from = ts(2009, 6, 1, 0);
    let to = ts(2011, 6, 1, 0);
    let n_threads = (n_posts / 10).max(1);
    let mut thread_forum = Vec::new();
    for i in 0..n_threads {
        let (forum, section) = sections[r.random_range(0..sections.len())];
        b.add_thread(thread(&format!("t{i}"), forum, section, from));
        thread_forum.push(forum);
    }
    for forum in ["alpha", "beta"] {
        for u in 0..30 {
            b.add_user(user(&format!("{forum}-u{u}"), forum, None));
        }
    }
    for i in 0..n_posts {
        let t = r.random_range(0..n_threads);
        let author = format!("{}-u{}", thread_forum[t], r.random_range(0..30));
        let n = r.random_range(0..12);
        let text = words(&mut r, VOCAB, n);
        b.add_post(post(&format!("p{i}"), &format!("t{t}"), &author, between(&mut r, from, to), text));
    }
    for i in 0..n_posts / 5 {
        let n = r.random_range(1..10);
        let mut text = words(&mut r, VOCAB, n);
        text.push_str(" mdai");
        b.add_tweet(Tweet {
            id: format!("tw{i}"),
            created_at: between(&mut r, from, to),
            author_handle: format!("@tw{}", i % 17),
            text,
            matched_keywords: BTreeSet::from(["mdai".to_string()]),
        });
    }
    for shop in 1..=3u32 {
        for week in 0..2u64 {
            let listings = (0..5)
                .map(|_| ShopListing {
                    name: words(&mut r, VOCAB, 2),
                    price: Some(10.0),
                    currency: Some("GBP".into()),
                    unit: Some("1g".into()),
                })
                .collect();
            b.add_snapshot(ShopSnapshot {
                shop_id: shop,
                domain: format!("shop{shop}.example"),
                captured_at: date(2010, 3, 1) + chrono::Days::new(7 * week),
                listings,
            });
        }
    }
    b.finish()
}

/// One forum with 50 posts in March 2010, exactly 7 of which mention
/// mephedrone, plus 40 posts in the neighbouring months.
pub fn mephedrone_march(seed: u64) -> Corpus {
    let mut r = rng(seed);
    let mut b = CorpusBuilder::new();
    add_forum(&mut b, "df", "DF", SourceKind::ForumDrugsforumLike, &[("df", "DF", None), ("df-1", "Stims", Some("df"))]);
    b.add_thread(thread("t", "df", "df-1", ts(2010, 2, 1, 0)));
    b.add_user(user("u", "df", None));
    let filler: Vec<&str> = VOCAB.iter().copied().filter(|w| !w.eq_ignore_ascii_case("mephedrone")).collect();
    let mut march: Vec<usize> = (0..50).collect();
    // Choose which seven March posts carry the term.
    for i in 0..7 {
        let j = r.random_range(i..50);
        march.swap(i, j);
    }
    let chosen: BTreeSet<usize> = march[..7].iter().copied().collect();
    for i in 0..50 {
        let n = r.random_range(0..8);
        let mut text = words(&mut r, &filler, n);
        if chosen.contains(&i) {
            text.push_str(" Mephedrone.");
        }
        b.add_post(post(&format!("m{i:02}"), "t", "u", between(&mut r, ts(2010, 3, 1, 0), ts(2010, 4, 1, 0)), text));
    }
    for i in 0..40 {
        let (from, to) = if i % 2 == 0 { (ts(2010, 2, 1, 0), ts(2010, 3, 1, 0)) } else { (ts(2010, 4, 1, 0), ts(2010, 5, 1, 0)) };
        let n = r.random_range(1..8);
        let text = words(&mut r, VOCAB, n);
        b.add_post(post(&format!("o{i:02}"), "t", "u", between(&mut r, from, to), text));
    }
    b.finish()
}
