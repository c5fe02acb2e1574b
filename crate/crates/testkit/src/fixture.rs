//! Generated fixtures with recorded ground truth.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use npswatch_corpus::{Corpus, CorpusBuilder, ShopListing, ShopSnapshot, SourceKind, Tweet};
use rand::Rng;

use crate::build::{add_forum, between, date, post, thread, ts, user, words, Zipf};
use crate::rng;

/// Monitored shops: (id, domain, substances on the showcase).
pub const SHOPS: [(u32, &str, usize); 10] = [
    (1, "chem-shop.co.uk", 7),
    (2, "researchchemist.co.uk", 45),
    (3, "researchchemistry.co.uk", 56),
    (4, "sciencesuppliesdirect.com", 43),
    (5, "bitcoinhighs.co.uk", 4),
    (6, "buylegalrc.eu", 17),
    (7, "legalhighlabs.com", 33),
    (8, "ukhighs.com", 51),
    (9, "buyanychem.eu", 78),
    (10, "iceheadshop.co.uk", 68),
];

/// Lexicon used with the standard fixture.
pub const LEXICON: &str = "\
# canonical name, then aliases
Mephedrone, 4-mmc, meow-meow
Mexedrone
Synthacaine
MDAI
Pentedrone
Diclazepam
Nonexistium
";

/// Keywords the fixture's microblog stream was filtered on.
pub const KEYWORDS: &[&str] = &["mdai", "mephedrone", "mexedrone", "synthacaine", "ethylphenidate", "4-fa"];

/// Filler vocabulary. None of the seeded terms appear here.
const FILLER: &[&str] = &[
    "the", "a", "and", "of", "to", "in", "it", "was", "is", "for", "with", "on", "my", "this", "that", "dose", "dosage",
    "tolerance", "experience", "trip", "report", "mg", "100mg", "25", "vendor", "order", "powder", "pellets", "nasal",
    "oral", "redose", "come-up", "comedown", "euphoria", "anxiety", "sleep", "weekend", "friend", "legal", "high",
    "research", "chemical", "harm-reduction", "safe", "test", "kit", "reagent", "Marquis", "effects", "felt", "strong",
    "weak", "hours", "later", "first", "time", "again", "never", "really", "good", "bad", "would", "recommend",
    "careful", "stay", "Safe!", "MDMA", "ketamine", "cannabis", "LSD", "2C-B", "kratom", "DMT", "benzos", "opiates",
];

/// Countries of user locations: (location string, expected ISO code).
const UK_LOCATIONS: &[&str] = &["London, UK", "Manchester", "United Kingdom", "Leeds, England", "Glasgow, Scotland"];
const OTHER_LOCATIONS: &[(Option<&str>, &str)] = &[
    (Some("Sydney, Australia"), "AU"),
    (Some("Toronto, Canada"), "CA"),
    (Some("Berlin, Germany"), "DE"),
    (Some("Amsterdam"), "NL"),
    (Some("Chicago, USA"), "US"),
    (Some("somewhere over the rainbow"), "UNKNOWN"),
    (None, "UNKNOWN"),
];

const NEWS_LINKS: &[&str] = &[
    "https://www.bbc.co.uk/news/health-10123456",
    "http://www.theguardian.com/society/drugs",
    "https://www.vice.com/en/article/legal-highs",
];

/// What the standard fixture generator put where.
#[derive(Debug, Clone)]
pub struct Truth {
    pub forums: [&'static str; 2],
    /// Month in which the forum-df mephedrone burst peaks.
    pub mephedrone_peak: NaiveDate,
    /// Term written only in the "beta-ketones" section of forum-df.
    pub beta_ketones_term: &'static str,
    pub beta_ketones_section: &'static str,
    /// Mexedrone placements: tweets, posts per forum, shops.
    pub mexedrone_tweets: u64,
    pub mexedrone_posts: BTreeMap<String, u64>,
    pub mexedrone_shops: BTreeSet<u32>,
    pub mexedrone_first: (SourceKind, DateTime<Utc>),
    pub synthacaine_first: (SourceKind, DateTime<Utc>),
    /// Expected country counts per forum.
    pub geo: BTreeMap<String, BTreeMap<String, u64>>,
    /// Generator bookkeeping of posts per user (users with posts only).
    pub posts_per_user: BTreeMap<String, u64>,
    pub posts_per_thread: BTreeMap<String, u64>,
    /// Domains linked from tweets that also belong to a monitored shop.
    pub tweet_shop_links: BTreeSet<String>,
}

/// A standard fixture: corpus plus ground truth.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub corpus: Corpus,
    pub truth: Truth,
}

impl Fixture {
    pub fn shop_domains(&self) -> Vec<&'static str> {
        SHOPS.iter().map(|s| s.1).collect()
    }
}

fn burst_rate(t: DateTime<Utc>) -> f64 {
    if t.year() != 2010 {
        return 0.01;
    }
    match t.month() {
        1 => 0.2,
        2 => 0.4,
        3 => 0.7,
        4 => 0.5,
        5 => 0.3,
        6 => 0.2,
        _ => 0.01,
    }
}

/// 10,000 posts, 500 users, two forums, 400 tweets and ten shops.
///
/// - forum-bl ("bluelight") has four depth-1 leaf sections; forum-df
///   ("drugsforum") has five depth-2 leaves including "beta-ketones".
/// - Posts span 2008–2014; mephedrone bursts in forum-df during 2010-H1,
///   peaking in March, and co-occurs with "plant-food".
/// - "pentedrone" appears only in the beta-ketones section.
/// - "mexedrone" is in exactly 3 tweets, 5 forum-bl posts, 2 forum-df posts
///   and the showcases of shops 1 and 10.
/// - "synthacaine" appears first in forum-df on 2012-01-05, then in
///   forum-bl on 2012-02-01.
/// - 40% of each forum's users give a UK location.
/// - Forum posts link only to news sites; some tweets link to shop 10.
pub fn standard(seed: u64) -> Fixture {
    let mut r = rng(seed);
    let mut b = CorpusBuilder::new();
    add_forum(
        &mut b,
        "bluelight",
        "Bluelight",
        SourceKind::ForumBluelightLike,
        &[
            ("bl", "Bluelight", None),
            ("bl-opioids", "Opioids", Some("bl")),
            ("bl-stimulants", "Stimulants", Some("bl")),
            ("bl-psychedelics", "Psychedelics", Some("bl")),
            ("bl-harm-reduction", "Harm Reduction", Some("bl")),
        ],
    );
    add_forum(
        &mut b,
        "drugsforum",
        "Drugs-Forum",
        SourceKind::ForumDrugsforumLike,
        &[
            ("df", "Drugs-Forum", None),
            ("df-substances", "Substances", Some("df")),
            ("df-beta-ketones", "Beta-Ketones", Some("df-substances")),
            ("df-cannabinoids", "Synthetic Cannabinoids", Some("df-substances")),
            ("df-benzodiazepines", "Benzodiazepines", Some("df-substances")),
            ("df-community", "Community", Some("df")),
            ("df-news", "Drug News", Some("df-community")),
            ("df-off-topic", "Off Topic", Some("df-community")),
        ],
    );
    let layouts: [(&str, &str, SourceKind, &[&str]); 2] = [
        ("bluelight", "bl", SourceKind::ForumBluelightLike, &["bl-opioids", "bl-stimulants", "bl-psychedelics", "bl-harm-reduction"]),
        (
            "drugsforum",
            "df",
            SourceKind::ForumDrugsforumLike,
            &["df-beta-ketones", "df-cannabinoids", "df-benzodiazepines", "df-news", "df-off-topic"],
        ),
    ];

    let mut geo: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut posts_per_user: BTreeMap<String, u64> = BTreeMap::new();
    let mut posts_per_thread: BTreeMap<String, u64> = BTreeMap::new();
    let mut mexedrone_posts = BTreeMap::new();
    let mut mexedrone_first: Option<(SourceKind, DateTime<Utc>)> = None;
    let earliest = |slot: &mut Option<(SourceKind, DateTime<Utc>)>, s: &SourceKind, t: DateTime<Utc>| {
        if slot.as_ref().is_none_or(|(_, old)| t < *old) {
            *slot = Some((s.clone(), t));
        }
    };

    for (forum, prefix, source, leaves) in layouts {
        // Users: exactly 40% UK, the rest cycling through other places.
        let counts = geo.entry(forum.to_string()).or_default();
        for u in 0..250 {
            let id = format!("{prefix}-u{u:03}");
            let (loc, code) = if u % 5 < 2 {
                (Some(UK_LOCATIONS[u % UK_LOCATIONS.len()]), "GB")
            } else {
                OTHER_LOCATIONS[u % OTHER_LOCATIONS.len()]
            };
            *counts.entry(code.to_string()).or_default() += 1;
            b.add_user(user(&id, forum, loc));
        }

        let n_threads = 400;
        let thread_section: Vec<&str> = (0..n_threads).map(|_| leaves[r.random_range(0..leaves.len())]).collect();
        let thread_pick = Zipf::new(n_threads, 0.8);
        let author_pick = Zipf::new(250, 1.0);
        let mut earliest_in_thread: BTreeMap<usize, DateTime<Utc>> = BTreeMap::new();
        let is_df = prefix == "df";

        for i in 0..5000 {
            let mut t = thread_pick.draw(&mut r);
            let author = format!("{prefix}-u{:03}", author_pick.draw(&mut r));
            let mut when = between(&mut r, ts(2008, 1, 1, 0), ts(2015, 1, 1, 0));
            let n = r.random_range(3..15);
            let mut text = words(&mut r, FILLER, n);

            let section = thread_section[t];
            let rate = if is_df { burst_rate(when) } else { 0.02 };
            if r.random::<f64>() < rate {
                text.push_str(" Mephedrone");
                if r.random::<f64>() < 0.5 {
                    text.push_str(" aka plant-food");
                }
            }
            if section == "df-beta-ketones" && r.random::<f64>() < 0.3 {
                text.push_str(", pentedrone");
            }
            if r.random::<f64>() < 0.03 {
                text.push_str(" MDAI");
            }
            if r.random::<f64>() < 0.02 {
                text.push_str(&format!(" see {} for more", NEWS_LINKS[r.random_range(0..NEWS_LINKS.len())]));
            }
            // Seeded placements at fixed post indices.
            match i {
                0 => {
                    when = if is_df { ts(2012, 1, 5, 10) } else { ts(2012, 2, 1, 10) };
                    text.push_str(" synthacaine");
                }
                1..=5 if !is_df || i <= 2 => {
                    when = between(&mut r, ts(2013, 1, 1, 0), ts(2014, 1, 1, 0));
                    text.push_str(" Mexedrone");
                    *mexedrone_posts.entry(forum.to_string()).or_insert(0u64) += 1;
                    earliest(&mut mexedrone_first, &source, when);
                }
                10..35 if is_df => {
                    when = between(&mut r, ts(2011, 1, 1, 0), ts(2015, 1, 1, 0));
                    text.push_str(" diclazepam");
                }
                _ => {}
            }
            if i == 0 {
                // The synthacaine post opens a thread in a fixed section.
                t = thread_section.iter().position(|s| *s == leaves[0]).unwrap_or(0);
            }
            let thread_id = format!("{prefix}-t{t:03}");
            let e = earliest_in_thread.entry(t).or_insert(when);
            *e = (*e).min(when);
            *posts_per_user.entry(author.clone()).or_default() += 1;
            *posts_per_thread.entry(thread_id.clone()).or_default() += 1;
            b.add_post(post(&format!("{prefix}-p{i:04}"), &thread_id, &author, when, text));
        }
        for (t, first) in earliest_in_thread {
            b.add_thread(thread(&format!("{prefix}-t{t:03}"), forum, thread_section[t], first));
        }
    }

    // Tweets during 2015-2016.
    let mut tweet_shop_links = BTreeSet::new();
    for i in 0..400 {
        let when = between(&mut r, ts(2015, 1, 1, 0), ts(2017, 1, 1, 0));
        let n = r.random_range(2..8);
        let mut text = words(&mut r, FILLER, n);
        let kw = match i {
            0..3 => "Mexedrone",
            3 => "synthacaine",
            _ => ["mdai", "mephedrone", "ethylphenidate", "4-FA"][r.random_range(0..4)],
        };
        text.push_str(&format!(" {kw} "));
        if i % 13 == 0 {
            text.push_str("buy at https://www.iceheadshop.co.uk/shop/item-7");
            tweet_shop_links.insert("iceheadshop.co.uk".to_string());
        }
        if i < 3 {
            earliest(&mut mexedrone_first, &SourceKind::Microblog, when);
        }
        let tokens: BTreeSet<String> = crate::oracle::tokens(&text).into_iter().collect();
        let matched = KEYWORDS.iter().filter(|k| tokens.contains(**k)).map(|k| k.to_string()).collect();
        b.add_tweet(Tweet { id: format!("tw-{i:04}"), created_at: when, author_handle: format!("@user{}", i % 37), text, matched_keywords: matched });
    }

    // Two weekly snapshots per shop, each showing the Table-2 number of items.
    const PRODUCTS: &[&str] = &[
        "Ethylphenidate", "4-FA Pellets", "Methiopropamine", "Etizolam Blotters", "5-MeO-MiPT", "AMT", "Dimethocaine",
        "NM-2-AI", "3-MMC", "Flubromazolam", "Pyrazolam", "Dibutylone", "MXE", "DOC", "4-AcO-DMT",
    ];
    for &(shop, domain, items) in &SHOPS {
        let mut names: Vec<String> = Vec::new();
        if shop == 1 || shop == 10 {
            names.push("  Mexedrone 500mg ".to_string());
        }
        if [1, 3, 4, 9].contains(&shop) {
            names.push("MDAI Crystal".to_string());
        }
        let mut k = 0;
        while names.len() < items {
            names.push(format!("{} batch {}", PRODUCTS[k % PRODUCTS.len()], k / PRODUCTS.len() + 1));
            k += 1;
        }
        for week in 0..2u64 {
            let listings = names
                .iter()
                .enumerate()
                .map(|(j, n)| ShopListing {
                    name: n.trim().to_string(),
                    price: if j % 9 == 4 { None } else { Some(5.0 + (j % 7) as f64 * 2.5) },
                    currency: Some("GBP".into()),
                    unit: Some("1g".into()),
                })
                .collect();
            b.add_snapshot(ShopSnapshot {
                shop_id: shop,
                domain: domain.into(),
                captured_at: date(2015, 6, 1) + chrono::Days::new(7 * week),
                listings,
            });
        }
    }
    let shop_time = crate::build::ts(2015, 6, 1, 0);
    earliest(&mut mexedrone_first, &SourceKind::Shop, shop_time);

    Fixture {
        corpus: b.finish(),
        truth: Truth {
            forums: ["bluelight", "drugsforum"],
            mephedrone_peak: date(2010, 3, 1),
            beta_ketones_term: "pentedrone",
            beta_ketones_section: "df-beta-ketones",
            mexedrone_tweets: 3,
            mexedrone_posts,
            mexedrone_shops: BTreeSet::from([1, 10]),
            mexedrone_first: mexedrone_first.expect("mexedrone was seeded"),
            synthacaine_first: (SourceKind::ForumDrugsforumLike, ts(2012, 1, 5, 10)),
            geo,
            posts_per_user,
            posts_per_thread,
            tweet_shop_links,
        },
    }
}

/// Seeded neologism terms with their fate under cutoff 2010-01-01 and
/// min_count 20.
#[derive(Debug, Clone)]
pub struct NeologismFixture {
    pub corpus: Corpus,
    pub cutoff: NaiveDate,
    pub min_count: u64,
    /// Terms that must be returned, with their document counts.
    pub qualifying: BTreeMap<String, u64>,
    /// Terms that must not be returned.
    pub disqualified: BTreeSet<String>,
}

/// One forum-df corpus whose filler comes only from `background`; fifteen
/// terms qualify as neologisms and fifteen narrowly fail.
pub fn neologisms(seed: u64, background: &[&str]) -> NeologismFixture {
    const QUALIFYING: [&str; 15] = [
        "diclazepam", "pentedrone", "naphyrone", "α-pvp", "1p-lsd", "ethylphenidate", "methoxetamine", "flubromazolam",
        "etizolam", "25i-nbome", "4-fa", "mexedrone", "nm-2-ai", "dibutylone", "deschloroketamine",
    ];
    // (year, month, day, hour)
    type Instant = (i32, u32, u32, u32);
    // (term, documents after the cutoff, seeded before or at the cutoff)
    const DISQUALIFIED: [(&str, u64, Option<Instant>); 15] = [
        ("mephedrone", 60, Some((2008, 6, 1, 12))),
        ("methylone", 30, Some((2009, 12, 31, 23))),
        ("bk-mbdb", 25, Some((2009, 1, 15, 8))),
        ("butylone", 40, Some((2008, 2, 2, 2))),
        ("mdpv", 35, Some((2009, 7, 7, 7))),
        ("spice", 22, Some((2008, 11, 11, 11))),
        ("jwh-018", 28, Some((2009, 3, 3, 3))),
        // First occurrence exactly at the cutoff instant.
        ("ampt", 30, Some((2010, 1, 1, 0))),
        ("mxe-hcl", 19, None),
        ("pyrazolam", 19, None),
        ("dimethocaine", 10, None),
        ("5-meo-mipt", 5, None),
        ("4-aco-dmt", 1, None),
        ("3-mmc", 12, None),
        ("dmaa", 18, None),
    ];
    let mut r = rng(seed);
    let mut b = CorpusBuilder::new();
    add_forum(&mut b, "df", "DF", SourceKind::ForumDrugsforumLike, &[("df", "DF", None), ("df-1", "All", Some("df"))]);
    b.add_thread(thread("t", "df", "df-1", ts(2005, 1, 1, 0)));
    b.add_user(user("u", "df", None));
    let mut id = 0usize;
    let mut add = |b: &mut CorpusBuilder, r: &mut crate::ChaCha8Rng, when: DateTime<Utc>, extra: &str| {
        let n = r.random_range(2..10);
        let mut text = words(r, background, n);
        if !extra.is_empty() {
            text = format!("{text} {extra}");
        }
        b.add_post(post(&format!("n{id:05}"), "t", "u", when, text));
        id += 1;
    };
    for _ in 0..2000 {
        let when = between(&mut r, ts(2006, 1, 1, 0), ts(2014, 1, 1, 0));
        add(&mut b, &mut r, when, "");
    }
    let mut qualifying = BTreeMap::new();
    for (k, term) in QUALIFYING.iter().enumerate() {
        let count = 20 + 2 * k as u64;
        for _ in 0..count {
            let when = between(&mut r, ts(2010, 1, 1, 1), ts(2014, 1, 1, 0));
            add(&mut b, &mut r, when, &term.to_uppercase());
        }
        qualifying.insert(term.to_string(), count);
    }
    let mut disqualified = BTreeSet::new();
    for (term, count, early) in DISQUALIFIED {
        for _ in 0..count {
            let when = between(&mut r, ts(2010, 1, 2, 0), ts(2014, 1, 1, 0));
            add(&mut b, &mut r, when, term);
        }
        if let Some((y, m, d, h)) = early {
            add(&mut b, &mut r, ts(y, m, d, h), term);
        }
        disqualified.insert(term.to_string());
    }
    NeologismFixture { corpus: b.finish(), cutoff: date(2010, 1, 1), min_count: 20, qualifying, disqualified }
}

/// Thread-cap fixture: 50 threads holding exactly 1,000 posts each (the
/// scraper's per-thread limit) and 60 ordinary threads of 1 to 60 posts.
pub fn thread_cap(seed: u64) -> Corpus {
    let mut r = rng(seed);
    let mut b = CorpusBuilder::new();
    add_forum(&mut b, "capped", "Capped", SourceKind::ForumBluelightLike, &[("c", "Capped", None), ("c-1", "Main", Some("c"))]);
    for u in 0..200 {
        b.add_user(user(&format!("c-u{u}"), "capped", None));
    }
    let users = Zipf::new(200, 1.0);
    let sizes = (0..50).map(|_| 1000).chain(1..=60);
    let mut id = 0;
    for (t, size) in sizes.enumerate() {
        let tid = format!("c-t{t:03}");
        b.add_thread(thread(&tid, "capped", "c-1", ts(2009, 1, 1, 0)));
        for _ in 0..size {
            let author = format!("c-u{}", users.draw(&mut r));
            let when = between(&mut r, ts(2009, 1, 1, 0), ts(2013, 1, 1, 0));
            b.add_post(post(&format!("c-p{id:06}"), &tid, &author, when, String::from("ok")));
            id += 1;
        }
    }
    b.finish()
}
