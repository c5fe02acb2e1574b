use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{TimeZone, Utc};
use npswatch_analytics::*;
use npswatch_corpus::{parse_lexicon, CorpusBuilder, SourceKind, SubstanceEntry, Tweet};
use npswatch_testkit::build::{add_forum, date, post, thread, ts, user};
use npswatch_testkit::{fixture, oracle};
use npswatch_textindex::{background_dictionary, common_words, stopwords, TermIndex};

fn neologism_case() -> (fixture::NeologismFixture, TermIndex) {
    let background: Vec<&str> = common_words().iter().collect();
    let f = fixture::neologisms(3, &background);
    let index = TermIndex::build(&f.corpus);
    (f, index)
}

#[test]
fn neologisms_are_exactly_the_seeded_terms() {
    let (f, index) = neologism_case();
    let out = neologisms(&index, &SourceKind::ForumDrugsforumLike, f.cutoff, f.min_count, 100, stopwords(), background_dictionary());
    let got: BTreeMap<String, u64> = out.iter().map(|n| (n.term.clone(), n.total_count)).collect();
    assert_eq!(got, f.qualifying);
    assert!(f.disqualified.iter().all(|t| !got.contains_key(t)));
    assert!(got.contains_key("diclazepam"));
    let cutoff = Utc.from_utc_datetime(&f.cutoff.and_hms_opt(0, 0, 0).unwrap());
    assert!(out.iter().all(|n| n.first_seen_at > cutoff));
    assert!(out.windows(2).all(|w| (w[1].total_count, &w[0].term) <= (w[0].total_count, &w[1].term)));
}

#[test]
fn neologisms_match_oracle() {
    let (f, index) = neologism_case();
    let docs = oracle::documents(&f.corpus);
    let excluded: HashSet<String> = background_dictionary().iter().map(str::to_string).collect();
    for (min_count, top_n) in [(1, 1000), (20, 5), (19, 50), (40, 100)] {
        let got: Vec<(String, u64, _)> =
            neologisms(&index, &SourceKind::ForumDrugsforumLike, f.cutoff, min_count, top_n, stopwords(), background_dictionary())
                .into_iter()
                .map(|n| (n.term, n.total_count, n.first_seen_at))
                .collect();
        assert_eq!(got, oracle::neologisms(&docs, &SourceKind::ForumDrugsforumLike, f.cutoff, min_count, top_n, &excluded));
    }
}

#[test]
fn one_early_occurrence_disqualifies() {
    let mut b = CorpusBuilder::new();
    add_forum(&mut b, "f", "F", SourceKind::ForumDrugsforumLike, &[("r", "R", None), ("s", "S", Some("r"))]);
    b.add_thread(thread("t", "f", "s", ts(2008, 1, 1, 0)));
    b.add_user(user("u", "f", None));
    b.add_post(post("early", "t", "u", ts(2008, 3, 1, 0), "zorbex".into()));
    for i in 0..500 {
        b.add_post(post(&format!("p{i}"), "t", "u", ts(2011, 1, 1, 0) + chrono::Duration::hours(i), "zorbex quux".into()));
    }
    let index = TermIndex::build(&b.finish());
    let out = neologisms(&index, &SourceKind::ForumDrugsforumLike, date(2010, 1, 1), 20, 10, stopwords(), background_dictionary());
    assert_eq!(out.iter().map(|n| n.term.as_str()).collect::<Vec<_>>(), ["quux"]);
}

fn lexicon() -> Vec<SubstanceEntry> {
    parse_lexicon(fixture::LEXICON).unwrap()
}

fn entry(name: &str) -> SubstanceEntry {
    lexicon().into_iter().find(|e| e.canonical_name() == name).unwrap()
}

#[test]
fn first_seen_on_standard_fixture() {
    let f = fixture::standard(7);
    let index = TermIndex::build(&f.corpus);
    let priority = default_source_priority();
    let s = first_seen(&index, &entry("Synthacaine"), &priority).unwrap();
    assert_eq!((s.source, s.at), f.truth.synthacaine_first);
    assert_eq!(s.at.date_naive(), date(2012, 1, 5));
    let m = first_seen(&index, &entry("Mexedrone"), &priority).unwrap();
    assert_eq!((m.source, m.at), f.truth.mexedrone_first);
    assert_eq!(
        first_seen(&index, &entry("Nonexistium"), &priority),
        Err(AnalyticsError::NeverSeen("Nonexistium".into()))
    );
}

#[test]
fn first_seen_ties_follow_priority() {
    let at = ts(2014, 4, 4, 4);
    let mut b = CorpusBuilder::new();
    for (id, source) in [("bl", SourceKind::ForumBluelightLike), ("df", SourceKind::ForumDrugsforumLike)] {
        add_forum(&mut b, id, id, source, &[(id, id, None), (&format!("{id}-s"), "S", Some(id))]);
        b.add_thread(thread(&format!("{id}-t"), id, &format!("{id}-s"), at));
        b.add_user(user(&format!("{id}-u"), id, None));
        b.add_post(post(&format!("{id}-p"), &format!("{id}-t"), &format!("{id}-u"), at, "new 4-MMC batch".into()));
    }
    b.add_tweet(Tweet {
        id: "tw".into(),
        created_at: at,
        author_handle: "@a".into(),
        text: "meow-meow".into(),
        matched_keywords: ["meow-meow".to_string()].into(),
    });
    let index = TermIndex::build(&b.finish());
    let e = entry("Mephedrone");
    let bl_first = first_seen(&index, &e, &[SourceKind::ForumBluelightLike, SourceKind::ForumDrugsforumLike]).unwrap();
    assert_eq!((bl_first.source, bl_first.at), (SourceKind::ForumBluelightLike, at));
    let df_first = first_seen(&index, &e, &[SourceKind::ForumDrugsforumLike, SourceKind::ForumBluelightLike]).unwrap();
    assert_eq!(df_first.source, SourceKind::ForumDrugsforumLike);
    let tw_first = first_seen(&index, &e, &[SourceKind::Microblog]).unwrap();
    assert_eq!(tw_first.source, SourceKind::Microblog);
}

#[test]
fn substance_summary_matches_truth_and_oracle() {
    let f = fixture::standard(7);
    let index = TermIndex::build(&f.corpus);
    let priority = default_source_priority();
    let rows = substance_summary(&index, &lexicon(), &priority);
    assert_eq!(rows.len(), 7);

    let mex = rows.iter().find(|r| r.substance == "Mexedrone").unwrap();
    assert_eq!(mex.tweet_count, f.truth.mexedrone_tweets);
    assert_eq!(mex.post_counts, f.truth.mexedrone_posts);
    assert_eq!(mex.shop_ids, f.truth.mexedrone_shops);
    assert_eq!((mex.tweet_count, mex.post_counts["bluelight"], mex.post_counts["drugsforum"]), (3, 5, 2));
    assert_eq!(mex.shop_ids, BTreeSet::from([1, 10]));

    let none = rows.iter().find(|r| r.substance == "Nonexistium").unwrap();
    assert_eq!((none.tweet_count, none.post_counts.values().sum::<u64>()), (0, 0));
    assert!(none.shop_ids.is_empty() && none.first_seen.is_none());

    let mdai = rows.iter().find(|r| r.substance == "MDAI").unwrap();
    assert_eq!(mdai.shop_ids, BTreeSet::from([1, 3, 4, 9]));

    let docs = oracle::documents(&f.corpus);
    for (row, e) in rows.iter().zip(lexicon()) {
        let aliases: Vec<&str> = e.aliases().iter().map(String::as_str).collect();
        let (tweets, posts, shops, first) = oracle::substance(&docs, &aliases, &priority, &f.truth.forums);
        assert_eq!(row.tweet_count, tweets, "{}", row.substance);
        assert_eq!(row.post_counts, posts, "{}", row.substance);
        assert_eq!(row.shop_ids, shops, "{}", row.substance);
        assert_eq!(row.first_seen.clone().map(|s| (s.source, s.at)), first, "{}", row.substance);
    }
}
