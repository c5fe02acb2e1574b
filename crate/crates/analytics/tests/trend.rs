use std::sync::OnceLock;

use npswatch_analytics::*;
use npswatch_corpus::{CorpusBuilder, Granularity, SourceKind};
use npswatch_testkit::build::{add_forum, post, thread, ts, user};
use npswatch_testkit::fixture::{self, Fixture};
use npswatch_testkit::{oracle, random};
use npswatch_textindex::{Scope, TermIndex};

fn standard() -> &'static (Fixture, TermIndex) {
    static F: OnceLock<(Fixture, TermIndex)> = OnceLock::new();
    F.get_or_init(|| {
        let f = fixture::standard(7);
        let index = TermIndex::build(&f.corpus);
        (f, index)
    })
}

fn rows(series: &TrendSeries) -> Vec<oracle::TrendRow> {
    series.points.iter().map(|p| (p.bucket.start, p.docs_with_term, p.docs_total, p.normalized)).collect()
}

#[test]
fn absent_term_gives_zero_series_over_the_span() {
    let (f, index) = standard();
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    let s = trend(index, "zzzunseen", &scope, Granularity::Month).unwrap();
    assert!(!s.points.is_empty());
    assert!(s.points.iter().all(|p| p.docs_with_term == 0 && p.normalized == 0.0));
    let docs = oracle::documents(&f.corpus);
    let expected = oracle::trend(&f.corpus, &docs, "zzzunseen", &SourceKind::ForumBluelightLike, None, Granularity::Month);
    assert_eq!(rows(&s), expected);
}

#[test]
fn single_post_gives_one_full_bucket() {
    let mut b = CorpusBuilder::new();
    add_forum(&mut b, "f", "F", SourceKind::ForumBluelightLike, &[("r", "R", None), ("s", "S", Some("r"))]);
    b.add_thread(thread("t", "f", "s", ts(2011, 5, 5, 5)));
    b.add_user(user("u", "f", None));
    b.add_post(post("p", "t", "u", ts(2011, 5, 5, 5), "mephedrone again".into()));
    let index = TermIndex::build(&b.finish());
    let s = trend(&index, "mephedrone", &Scope::source(SourceKind::ForumBluelightLike), Granularity::Week).unwrap();
    assert_eq!(s.points.len(), 1);
    assert_eq!((s.points[0].docs_with_term, s.points[0].docs_total, s.points[0].normalized), (1, 1, 1.0));
}

#[test]
fn burst_peaks_in_first_half_of_2010() {
    let (f, index) = standard();
    let s = trend(index, "mephedrone", &Scope::source(SourceKind::ForumDrugsforumLike), Granularity::Month).unwrap();
    let peak = s.peak().unwrap().bucket.start;
    assert_eq!(peak, f.truth.mephedrone_peak);
    assert!(peak >= npswatch_testkit::build::date(2010, 1, 1) && peak <= npswatch_testkit::build::date(2010, 6, 1));
}

#[test]
fn trends_match_oracle_for_every_granularity_and_scope() {
    let (f, index) = standard();
    let docs = oracle::documents(&f.corpus);
    let scopes: [(SourceKind, Option<&str>); 5] = [
        (SourceKind::ForumBluelightLike, None),
        (SourceKind::ForumDrugsforumLike, None),
        (SourceKind::ForumDrugsforumLike, Some("df-substances")),
        (SourceKind::ForumDrugsforumLike, Some("df-beta-ketones")),
        (SourceKind::Microblog, None),
    ];
    for g in Granularity::ALL {
        for (source, section) in &scopes {
            let scope = match section {
                Some(s) => Scope::section(source.clone(), *s),
                None => Scope::source(source.clone()),
            };
            for term in ["mephedrone", "plant-food", "pentedrone", "mdai"] {
                let s = trend(index, term, &scope, g).unwrap();
                assert_eq!(rows(&s), oracle::trend(&f.corpus, &docs, term, source, *section, g), "{term} {scope:?} {g:?}");
                assert!(s.points.iter().all(|p| (0.0..=1.0).contains(&p.normalized)));
            }
        }
    }
}

#[test]
fn trend_rejects_unknown_section() {
    let (_, index) = standard();
    let err = trend(index, "x", &Scope::section(SourceKind::ForumDrugsforumLike, "nope"), Granularity::Month).unwrap_err();
    assert!(matches!(err, AnalyticsError::Index(_)));
}

#[test]
fn horizon_isolates_beta_ketones() {
    let (f, index) = standard();
    let h = horizon(index, f.truth.beta_ketones_term, "drugsforum", 2, Granularity::Month).unwrap();
    assert_eq!(h.rows.len(), 5);
    for row in &h.rows {
        let hits: u64 = row.series.points.iter().map(|p| p.docs_with_term).sum();
        if row.section_id == f.truth.beta_ketones_section {
            assert!(hits > 0);
        } else {
            assert_eq!(hits, 0, "{}", row.section_id);
        }
    }
}

#[test]
fn horizon_sections_partition_the_forum() {
    let (f, index) = standard();
    let docs = oracle::documents(&f.corpus);
    for (forum, source, depth) in
        [("bluelight", SourceKind::ForumBluelightLike, 1), ("drugsforum", SourceKind::ForumDrugsforumLike, 1), ("drugsforum", SourceKind::ForumDrugsforumLike, 2)]
    {
        let h = horizon(index, "mephedrone", forum, depth, Granularity::Month).unwrap();
        let expected = oracle::horizon(&f.corpus, &docs, "mephedrone", forum, depth, Granularity::Month);
        let got: Vec<(String, Vec<oracle::TrendRow>)> = h.rows.iter().map(|r| (r.section_id.clone(), rows(&r.series))).collect();
        assert_eq!(got, expected);
        let whole = trend(index, "mephedrone", &Scope::source(source), Granularity::Month).unwrap();
        for (i, p) in whole.points.iter().enumerate() {
            let with: u64 = h.rows.iter().map(|r| r.series.points[i].docs_with_term).sum();
            let total: u64 = h.rows.iter().map(|r| r.series.points[i].docs_total).sum();
            assert_eq!((with, total), (p.docs_with_term, p.docs_total));
        }
    }
}

#[test]
fn horizon_depth_and_forum_errors() {
    let (_, index) = standard();
    assert_eq!(horizon(index, "x", "bluelight", 1, Granularity::Month).unwrap().rows.len(), 4);
    assert!(matches!(horizon(index, "x", "nope", 1, Granularity::Month), Err(AnalyticsError::UnknownForum(_))));
    assert!(matches!(
        horizon(index, "x", "bluelight", 2, Granularity::Month),
        Err(AnalyticsError::InvalidDepth { depth: 2, max: 1, .. })
    ));
    assert!(matches!(horizon(index, "x", "bluelight", 0, Granularity::Month), Err(AnalyticsError::InvalidDepth { .. })));
}

#[test]
fn random_corpora_match_oracle() {
    for seed in 0..4 {
        let corpus = random::random_corpus(seed, 600);
        let index = TermIndex::build(&corpus);
        let docs = oracle::documents(&corpus);
        for depth in 1..=2 {
            for term in random::VOCAB.iter().take(6) {
                let h = horizon(&index, term, "alpha", depth, Granularity::Week).unwrap();
                let got: Vec<(String, Vec<oracle::TrendRow>)> =
                    h.rows.iter().map(|r| (r.section_id.clone(), rows(&r.series))).collect();
                assert_eq!(got, oracle::horizon(&corpus, &docs, term, "alpha", depth, Granularity::Week));
            }
        }
    }
}

#[test]
fn series_round_trip_through_json() {
    let (_, index) = standard();
    let h = horizon(index, "mephedrone", "drugsforum", 2, Granularity::Week).unwrap();
    let back: HorizonSet = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
    assert_eq!(back, h);
}
