use std::collections::{BTreeSet, HashSet};

use chrono::{NaiveDate, TimeZone, Utc};
use npswatch_corpus::*;
use npswatch_testkit::{oracle, random};
use npswatch_textindex::*;
use proptest::prelude::*;

fn bucket(y: i32, m: u32) -> TimeBucket {
    TimeBucket { granularity: Granularity::Month, start: NaiveDate::from_ymd_opt(y, m, 1).unwrap() }
}

fn one_forum(texts: &[(&str, (i32, u32, u32))]) -> Corpus {
    let mut b = CorpusBuilder::new();
    b.add_forum("f", "F", SourceKind::ForumBluelightLike);
    b.add_section(SectionNode {
        id: "root".into(),
        forum_id: "f".into(),
        name: "F".into(),
        parent_id: None,
        depth: 0,
        children: vec![],
    })
    .unwrap();
    let t0 = Utc.with_ymd_and_hms(2010, 1, 1, 0, 0, 0).unwrap();
    b.add_thread(Thread { id: "t".into(), forum_id: "f".into(), section_id: "root".into(), title: "t".into(), created_at: t0 });
    for (i, (text, (y, m, d))) in texts.iter().enumerate() {
        b.add_post(Post {
            id: format!("p{i}"),
            thread_id: "t".into(),
            author_id: "u".into(),
            created_at: Utc.with_ymd_and_hms(*y, *m, *d, 12, 0, 0).unwrap(),
            text: text.to_string(),
        });
    }
    b.finish()
}

#[test]
fn tokenizer_examples() {
    assert_eq!(tokenize("Tried 1P-LSD, then α-PVP!"), ["tried", "1p-lsd", "then", "α-pvp"]);
    assert!(tokenize("").is_empty());
    assert_eq!(tokenize("100 mg of MDPV -- wow"), ["mg", "of", "mdpv", "wow"]);
}

#[test]
fn shared_term_has_two_postings() {
    let c = one_forum(&[("MDAI is here", (2010, 3, 15)), ("more mdai", (2010, 4, 2))]);
    let index = TermIndex::build(&c);
    let postings = index.postings("mdai");
    assert_eq!(postings.len(), 2);
    assert_eq!(postings[0].bucket.to_string(), "2010-03");
    assert_eq!(postings[0].bucket, bucket_of(postings[0].timestamp, Granularity::Month));
    assert_eq!(postings[0].section_id.as_deref(), Some("root"));
}

#[test]
fn absent_and_universal_terms() {
    let c = one_forum(&[("a mdai b", (2010, 3, 1)), ("mdai", (2010, 3, 2)), ("MDAI!", (2010, 3, 31))]);
    let index = TermIndex::build(&c);
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    assert_eq!(index.term_count("mephedrone", &scope, bucket(2010, 3)).unwrap(), (0, 3));
    assert_eq!(index.term_count("mdai", &scope, bucket(2010, 3)).unwrap(), (3, 3));
    assert_eq!(index.term_count("mdai", &scope, bucket(2010, 4)).unwrap(), (0, 0));
}

#[test]
fn totals_count_token_free_documents() {
    let c = one_forum(&[("the and of", (2010, 3, 1)), ("!!! 100", (2010, 3, 2)), ("", (2010, 3, 3))]);
    let index = TermIndex::build(&c);
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    assert_eq!(index.term_count("the", &scope, bucket(2010, 3)).unwrap(), (1, 3));
}

#[test]
fn seeded_march_corpus() {
    let c = random::mephedrone_march(3);
    let index = TermIndex::build(&c);
    let scope = Scope::source(SourceKind::ForumDrugsforumLike);
    let got = index.term_count("mephedrone", &scope, bucket(2010, 3)).unwrap();
    assert_eq!(got, (7, 50));
    let docs = oracle::documents(&c);
    let expected = oracle::term_count(
        &c,
        &docs,
        "mephedrone",
        &SourceKind::ForumDrugsforumLike,
        None,
        Granularity::Month,
        bucket(2010, 3).start,
    );
    assert_eq!(got, expected);
}

fn scopes(c: &Corpus) -> Vec<Scope> {
    let mut out = vec![Scope::source(SourceKind::Microblog), Scope::source(SourceKind::Shop)];
    for f in &c.forums {
        out.push(Scope::source(f.source.clone()));
        for s in &f.sections {
            out.push(Scope::section(f.source.clone(), s.id.clone()));
        }
    }
    out
}

#[test]
fn counts_match_linear_scan() {
    let c = random::random_corpus(11, 1000);
    let index = TermIndex::build(&c);
    let docs = oracle::documents(&c);
    let terms = ["mephedrone", "mdai", "plant-food", "1p-lsd", "α-pvp", "the", "x-y-z", "4-mmc", "absent"];
    for g in Granularity::ALL {
        for scope in scopes(&c) {
            let buckets: BTreeSet<NaiveDate> = docs.iter().map(|d| oracle::bucket_start(d.timestamp, g)).collect();
            let totals = index.total_series(&scope, g).unwrap();
            for start in buckets {
                let b = TimeBucket { granularity: g, start };
                for term in terms {
                    let expected = oracle::term_count(&c, &docs, term, &scope.source, scope.section.as_deref(), g, start);
                    assert_eq!(index.term_count(term, &scope, b).unwrap(), expected, "{term} {scope:?} {b}");
                    assert_eq!(totals.get(&b).copied().unwrap_or(0), expected.1);
                }
            }
        }
    }
}

#[test]
fn first_occurrence_is_minimum_posting_time() {
    let c = random::random_corpus(5, 600);
    let index = TermIndex::build(&c);
    let sources: BTreeSet<SourceKind> = index.docs().iter().map(|d| d.source.clone()).collect();
    for term in index.vocabulary() {
        let postings = index.postings(term);
        for s in &sources {
            let min = postings.iter().filter(|p| p.source == *s).map(|p| p.timestamp).min();
            assert_eq!(index.first_occurrence(term, s), min, "{term} {s}");
            if let Some(first) = index.first_occurrence(term, s) {
                assert!(postings.iter().filter(|p| p.source == *s).all(|p| p.timestamp >= first));
            }
        }
    }
}

#[test]
fn parent_counts_sum_children_when_sections_partition() {
    let c = random::random_corpus(21, 800);
    let index = TermIndex::build(&c);
    for f in &c.forums {
        for parent in &f.sections {
            if parent.children.is_empty() {
                continue;
            }
            // Partition holds only when the parent has no documents of its own.
            let own = index.docs().iter().filter(|d| d.section.as_deref() == Some(parent.id.as_str())).count();
            if own > 0 {
                continue;
            }
            for term in ["mephedrone", "mdai", "dose"] {
                let whole = index.term_series(term, &Scope::section(f.source.clone(), parent.id.clone()), Granularity::Month).unwrap();
                let mut summed = std::collections::BTreeMap::new();
                for child in &parent.children {
                    let s = index.term_series(term, &Scope::section(f.source.clone(), child.clone()), Granularity::Month).unwrap();
                    for (b, n) in s {
                        *summed.entry(b).or_insert(0) += n;
                    }
                }
                assert_eq!(whole, summed, "{} {term}", parent.id);
            }
        }
    }
}

#[test]
fn normalized_frequency_is_a_fraction() {
    let c = random::random_corpus(8, 500);
    let index = TermIndex::build(&c);
    for scope in scopes(&c) {
        let totals = index.total_series(&scope, Granularity::Week).unwrap();
        for term in ["mephedrone", "the", "mdai"] {
            let with = index.term_series(term, &scope, Granularity::Week).unwrap();
            for (b, n) in with {
                let total = totals[&b];
                assert!(n <= total);
                let ratio = n as f64 / total.max(1) as f64;
                assert!((0.0..=1.0).contains(&ratio));
            }
        }
    }
}

#[test]
fn occurrences_count_repeats() {
    let c = one_forum(&[("mdai mdai MDAI", (2010, 3, 1)), ("mdai", (2010, 3, 2))]);
    let index = TermIndex::build(&c);
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    assert_eq!(index.term_count("mdai", &scope, bucket(2010, 3)).unwrap(), (2, 2));
    assert_eq!(index.occurrence_count("mdai", &scope, bucket(2010, 3)).unwrap(), 4);
}

#[test]
fn scope_errors() {
    let c = random::random_corpus(2, 100);
    let index = TermIndex::build(&c);
    let wrong_source = Scope::section(SourceKind::ForumDrugsforumLike, "a-1");
    assert!(matches!(index.term_count("x", &wrong_source, bucket(2010, 3)), Err(IndexError::UnknownSection { .. })));
    let missing = Scope::section(SourceKind::ForumBluelightLike, "nope");
    assert!(matches!(index.check_scope(&missing), Err(IndexError::UnknownSection { .. })));
    let unknown = Scope::source(SourceKind::Other("forum-x".into()));
    assert_eq!(index.check_scope(&unknown), Err(IndexError::UnknownSource("forum-x".into())));
}

#[test]
fn cooccurrence_examples() {
    let c = one_forum(&[
        ("mephedrone plant-food the", (2010, 3, 1)),
        ("Mephedrone is plant-food", (2010, 3, 2)),
        ("plant-food, mephedrone", (2010, 3, 3)),
        ("unrelated text", (2010, 3, 4)),
    ]);
    let index = TermIndex::build(&c);
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    let top = index.cooccurrence("mephedrone", &scope, 10, stopwords()).unwrap();
    assert_eq!(top, [("plant-food".to_string(), 3)]);
    assert!(index.cooccurrence("absent", &scope, 10, stopwords()).unwrap().is_empty());
    let all = index.cooccurrence("mephedrone", &scope, 10, &WordList::default()).unwrap();
    assert_eq!(all, [("plant-food".to_string(), 3), ("is".to_string(), 1), ("the".to_string(), 1)]);
}

#[test]
fn cooccurrence_matches_pairwise_oracle() {
    let c = random::random_corpus(4, 200);
    let index = TermIndex::build(&c);
    let docs = oracle::documents(&c);
    let stop: HashSet<String> = stopwords().iter().map(str::to_string).collect();
    for scope in scopes(&c) {
        for term in ["mephedrone", "mdai", "dose", "α-pvp"] {
            let got = index.cooccurrence(term, &scope, 10, stopwords()).unwrap();
            let expected = oracle::cooccurrence(&c, &docs, term, &scope.source, scope.section.as_deref(), 10, &stop);
            assert_eq!(got, expected, "{term} {scope:?}");
        }
    }
}

#[test]
fn artifact_is_deterministic_and_round_trips() {
    let c = random::random_corpus(9, 300);
    let mut first = Vec::new();
    write_artifact(&TermIndex::build(&c), &mut first).unwrap();
    let mut second = Vec::new();
    write_artifact(&TermIndex::build(&c.clone()), &mut second).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with(format!("{MAGIC} {FORMAT_VERSION} {ENGINE_VERSION}\n").as_bytes()));

    let back = read_artifact(first.as_slice()).unwrap();
    assert_eq!(back, TermIndex::build(&c));
    let scope = Scope::source(SourceKind::ForumBluelightLike);
    assert_eq!(
        back.cooccurrence("mdai", &scope, 5, stopwords()).unwrap(),
        TermIndex::build(&c).cooccurrence("mdai", &scope, 5, stopwords()).unwrap()
    );
}

#[test]
fn artifact_header_is_checked() {
    assert!(matches!(read_artifact(&b"garbage\n{}"[..]), Err(ArtifactError::BadMagic)));
    assert!(matches!(read_artifact(&b"NPSWATCH-INDEX 99 0.1.0\n{}"[..]), Err(ArtifactError::FormatVersion { .. })));
    let stale = format!("{MAGIC} {FORMAT_VERSION} 0.0.0-old\n{{}}");
    assert!(matches!(read_artifact(stale.as_bytes()), Err(ArtifactError::EngineMismatch { .. })));
    let truncated = format!("{MAGIC} {FORMAT_VERSION} {ENGINE_VERSION}\n{{\"forums\":");
    assert!(matches!(read_artifact(truncated.as_bytes()), Err(ArtifactError::Json(_))));
}

proptest! {
    #[test]
    fn tokenizer_agrees_with_regex_oracle(text in "[a-zA-Z0-9αβγ ,.!-]{0,60}") {
        prop_assert_eq!(tokenize(&text), oracle::tokens(&text));
    }
}
