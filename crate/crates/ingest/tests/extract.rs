use chrono::{NaiveDate, TimeZone, Utc};
use npswatch_corpus::{CorpusBuilder, SourceKind};
use npswatch_ingest::*;

const BL_THREAD: &[u8] = include_bytes!("fixtures/bl_thread.html");
const BL_INDEX: &[u8] = include_bytes!("fixtures/bl_section_index.html");
const BL_PROFILES: &[u8] = include_bytes!("fixtures/bl_profiles.html");
const DF_THREAD: &[u8] = include_bytes!("fixtures/df_thread.html");
const SHOP1: &[u8] = include_bytes!("fixtures/shop1_showcase.html");
const SHOP_EMPTY: &[u8] = include_bytes!("fixtures/shop_empty.html");

fn adapter(name: &str) -> SiteAdapter {
    builtin_adapter(name).unwrap()
}

fn captured() -> chrono::DateTime<Utc> {
    Utc.with_ymd_and_hms(2015, 6, 10, 12, 0, 0).unwrap()
}

fn kinds(e: &Extraction) -> Vec<&'static str> {
    e.records
        .iter()
        .map(|r| match r.record {
            Record::Section(_) => "section",
            Record::Thread(_) => "thread",
            Record::Post(_) => "post",
            Record::User(_) => "user",
            Record::ListingSnapshot(_) => "listing_snapshot",
            Record::Tweet(_) => "tweet",
        })
        .collect()
}

#[test]
fn thread_page_yields_thread_and_three_posts() {
    let e = extract_forum_records(BL_THREAD, &adapter("bluelight-like"), captured()).unwrap();
    assert_eq!(kinds(&e), ["section", "section", "thread", "post", "post", "post"]);
    assert!(e.issues.is_empty());
    let posts: Vec<_> = e
        .records
        .iter()
        .filter_map(|r| match &r.record {
            Record::Post(p) => Some(p),
            _ => None,
        })
        .collect();
    assert_eq!(posts[0].created_at, Utc.with_ymd_and_hms(2010, 3, 15, 21, 30, 0).unwrap());
    assert_eq!(posts[1].created_at, Utc.with_ymd_and_hms(2010, 3, 16, 8, 5, 0).unwrap());
    assert_eq!(posts[2].created_at, Utc.with_ymd_and_hms(2010, 3, 17, 12, 0, 0).unwrap());
    assert_eq!(posts[0].text, "Tried mephedrone last weekend. Sold as plant-food.");
    assert_eq!(posts[0].author_id, "bl-u-7");
    let Record::Thread(t) = &e.records[2].record else { panic!("thread expected") };
    assert_eq!(t.section_id, "bl-stimulants");
    assert_eq!(t.title, "Mephedrone: first impressions");
    assert_eq!(t.created_at, posts[0].created_at);
    assert!(e.records.iter().all(|r| r.ingested_at == captured()));
}

#[test]
fn post_records_equal_post_blocks() {
    for (page, name, marker) in [
        (BL_THREAD, "bluelight-like", "class=\"postcontainer\""),
        (DF_THREAD, "drugsforum-like", "class=\"message\""),
    ] {
        let e = extract_forum_records(page, &adapter(name), captured()).unwrap();
        let blocks = std::str::from_utf8(page).unwrap().matches(marker).count();
        assert_eq!(e.count("post") + e.issues.iter().filter(|i| i.kind == "post").count(), blocks);
    }
}

#[test]
fn extraction_is_deterministic() {
    let a = extract_forum_records(DF_THREAD, &adapter("drugsforum-like"), captured()).unwrap();
    let b = extract_forum_records(DF_THREAD, &adapter("drugsforum-like"), captured()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn section_index_lists_subsections_under_the_current_section() {
    let e = extract_forum_records(BL_INDEX, &adapter("bluelight-like"), captured()).unwrap();
    let sections: Vec<_> = e
        .records
        .iter()
        .filter_map(|r| match &r.record {
            Record::Section(s) => Some(s),
            _ => None,
        })
        .collect();
    let subs: Vec<_> = sections.iter().filter(|s| s.depth == 2).collect();
    assert_eq!(subs.len(), 2);
    assert!(subs.iter().all(|s| s.parent_id.as_deref() == Some("bl-stimulants")));
    assert_eq!(subs[0].name, "Amphetamines");
    assert_eq!(sections[0].parent_id, None);
    assert_eq!(sections[1].parent_id.as_deref(), Some("bl"));
    assert_eq!(e.count("post"), 0);
}

#[test]
fn relative_dates_and_broken_blocks() {
    let e = extract_forum_records(DF_THREAD, &adapter("drugsforum-like"), captured()).unwrap();
    assert_eq!(e.count("section"), 3);
    assert_eq!(e.count("post"), 3);
    assert_eq!(e.issues.len(), 2);
    let dates: Vec<_> = e
        .records
        .iter()
        .filter_map(|r| match &r.record {
            Record::Post(p) => Some(p.created_at),
            _ => None,
        })
        .collect();
    assert_eq!(
        dates,
        [
            Utc.with_ymd_and_hms(2012, 1, 5, 10, 0, 0).unwrap(),
            Utc.with_ymd_and_hms(2015, 6, 9, 14, 5, 0).unwrap(),
            Utc.with_ymd_and_hms(2015, 6, 10, 9, 0, 0).unwrap(),
        ]
    );
}

#[test]
fn profiles() {
    let e = extract_forum_records(BL_PROFILES, &adapter("bluelight-like"), captured()).unwrap();
    let users: Vec<_> = e
        .records
        .iter()
        .filter_map(|r| match &r.record {
            Record::User(u) => Some(u),
            _ => None,
        })
        .collect();
    assert_eq!(users.len(), 2);
    assert_eq!(users[0].location_raw.as_deref(), Some("Wellington, New Zealand"));
    assert_eq!(users[1].location_raw, None);
    assert_eq!(users[0].forum_id, "bluelight");
}

#[test]
fn unrecognised_pages() {
    let bl = adapter("bluelight-like");
    assert!(matches!(extract_forum_records(b"", &bl, captured()), Err(IngestError::AdapterMismatch { .. })));
    assert!(matches!(extract_forum_records(DF_THREAD, &bl, captured()), Err(IngestError::AdapterMismatch { .. })));
    assert!(matches!(extract_forum_records(b"\xff\xfe<html>", &bl, captured()), Err(IngestError::MalformedPage(_))));
    let shop = adapter("generic-shop");
    assert!(matches!(extract_forum_records(BL_THREAD, &shop, captured()), Err(IngestError::InvalidAdapter { .. })));
}

#[test]
fn adapters_are_validated() {
    assert!(SiteAdapter::from_toml("name = \"x\"\nsource = \"forum-bl\"\nlandmarks = [\"div\"]\n").is_err());
    assert!(SiteAdapter::from_toml("name = \"x\"\nsource = \"shop\"\nlandmarks = [\"div[\"]\n").is_err());
    assert!(SiteAdapter::from_toml("name = \"x\"\nsource = \"shop\"\nlandmarks = []\n").is_err());
    assert!(SiteAdapter::from_toml("name = \"x\"\nsource = \"shop\"\nlandmarks = [\"div\"]\nbogus = 1\n").is_err());
    assert_eq!(builtin_adapters().len(), 3);
}

#[test]
fn showcase_with_seven_cards() {
    let shop = &default_shops()[0];
    assert_eq!(shop.domain, "chem-shop.co.uk");
    let cap = extract_shop_snapshot(&[SHOP1], shop, &adapter("generic-shop"), NaiveDate::from_ymd_opt(2015, 6, 1).unwrap())
        .unwrap();
    assert!(!cap.empty_showcase);
    let l = &cap.snapshot.listings;
    assert_eq!(l.len(), 7);
    assert_eq!(l[0].name, "MDAI Crystal");
    assert_eq!((l[0].price, l[0].currency.as_deref()), (Some(12.5), Some("GBP")));
    assert_eq!((l[3].price, l[3].currency.as_deref(), l[3].unit.as_deref()), (None, None, None));
    assert_eq!(l[4].currency.as_deref(), Some("EUR"));
    assert_eq!(l[6].currency.as_deref(), Some("BTC"));
}

#[test]
fn empty_showcase_is_flagged() {
    let shop = &default_shops()[4];
    let cap = extract_shop_snapshot(&[SHOP_EMPTY], shop, &adapter("generic-shop"), NaiveDate::from_ymd_opt(2015, 6, 1).unwrap())
        .unwrap();
    assert!(cap.empty_showcase);
    assert!(cap.snapshot.listings.is_empty());
}

#[test]
fn weekly_captures_are_ordered() {
    let shop = &default_shops()[0];
    let a = adapter("generic-shop");
    let d1 = NaiveDate::from_ymd_opt(2015, 6, 1).unwrap();
    let d2 = d1 + chrono::Days::new(7);
    let mut b = CorpusBuilder::new();
    for d in [d2, d1] {
        b.add_snapshot(extract_shop_snapshot(&[SHOP1], shop, &a, d).unwrap().snapshot);
    }
    let corpus = b.finish();
    assert!(corpus.snapshots[0].captured_at < corpus.snapshots[1].captured_at);
    corpus.validate(captured()).unwrap();
    let policy = FetchPolicy::default();
    assert!(!policy.is_due(Some(d1), d1 + chrono::Days::new(6)));
    assert!(policy.is_due(Some(d1), d2));
    assert!(policy.is_due(None, d1));
}

#[test]
fn extracted_records_build_a_valid_corpus() {
    let mut b = CorpusBuilder::new();
    b.add_forum("bluelight", "Bluelight", SourceKind::ForumBluelightLike);
    let a = adapter("bluelight-like");
    for page in [BL_INDEX, BL_THREAD, BL_PROFILES] {
        for r in extract_forum_records(page, &a, captured()).unwrap().records {
            r.validate().unwrap();
            r.apply(&mut b).unwrap();
        }
    }
    let corpus = b.finish();
    corpus.validate(captured()).unwrap();
    assert_eq!(corpus.forums[0].sections.len(), 4);
    assert_eq!(corpus.posts.len(), 3);
    assert_eq!(corpus.users.iter().find(|u| u.id == "bl-u-7").unwrap().post_count, 2);
}
