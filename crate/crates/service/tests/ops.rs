use std::fs;
use std::path::Path;

use chrono::{NaiveDate, TimeZone, Utc};
use npswatch_corpus::{ShopListing, ShopSnapshot};
use npswatch_service::*;
use npswatch_testkit::{fixture, pages};

fn thirty_post_dump(dir: &Path) {
    for (name, html) in pages::bl_dump(1, 1, 30) {
        fs::write(dir.join(name), html).unwrap();
    }
}

fn at() -> chrono::DateTime<Utc> {
    Utc.with_ymd_and_hms(2013, 1, 1, 0, 0, 0).unwrap()
}

#[test]
fn ingest_counts_and_skips_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let dump = tempfile::tempdir().unwrap();
    thirty_post_dump(dump.path());
    let store = Store::open(dir.path()).unwrap();
    let first = ingest(&store, "bluelight-like", dump.path(), at()).unwrap();
    assert_eq!((first.files, first.posts, first.skipped), (1, 30, 0));
    assert!(first.errors.is_empty(), "{:?}", first.errors);
    assert_eq!(store.config().unwrap().forum("bluelight").unwrap().source.tag(), "forum-bl");
    let second = ingest(&store, "bluelight-like", dump.path(), at()).unwrap();
    assert_eq!((second.posts, second.skipped, second.structure), (0, 30, 0));
    assert_eq!(store.corpus().unwrap().posts.len(), 30);
}

#[test]
fn unknown_and_shop_adapters_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    assert!(matches!(ingest(&store, "nope", dir.path(), at()), Err(ServiceError::UnknownAdapter(n)) if n == "nope"));
    assert!(matches!(ingest(&store, "generic-shop", dir.path(), at()), Err(ServiceError::Config(_))));
}

#[test]
fn stream_ingest_filters_on_keywords() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let file = dir.path().join("stream.jsonl");
    let lines: Vec<String> = ["MDAI back in stock", "nice weather", "etizolam?"]
        .iter()
        .enumerate()
        .map(|(i, t)| {
            format!(r#"{{"id":"s{i}","created_at":"2015-03-0{}T10:00:00Z","author_handle":"@x","text":"{t}"}}"#, i + 1)
        })
        .chain(["not json".to_string()])
        .collect();
    fs::write(&file, lines.join("\n")).unwrap();
    let report = ingest(&store, STREAM_ADAPTER, &file, at()).unwrap();
    assert_eq!((report.tweets, report.errors.len()), (2, 1));
    assert_eq!(ingest(&store, STREAM_ADAPTER, &file, at()).unwrap().skipped, 2);
}

#[test]
fn index_build_is_deterministic_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    assert!(matches!(build_index(&store), Err(ServiceError::EmptyStore)));
    assert!(matches!(store.read_index(), Err(ServiceError::MissingIndex(_))));
    let f = fixture::standard(3);
    store.import_corpus("fixture", &f.corpus).unwrap();
    let report = build_index(&store).unwrap();
    let docs = f.corpus.posts.len() + f.corpus.tweets.len() + f.corpus.snapshots.iter().map(|s| s.listings.len()).sum::<usize>();
    assert_eq!(report.docs, docs as u64);
    let bytes = fs::read(store.index_path()).unwrap();
    build_index(&store).unwrap();
    assert_eq!(fs::read(store.index_path()).unwrap(), bytes);
    let leftovers: Vec<_> = fs::read_dir(store.index_path().parent().unwrap()).unwrap().collect();
    assert_eq!(leftovers.len(), 1);
    assert_eq!(store.read_index().unwrap().doc_count(), docs);
}

#[test]
fn imported_corpus_reloads_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let f = fixture::standard(3);
    store.import_corpus("fixture", &f.corpus).unwrap();
    assert_eq!(store.corpus().unwrap(), f.corpus);
}

#[test]
fn snapshot_table_refuses_same_day_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let snap = ShopSnapshot {
        shop_id: 4,
        domain: "sciencesuppliesdirect.com".into(),
        captured_at: NaiveDate::from_ymd_opt(2015, 6, 1).unwrap(),
        listings: vec![
            ShopListing { name: "MDAI".into(), price: Some(12.5), currency: Some("GBP".into()), unit: Some("1g".into()) },
            ShopListing { name: "1P-LSD".into(), price: None, currency: None, unit: None },
        ],
    };
    store.insert_snapshot(&snap).unwrap();
    assert!(matches!(store.insert_snapshot(&snap), Err(ServiceError::DuplicateSnapshot { shop_id: 4, .. })));
    assert_eq!(store.snapshots().unwrap(), vec![snap]);
}

#[test]
fn config_round_trips_through_toml() {
    let dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    let config = store.config().unwrap();
    assert_eq!(config.shops.len(), 10);
    assert_eq!(Config::from_toml(&config.to_toml()).unwrap(), config);
    assert!(matches!(Config::from_toml("bogus = 1"), Err(ServiceError::Config(_))));
}

fn write_showcases(dir: &Path, config: &Config) {
    for shop in &config.shops {
        let html = pages::shop_showcase(&[("MDAI Crystal", "£12.50", "1g"), (&format!("Item {}", shop.id), "£3", "1g")]);
        let page = PageDir::new(dir);
        let path = page.path_for(&shop.showcase[0]).unwrap();
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, html).unwrap();
    }
}

fn quick_retries(store: &Store) {
    let mut config = store.config().unwrap();
    config.fetch.backoff_base = std::time::Duration::from_millis(5);
    store.save_config(&config).unwrap();
}

#[tokio::test]
async fn ten_shops_then_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let pages_dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    write_showcases(pages_dir.path(), &store.config().unwrap());
    let day = NaiveDate::from_ymd_opt(2015, 6, 1).unwrap();
    let report = snapshot_shops(&store, &PageDir::new(pages_dir.path()), day).await.unwrap();
    assert_eq!(report.created, (1..=10).collect::<Vec<u32>>());
    assert!(report.failures.is_empty() && report.duplicates.is_empty());
    let again = snapshot_shops(&store, &PageDir::new(pages_dir.path()), day).await.unwrap();
    assert_eq!((again.created.len(), again.duplicates.len()), (0, 10));
    assert_eq!(store.snapshots().unwrap().len(), 10);
}

#[tokio::test]
async fn unreachable_shop_does_not_stop_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let pages_dir = tempfile::tempdir().unwrap();
    let store = Store::open(dir.path()).unwrap();
    quick_retries(&store);
    let config = store.config().unwrap();
    write_showcases(pages_dir.path(), &config);
    fs::remove_file(PageDir::new(pages_dir.path()).path_for(&config.shops[4].showcase[0]).unwrap()).unwrap();
    let report = snapshot_shops(&store, &PageDir::new(pages_dir.path()), NaiveDate::from_ymd_opt(2015, 6, 8).unwrap())
        .await
        .unwrap();
    assert_eq!(report.created.len(), 9);
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.failures[0].shop_id, 5);
}

#[test]
fn page_dir_maps_urls_to_files() {
    let p = PageDir::new("/d");
    assert_eq!(p.path_for("https://www.shop.eu/").unwrap(), Path::new("/d/www.shop.eu/index.html"));
    assert_eq!(p.path_for("http://shop.eu/cat/page2?x=1").unwrap(), Path::new("/d/shop.eu/cat/page2.html"));
    assert_eq!(p.path_for("http://shop.eu/a.htm").unwrap(), Path::new("/d/shop.eu/a.htm"));
    assert!(p.path_for("http://shop.eu/../etc/passwd").is_none());
}
