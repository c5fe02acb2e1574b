use chrono::{TimeZone, Utc};
use npswatch_corpus::{Corpus, CorpusBuilder, Post, SectionNode, SourceKind, Thread, Tweet};

/// One forum with two sections, six posts and one tweet.
pub fn sample() -> Corpus {
    let mut b = CorpusBuilder::new();
    b.add_forum("df", "Drugs forum", SourceKind::ForumDrugsforumLike);
    for (id, parent, depth) in [("root", None, 0), ("stims", Some("root"), 1), ("news", Some("root"), 1)] {
        let s = SectionNode {
            id: id.into(),
            forum_id: "df".into(),
            name: id.into(),
            parent_id: parent.map(String::from),
            depth,
            children: vec![],
        };
        b.add_section(s).expect("valid section");
    }
    let day = |m, d| Utc.with_ymd_and_hms(2010, m, d, 12, 0, 0).unwrap();
    for (id, section, title) in [("t1", "stims", "4-MMC"), ("t2", "news", "Ban")] {
        let t = Thread { id: id.into(), forum_id: "df".into(), section_id: section.into(), title: title.into(), created_at: day(1, 1) };
        b.add_thread(t);
    }
    let posts = [
        ("p1", "t1", day(1, 5), "mephedrone aka plant-food"),
        ("p6", "t1", day(1, 20), "any news"),
        ("p2", "t1", day(3, 2), "mephedrone bath salts again"),
        ("p3", "t1", day(3, 9), "plant-food mephedrone order"),
        ("p4", "t2", day(3, 20), "mephedrone ban announced"),
        ("p5", "t2", day(4, 2), "quiet week"),
    ];
    for (id, thread, at, text) in posts {
        b.add_post(Post { id: id.into(), thread_id: thread.into(), author_id: "u1".into(), created_at: at, text: text.into() });
    }
    b.add_tweet(Tweet {
        id: "w1".into(),
        created_at: day(3, 3),
        author_handle: "@a".into(),
        text: "mephedrone shortage".into(),
        matched_keywords: ["mephedrone".to_string()].into(),
    });
    b.finish()
}
