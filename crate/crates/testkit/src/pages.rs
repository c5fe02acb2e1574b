//! HTML page dumps in the layouts the shipped site adapters read.

use std::fmt::Write;

use rand::Rng;

use crate::build::words;
use crate::random::VOCAB;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A post on a generated page: (post id, user id, handle, "YYYY-MM-DD HH:MM", text).
pub type PagePost = (String, String, String, String, String);

/// A bluelight-like thread page under root "bl" and section `section`.
pub fn bl_thread(thread_id: &str, section: (&str, &str), title: &str, posts: &[PagePost]) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "<!DOCTYPE html>\n<html><body>\n<div id=\"vb-page\">\n<ul class=\"breadcrumb\">\n\
         <li><a href=\"/\" data-forum-id=\"bl\">Bluelight</a></li>\n\
         <li><a href=\"/f\" data-forum-id=\"{}\">{}</a></li>\n</ul>\n\
         <div id=\"thread\" data-thread-id=\"{thread_id}\">\n<h1 class=\"threadtitle\">{}</h1>\n<ol class=\"posts\">\n",
        section.0,
        escape(section.1),
        escape(title)
    );
    for (id, user, handle, date, text) in posts {
        let _ = writeln!(
            out,
            "<li class=\"postcontainer\" data-post-id=\"{id}\"><a class=\"username\" data-user-id=\"{user}\">{}</a>\
             <span class=\"date\">{date}</span><blockquote class=\"postcontent\">{}</blockquote></li>",
            escape(handle),
            escape(text)
        );
    }
    out.push_str("</ol>\n</div>\n</div>\n</body></html>\n");
    out
}

/// `threads` bluelight-like thread pages of `posts_per_thread` posts each,
/// spread over two sections, with random text. Returns (file name, html).
pub fn bl_dump(seed: u64, threads: usize, posts_per_thread: usize) -> Vec<(String, String)> {
    let mut r = crate::rng(seed);
    let sections = [("bl-stimulants", "Stimulants"), ("bl-harm-reduction", "Harm Reduction")];
    (0..threads)
        .map(|t| {
            let posts: Vec<PagePost> = (0..posts_per_thread)
                .map(|p| {
                    let user = r.random_range(0..25);
                    let n = r.random_range(3..12);
                    (
                        format!("bl-p-{t}-{p}"),
                        format!("bl-u-{user}"),
                        format!("user{user}"),
                        format!("2012-{:02}-{:02} {:02}:{:02}", 1 + t % 12, 1 + p % 28, p % 24, (7 * p) % 60),
                        words(&mut r, VOCAB, n),
                    )
                })
                .collect();
            let html = bl_thread(&format!("bl-t-{t}"), sections[t % 2], &format!("thread {t}"), &posts);
            (format!("thread-{t:03}.html"), html)
        })
        .collect()
}

/// A generic-shop showcase with one card per (name, price text, unit).
pub fn shop_showcase(cards: &[(&str, &str, &str)]) -> String {
    let mut out = String::from("<!DOCTYPE html>\n<html><body>\n<ul class=\"products\">\n");
    for (name, price, unit) in cards {
        let _ = writeln!(
            out,
            "<li class=\"product\"><h2 class=\"product-title\">{}</h2><span class=\"price\">{}</span>\
             <span class=\"unit\">{}</span></li>",
            escape(name),
            escape(price),
            escape(unit)
        );
    }
    out.push_str("</ul>\n</body></html>\n");
    out
}
