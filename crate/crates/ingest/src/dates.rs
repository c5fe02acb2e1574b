//! Post timestamps as printed by forums.

use std::sync::OnceLock;

use chrono::{DateTime, Duration, NaiveDate, NaiveDateTime, NaiveTime, Utc};
use regex::Regex;

/// Parses a printed post date. Relative forms ("just now", "today 14:05",
/// "yesterday, 09:30", "3 hours ago") are resolved against `captured_at`;
/// anything else is tried against `formats`, as a date-time first and then
/// as a bare date at midnight UTC.
pub fn parse_post_date(raw: &str, formats: &[String], captured_at: DateTime<Utc>) -> Option<DateTime<Utc>> {
    let s = raw.trim();
    let lower = s.to_lowercase();
    if lower == "just now" {
        return Some(captured_at);
    }
    if let Some(rest) = lower.strip_prefix("today").or_else(|| lower.strip_prefix("yesterday")) {
        let day = captured_at.date_naive() - Duration::days(lower.starts_with("yesterday") as i64);
        let time = rest.trim_start_matches([',', ' ']);
        let time = if time.is_empty() { NaiveTime::MIN } else { NaiveTime::parse_from_str(time, "%H:%M").ok()? };
        return Some(day.and_time(time).and_utc());
    }
    static AGO: OnceLock<Regex> = OnceLock::new();
    let ago = AGO.get_or_init(|| Regex::new(r"^(\d+)\s+(minute|hour|day|week)s?\s+ago$").expect("valid regex"));
    if let Some(c) = ago.captures(&lower) {
        let n: i64 = c[1].parse().ok()?;
        let step = match &c[2] {
            "minute" => Duration::minutes(n),
            "hour" => Duration::hours(n),
            "day" => Duration::days(n),
            _ => Duration::weeks(n),
        };
        return Some(captured_at - step);
    }
    for f in formats {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, f) {
            return Some(t.and_utc());
        }
        if let Ok(d) = NaiveDate::parse_from_str(s, f) {
            return Some(npswatch_corpus::midnight(d));
        }
    }
    None
}
