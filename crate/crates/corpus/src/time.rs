use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, Days, Months, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

/// Calendar bucket width. Weeks start on Monday (ISO 8601).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Day,
    Week,
    #[default]
    Month,
}

impl Granularity {
    pub const ALL: [Granularity; 3] = [Granularity::Day, Granularity::Week, Granularity::Month];

    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Day => "day",
            Granularity::Week => "week",
            Granularity::Month => "month",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown granularity {0:?} (expected day, week or month)")]
pub struct InvalidGranularity(pub String);

impl FromStr for Granularity {
    type Err = InvalidGranularity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "day" => Ok(Granularity::Day),
            "week" => Ok(Granularity::Week),
            "month" => Ok(Granularity::Month),
            other => Err(InvalidGranularity(other.to_string())),
        }
    }
}

/// A calendar-aligned UTC interval `[start, next().start)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimeBucket {
    pub granularity: Granularity,
    pub start: NaiveDate,
}

impl TimeBucket {
    /// The bucket of the given granularity containing `date`.
    pub fn containing(date: NaiveDate, granularity: Granularity) -> Self {
        let start = match granularity {
            Granularity::Day => date,
            Granularity::Week => date - Days::new(date.weekday().num_days_from_monday() as u64),
            Granularity::Month => date.with_day(1).expect("day 1 exists"),
        };
        TimeBucket { granularity, start }
    }

    pub fn next(self) -> Self {
        let start = match self.granularity {
            Granularity::Day => self.start + Days::new(1),
            Granularity::Week => self.start + Days::new(7),
            Granularity::Month => self.start + Months::new(1),
        };
        TimeBucket { granularity: self.granularity, start }
    }

    pub fn contains(self, ts: DateTime<Utc>) -> bool {
        bucket_of(ts, self.granularity) == self
    }

    /// Contiguous buckets from `first` through `last` inclusive.
    pub fn range(first: TimeBucket, last: TimeBucket) -> Vec<TimeBucket> {
        debug_assert_eq!(first.granularity, last.granularity);
        let mut out = Vec::new();
        let mut b = first;
        while b <= last {
            out.push(b);
            b = b.next();
        }
        out
    }
}

impl fmt::Display for TimeBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.granularity {
            Granularity::Month => write!(f, "{}", self.start.format("%Y-%m")),
            Granularity::Week => {
                let w = self.start.iso_week();
                write!(f, "{}-W{:02}", w.year(), w.week())
            }
            Granularity::Day => write!(f, "{}", self.start.format("%Y-%m-%d")),
        }
    }
}

/// The bucket containing `ts`. Buckets of one granularity partition the
/// timeline; each includes its start instant.
///
/// ```
/// use chrono::{NaiveDate, TimeZone, Utc};
/// use npswatch_corpus::{bucket_of, Granularity};
/// let ts = Utc.with_ymd_and_hms(2010, 3, 15, 12, 0, 0).unwrap();
/// let b = bucket_of(ts, Granularity::Month);
/// assert_eq!(b.start, NaiveDate::from_ymd_opt(2010, 3, 1).unwrap());
/// assert_eq!(b.to_string(), "2010-03");
/// ```
pub fn bucket_of(ts: DateTime<Utc>, granularity: Granularity) -> TimeBucket {
    TimeBucket::containing(ts.date_naive(), granularity)
}

/// Midnight UTC at the start of `date`; dates without a time of day are
/// normalised to this instant.
pub fn midnight(date: NaiveDate) -> DateTime<Utc> {
    date.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn d(y: i32, m: u32, day: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, day).unwrap()
    }

    #[test]
    fn month_boundaries_are_inclusive_start() {
        let ts = Utc.with_ymd_and_hms(2010, 3, 1, 0, 0, 0).unwrap();
        assert_eq!(bucket_of(ts, Granularity::Month).start, d(2010, 3, 1));
        let before = ts - chrono::Duration::nanoseconds(1);
        assert_eq!(bucket_of(before, Granularity::Month).start, d(2010, 2, 1));
        let first_post = Utc.with_ymd_and_hms(1999, 10, 22, 18, 30, 0).unwrap();
        assert_eq!(bucket_of(first_post, Granularity::Month).start, d(1999, 10, 1));
    }

    #[test]
    fn weeks_start_on_monday() {
        // 2010-03-15 was a Monday, 2010-03-21 a Sunday.
        let sunday = Utc.with_ymd_and_hms(2010, 3, 21, 23, 59, 59).unwrap();
        let b = bucket_of(sunday, Granularity::Week);
        assert_eq!(b.start, d(2010, 3, 15));
        assert_eq!(b.next().start, d(2010, 3, 22));
        assert_eq!(b.to_string(), "2010-W11");
    }

    #[test]
    fn range_is_contiguous() {
        let a = TimeBucket::containing(d(2009, 11, 20), Granularity::Month);
        let b = TimeBucket::containing(d(2010, 2, 3), Granularity::Month);
        let r = TimeBucket::range(a, b);
        assert_eq!(r.len(), 4);
        assert!(r.windows(2).all(|w| w[0].next() == w[1]));
        assert_eq!(r[3].start, d(2010, 2, 1));
    }

    #[test]
    fn granularity_parse() {
        assert_eq!("week".parse::<Granularity>().unwrap(), Granularity::Week);
        assert!("year".parse::<Granularity>().is_err());
        assert_eq!(Granularity::default(), Granularity::Month);
    }
}
