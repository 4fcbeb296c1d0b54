//! Timestamp parsing and formatting shared by every file format.

use chrono::{DateTime, SecondsFormat, Utc};

pub type Timestamp = DateTime<Utc>;

/// Parses an ISO-8601 / RFC 3339 instant. A bare `YYYY-MM-DDTHH:MM:SS`
/// (no offset) is read as UTC.
pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S")
        .or_else(|_| chrono::NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S"))
        .ok()
        .map(|n| n.and_utc())
}

pub fn format_timestamp(t: &Timestamp) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Uniform grid `start, start+dt, …` up to and including `end` when `dt`
/// divides the span.
pub fn time_grid(start: Timestamp, end: Timestamp, dt_s: i64) -> Vec<Timestamp> {
    let span = (end - start).num_seconds();
    if dt_s <= 0 || span < 0 {
        return Vec::new();
    }
    (0..=span / dt_s)
        .map(|k| start + chrono::Duration::seconds(k * dt_s))
        .collect()
}
