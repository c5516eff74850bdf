//! Extraction of the `Generated Path: [[x, y], ...]` answer from model text.

use thiserror::Error;

use crate::env::Point;

pub const MARKER: &str = "Generated Path:";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("response contains no `Generated Path:` marker")]
    MarkerMissing,
    #[error("malformed path list: {0}")]
    Malformed(String),
}

/// Parses the list that follows the last `Generated Path:` marker.
///
/// Whitespace is free-form and coordinates may be real-valued; they are
/// rounded half away from zero. Text after the closing bracket is ignored.
pub fn parse_path(response: &str) -> Result<Vec<Point>, ParseError> {
    let at = response.rfind(MARKER).ok_or(ParseError::MarkerMissing)?;
    let rest = response[at + MARKER.len()..].trim_start();
    if !rest.starts_with('[') {
        return Err(ParseError::Malformed("expected `[` after the marker".into()));
    }
    let list = balanced_prefix(rest)
        .ok_or_else(|| ParseError::Malformed("unbalanced brackets".into()))?;
    let pairs: Vec<Vec<f64>> =
        serde_json::from_str(list).map_err(|e| ParseError::Malformed(e.to_string()))?;
    pairs
        .into_iter()
        .enumerate()
        .map(|(i, pair)| match pair.as_slice() {
            &[x, y] => Ok(Point::new(round_coord(x)?, round_coord(y)?)),
            other => Err(ParseError::Malformed(format!(
                "entry {i} has {} coordinates, expected 2",
                other.len()
            ))),
        })
        .collect()
}

// The shortest prefix starting at `[` whose brackets balance.
fn balanced_prefix(text: &str) -> Option<&str> {
    let mut depth = 0usize;
    for (i, c) in text.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(&text[..=i]);
                }
            }
            _ => {}
        }
    }
    None
}

fn round_coord(v: f64) -> Result<i64, ParseError> {
    let r = v.round();
    if !r.is_finite() || r.abs() > 1e15 {
        return Err(ParseError::Malformed(format!("coordinate {v} out of range")));
    }
    Ok(r as i64)
}
