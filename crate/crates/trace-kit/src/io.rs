//! Family files on disk: canonical JSON and a hand-editable text format.
//!
//! JSON is the serde form of `Family`, `{"n": 4, "sets": [[], [1], [1, 2]]}`
//! with 1-based elements in any order. The text format is a header line
//! followed by one set per line:
//!
//! ```text
//! n=4
//! -
//! 1
//! 2
//! 1 2
//! ```
//!
//! `-` stands for the empty set. `read_family` sniffs the format: JSON
//! starts with `{`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::family::Family;

pub fn read_family(path: &Path) -> Result<Family> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_family(&text)
}

pub fn parse_family(text: &str) -> Result<Family> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("family JSON: {e}")))
    } else {
        parse_family_text(text)
    }
}

fn parse_family_text(text: &str) -> Result<Family> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty family file".into()))?;
    let n = header
        .strip_prefix("n=")
        .ok_or_else(|| Error::Parse(format!("expected \"n=<int>\" header, got {header:?}")))?
        .trim()
        .parse::<u32>()
        .map_err(|e| Error::Parse(format!("universe size: {e}")))?;
    let mut sets = Vec::new();
    for line in lines {
        if line == "-" {
            sets.push(Vec::new());
            continue;
        }
        let set = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("element {tok:?}: {e}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        sets.push(set);
    }
    Family::new(n, &sets)
}

pub fn write_family(path: &Path, family: &Family) -> Result<()> {
    let mut json = serde_json::to_string_pretty(family)
        .map_err(|e| Error::Parse(format!("family JSON: {e}")))?;
    json.push('\n');
    fs::write(path, json).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn render_family_text(family: &Family) -> String {
    let mut out = format!("n={}\n", family.universe());
    for mask in family.masks() {
        if *mask == 0 {
            out.push_str("-\n");
            continue;
        }
        let elements: Vec<String> = (1..=family.universe())
            .filter(|x| mask >> (x - 1) & 1 == 1)
            .map(|x| x.to_string())
            .collect();
        out.push_str(&elements.join(" "));
        out.push('\n');
    }
    out
}
