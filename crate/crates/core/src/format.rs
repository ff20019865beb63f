//! Line-oriented text format for decompositions.
//!
//! ```text
//! # leading comment lines are kept as provenance
//! mode exterior
//! min-genus 1
//! F (1,1)
//! S (2,1)
//! end
//! ```
//!
//! `min-genus` and (closed mode only) `three-handles N` are optional and
//! precede the level lines. Comments elsewhere, including trailing ones, are
//! dropped. Serializing a parsed canonical file reproduces it byte for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::{CircularDecomposition, DecompositionError, Mode};
use crate::surface::{SurfaceClass, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Surface { line: usize, source: SurfaceError },
    #[error("{0}")]
    Shape(#[from] DecompositionError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<CircularDecomposition, FormatError> {
    let mut provenance = Vec::new();
    let mut header_done = false;
    let mut mode = None;
    let mut min_genus = None;
    let mut three_handles = None;
    let mut levels: Vec<SurfaceClass> = Vec::new();
    let mut ended = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if !header_done {
            if let Some(c) = trimmed.strip_prefix('#') {
                provenance.push(c.strip_prefix(' ').unwrap_or(c).trim_end().to_string());
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            header_done = true;
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if ended {
            return Err(syntax(line, "content after `end`"));
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match keyword {
            "mode" => {
                if mode.is_some() {
                    return Err(syntax(line, "duplicate `mode`"));
                }
                mode = Some(match rest {
                    "exterior" => Mode::Exterior,
                    "closed" => Mode::Closed,
                    other => return Err(syntax(line, format!("unknown mode `{other}`"))),
                });
            }
            _ if mode.is_none() => return Err(syntax(line, "expected `mode` first")),
            "min-genus" | "three-handles" => {
                if !levels.is_empty() {
                    return Err(syntax(line, format!("`{keyword}` must precede the levels")));
                }
                let n: u32 = rest
                    .parse()
                    .map_err(|_| syntax(line, format!("`{keyword}` needs an unsigned integer")))?;
                let slot = if keyword == "min-genus" {
                    &mut min_genus
                } else {
                    if mode == Some(Mode::Exterior) {
                        return Err(syntax(
                            line,
                            "`three-handles` is only allowed in closed mode",
                        ));
                    }
                    &mut three_handles
                };
                if slot.replace(n).is_some() {
                    return Err(syntax(line, format!("duplicate `{keyword}`")));
                }
            }
            "F" | "S" => {
                let expected = if levels.len().is_multiple_of(2) {
                    "F"
                } else {
                    "S"
                };
                if keyword != expected {
                    return Err(syntax(line, format!("expected `{expected}` line")));
                }
                let surface = rest
                    .parse::<SurfaceClass>()
                    .map_err(|source| FormatError::Surface { line, source })?;
                levels.push(surface);
            }
            "end" => {
                if !rest.is_empty() {
                    return Err(syntax(line, "unexpected text after `end`"));
                }
                ended = true;
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let last = text.lines().count();
    let mode = mode.ok_or_else(|| syntax(last, "missing `mode`"))?;
    if !ended {
        return Err(syntax(last, "missing `end`"));
    }
    if levels.is_empty() {
        return Err(syntax(last, "no level surfaces"));
    }
    if levels.len() > 1 && levels.len() % 2 == 1 {
        return Err(syntax(last, "last F line must be followed by an S line"));
    }
    Ok(CircularDecomposition::from_levels(mode, levels)?
        .with_min_genus(min_genus)
        .with_three_handles(three_handles.unwrap_or(0))
        .with_provenance(provenance))
}

pub fn serialize(d: &CircularDecomposition) -> String {
    let mut out = String::new();
    for p in d.provenance() {
        if p.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {p}");
        }
    }
    let _ = writeln!(out, "mode {}", d.mode());
    if let Some(g) = d.min_genus() {
        let _ = writeln!(out, "min-genus {g}");
    }
    if d.three_handles() > 0 {
        let _ = writeln!(out, "three-handles {}", d.three_handles());
    }
    for (level, s) in d.levels() {
        let tag = match level {
            crate::decomposition::Level::Thin(_) => "F",
            crate::decomposition::Level::Thick(_) => "S",
        };
        if s.is_empty() {
            let _ = writeln!(out, "{tag}");
        } else {
            let _ = writeln!(out, "{tag} {s}");
        }
    }
    out.push_str("end\n");
    out
}
