//! User-supplied knot invariant tables and the canonical decompositions
//! they determine.
//!
//! The table is CSV with header `name,genus,fibered,handle_number`; `#`
//! lines are comments and `handle_number` may be empty. `genus` is read as
//! the minimal Seifert genus.

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{CircularDecomposition, Mode};
use crate::surface::SurfaceClass;

const HEADER: [&str; 4] = ["name", "genus", "fibered", "handle_number"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: expected header `name,genus,fibered,handle_number`")]
    Header { line: u64 },
    #[error("line {line}: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("line {line}: negative genus")]
    NegativeGenus { line: u64 },
    #[error("line {line}: duplicate knot `{name}`")]
    Duplicate { line: u64, name: String },
    #[error("line {line}: {msg}")]
    Inconsistent { line: u64, msg: String },
    #[error("knot `{0}` not in table")]
    UnknownKnot(String),
    #[error("knot `{0}` is neither fibered nor of handle number one; no canonical decomposition")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotRecord {
    pub name: String,
    pub genus: u32,
    pub fibered: bool,
    pub handle_number: Option<u32>,
}

impl KnotRecord {
    /// Genus 0 means the unknot; accepted, but every complexity is 0.
    pub fn is_unknot(&self) -> bool {
        self.genus == 0
    }
}

/// Split one line into trimmed fields; quoting follows CSV rules.
fn fields(text: &str, line: u64) -> Result<Vec<String>, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    match reader.records().next() {
        Some(Ok(r)) => Ok(r.iter().map(str::to_string).collect()),
        Some(Err(e)) => Err(TableError::Malformed {
            line,
            msg: e.to_string(),
        }),
        None => Ok(Vec::new()),
    }
}

pub fn parse_table(text: &str) -> Result<Vec<KnotRecord>, TableError> {
    // Rows are read line by line so errors carry source line numbers,
    // comments and blank lines included.
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((line, header)) = rows.next() else {
        return Err(TableError::Header { line: 1 });
    };
    if fields(header, line)? != HEADER {
        return Err(TableError::Header { line });
    }

    let mut out: Vec<KnotRecord> = Vec::new();
    for (line, text) in rows {
        let row = fields(text, line)?;
        if row.len() != 4 {
            return Err(TableError::Malformed {
                line,
                msg: format!("expected 4 fields, found {}", row.len()),
            });
        }
        let malformed = |msg: String| TableError::Malformed { line, msg };
        let name = row[0].to_string();
        if name.is_empty() {
            return Err(malformed("empty name".into()));
        }
        let genus = match row[1].parse::<i64>() {
            Ok(g) if g < 0 => return Err(TableError::NegativeGenus { line }),
            Ok(g) => u32::try_from(g).map_err(|_| malformed("genus too large".into()))?,
            Err(_) => return Err(malformed(format!("bad genus `{}`", row[1]))),
        };
        let fibered = match row[2].as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(malformed(format!(
                    "fibered must be true/false, got `{other}`"
                )))
            }
        };
        let handle_number = match row[3].as_str() {
            "" => None,
            h => Some(
                h.parse::<u32>()
                    .map_err(|_| malformed(format!("bad handle_number `{h}`")))?,
            ),
        };
        match (fibered, handle_number) {
            (true, Some(h)) if h > 0 => {
                return Err(TableError::Inconsistent {
                    line,
                    msg: "a fibered knot has handle number 0".into(),
                })
            }
            (false, Some(0)) => {
                return Err(TableError::Inconsistent {
                    line,
                    msg: "handle number 0 means fibered".into(),
                })
            }
            _ => {}
        }
        if out.iter().any(|r| r.name == name) {
            return Err(TableError::Duplicate { line, name });
        }
        out.push(KnotRecord {
            name,
            genus,
            fibered,
            handle_number,
        });
    }
    Ok(out)
}

pub fn find<'a>(records: &'a [KnotRecord], name: &str) -> Result<&'a KnotRecord, TableError> {
    records
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| TableError::UnknownKnot(name.to_string()))
}

/// Fibered knots get the fibration (`k = 0`); handle-number-one knots get a
/// single stage whose thick surface has genus one more than the fiber.
pub fn canonical_decomposition(r: &KnotRecord) -> Result<CircularDecomposition, TableError> {
    let base = SurfaceClass::connected(r.genus, 1);
    let d = if r.fibered {
        CircularDecomposition::fibered(Mode::Exterior, base)
    } else if r.handle_number == Some(1) {
        let thick = SurfaceClass::connected(r.genus + 1, 1);
        CircularDecomposition::new(Mode::Exterior, vec![base], vec![thick]).expect("one stage")
    } else {
        return Err(TableError::Unsupported(r.name.clone()));
    };
    let mut d = d.with_min_genus(Some(r.genus));
    d.push_provenance(format!("knot {}", r.name));
    if r.is_unknot() {
        d.push_provenance("genus 0: unknot");
    }
    Ok(d)
}
