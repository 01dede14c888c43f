//! Starter file formats.
//!
//! JSON: one object per starter, `{"order": n, "pairs": [[a, b], ...]}`. A file
//! may hold a single object, an array of objects, or one object per line.
//!
//! Plain text: a header line `order n` followed by one `a b` pair per line.
//! Several starters may follow each other, each with its own header. Blank
//! lines and lines starting with `#` are ignored.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairing::{OrderedPair, Pairing};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StarterRecord {
    pub order: u32,
    pub pairs: Vec<OrderedPair>,
}

impl From<&Pairing> for StarterRecord {
    fn from(p: &Pairing) -> Self {
        Self {
            order: p.modulus(),
            pairs: p.pairs().to_vec(),
        }
    }
}

impl StarterRecord {
    pub fn into_pairing(self) -> Result<Pairing> {
        Pairing::new(self.order, self.pairs)
    }
}

pub fn to_json(pairing: &Pairing) -> String {
    serde_json::to_string(&StarterRecord::from(pairing)).expect("starter record serializes")
}

pub fn to_text(pairing: &Pairing) -> String {
    let mut out = format!("order {}\n", pairing.modulus());
    for p in pairing.iter() {
        out.push_str(&format!("{} {}\n", p.first, p.second));
    }
    out
}

/// Parses either format, picking JSON when the first significant character
/// opens an object or array.
pub fn parse_starters(text: &str) -> Result<Vec<Pairing>> {
    match text.trim_start().chars().next() {
        Some('{') | Some('[') => parse_json_starters(text),
        _ => parse_text_starters(text),
    }
}

pub fn parse_json_starters(text: &str) -> Result<Vec<Pairing>> {
    let json_err = |e: serde_json::Error| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    };
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let records: Vec<StarterRecord> = serde_json::from_str(text).map_err(json_err)?;
        return records.into_iter().map(StarterRecord::into_pairing).collect();
    }
    // One object, possibly followed by more (JSON lines).
    let mut out = Vec::new();
    let stream = serde_json::Deserializer::from_str(text).into_iter::<StarterRecord>();
    for record in stream {
        let record = record.map_err(json_err)?;
        let line = line_of_record(text, out.len());
        out.push(record.into_pairing().map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no starter found".into(),
        });
    }
    Ok(out)
}

fn line_of_record(text: &str, index: usize) -> usize {
    // best effort: the index-th line that opens an object
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with('{'))
        .nth(index)
        .map(|(i, _)| i + 1)
        .unwrap_or(1)
}

pub fn parse_text_starters(text: &str) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    let mut current: Option<(usize, u32, Vec<OrderedPair>)> = None;

    let finish = |cur: (usize, u32, Vec<OrderedPair>)| -> Result<Pairing> {
        let (line, order, pairs) = cur;
        Pairing::new(order, pairs).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields[0] == "order" {
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: "expected `order <n>`".into(),
                });
            }
            let order = parse_u32(fields[1], line)?;
            if let Some(cur) = current.take() {
                out.push(finish(cur)?);
            }
            current = Some((line, order, Vec::new()));
            continue;
        }
        let Some((_, order, pairs)) = current.as_mut() else {
            return Err(Error::Parse {
                line,
                msg: "pair before `order` header".into(),
            });
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected two integers, found `{content}`"),
            });
        }
        let a = parse_u32(fields[0], line)?;
        let b = parse_u32(fields[1], line)?;
        if a >= *order || b >= *order {
            return Err(Error::Parse {
                line,
                msg: format!("entry out of range for order {order}"),
            });
        }
        pairs.push(OrderedPair::new(a, b));
    }
    match current {
        Some(cur) => out.push(finish(cur)?),
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "missing `order` header".into(),
            })
        }
    }
    Ok(out)
}

fn parse_u32(s: &str, line: usize) -> Result<u32> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("`{s}` is not a non-negative integer"),
    })
}

pub fn read_starters(path: impl AsRef<Path>) -> Result<Vec<Pairing>> {
    parse_starters(&fs::read_to_string(path)?)
}

/// Reads a file that must contain exactly one starter.
pub fn read_starter(path: impl AsRef<Path>) -> Result<Pairing> {
    let mut all = read_starters(path)?;
    if all.len() != 1 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected one starter, found {}", all.len()),
        });
    }
    Ok(all.remove(0))
}

/// Writes plain text for `.txt` paths and JSON (one object per line) otherwise.
pub fn write_starters(path: impl AsRef<Path>, starters: &[Pairing]) -> Result<()> {
    let path = path.as_ref();
    let text_format = path.extension().is_some_and(|e| e == "txt");
    let mut out = String::new();
    for s in starters {
        if text_format {
            out.push_str(&to_text(s));
        } else {
            out.push_str(&to_json(s));
            out.push('\n');
        }
    }
    fs::write(path, out)?;
    Ok(())
}
