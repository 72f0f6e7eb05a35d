//! Text formats: witness files and bare code sets.
//!
//! A witness file looks like
//!
//! ```text
//! # partition-base witness
//! a: 2
//! b: 3
//! group: sym
//! size: 4
//! provenance: search_fallback(seed=0,trial=0)
//! status: verified-base
//! verifier: partition-base 0.1.0
//! partitions:
//! 0 1 | 2 3 | 4 5
//! ...
//! codeset:
//! 0 0 1 2
//! ...
//! end
//! ```
//!
//! One line per partition, parts separated by `|`. The `codeset:` block is
//! optional. Serialization sorts points within parts and parts by their
//! smallest point, so canonical files round-trip byte for byte.

use crate::certificate::WitnessCertificate;
use crate::domain::{partitions_to_codeset, CodeSet, RegularPartition, Symbol};
use crate::error::{Error, Result};
use crate::formulas::Group;

pub const VERIFIER: &str = concat!("partition-base ", env!("CARGO_PKG_VERSION"));
const HEADER: &str = "# partition-base witness";
const KEYS: [&str; 7] = ["a", "b", "group", "size", "provenance", "status", "verifier"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFile {
    pub a: usize,
    pub b: usize,
    pub group: Group,
    pub size: usize,
    pub provenance: String,
    pub status: String,
    pub verifier: String,
    pub partitions: Vec<RegularPartition>,
    pub codeset: Option<CodeSet>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl WitnessFile {
    pub fn from_certificate(cert: &WitnessCertificate) -> WitnessFile {
        WitnessFile {
            a: cert.params.a(),
            b: cert.params.b(),
            group: cert.group,
            size: cert.partitions.len(),
            provenance: cert.provenance.to_string(),
            status: cert.status.as_str().to_string(),
            verifier: VERIFIER.to_string(),
            partitions: cert.partitions.clone(),
            // Symbols relabelled to match the partition order.
            codeset: cert
                .codeset
                .as_ref()
                .and_then(|_| partitions_to_codeset(&cert.partitions).ok()),
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        let values = [
            self.a.to_string(),
            self.b.to_string(),
            self.group.to_string(),
            self.size.to_string(),
            self.provenance.clone(),
            self.status.clone(),
            self.verifier.clone(),
        ];
        for (k, v) in KEYS.iter().zip(values) {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out.push_str("partitions:\n");
        for p in &self.partitions {
            let parts: Vec<String> = p
                .parts()
                .iter()
                .map(|part| part.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect();
            out.push_str(&parts.join(" | "));
            out.push('\n');
        }
        if let Some(set) = &self.codeset {
            out.push_str("codeset:\n");
            out.push_str(&set.to_string());
        }
        out.push_str("end\n");
        out
    }

    /// Parses a witness file; points are read as numbered from `index_base`.
    pub fn parse(text: &str, index_base: usize) -> Result<WitnessFile> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut values: Vec<Option<(usize, String)>> = vec![None; KEYS.len()];
        let mut last_line = 0;

        // Header.
        loop {
            let Some((no, line)) = lines.next() else {
                return Err(parse_err(last_line + 1, 1, "missing 'partitions:' block"));
            };
            last_line = no;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed == "partitions:" {
                break;
            }
            let Some((key, value)) = trimmed.split_once(':') else {
                return Err(parse_err(no, 1, "expected 'key: value'"));
            };
            let key = key.trim();
            let idx = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| parse_err(no, 1, format!("unknown key '{key}'")))?;
            if values[idx].is_some() {
                return Err(parse_err(no, 1, format!("duplicate key '{key}'")));
            }
            values[idx] = Some((no, value.trim().to_string()));
        }
        let mut get = |i: usize| {
            values[i]
                .take()
                .ok_or_else(|| parse_err(last_line, 1, format!("missing key '{}'", KEYS[i])))
        };
        let number = |(no, v): (usize, String)| {
            v.parse::<usize>()
                .map_err(|_| parse_err(no, 1, format!("'{v}' is not a number")))
        };
        let a = number(get(0)?)?;
        let b = number(get(1)?)?;
        let (gno, gval) = get(2)?;
        let group: Group = gval.parse().map_err(|_| parse_err(gno, 1, format!("unknown group '{gval}'")))?;
        let (size_line, size_value) = get(3)?;
        let size = number((size_line, size_value))?;
        let provenance = get(4)?.1;
        let status = get(5)?.1;
        let verifier = get(6)?.1;

        // Partitions.
        let mut partitions = Vec::new();
        let mut codeset_rows: Option<Vec<(usize, Vec<Symbol>)>> = None;
        let mut ended = false;
        while let Some((no, line)) = lines.next() {
            last_line = no;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed == "end" {
                ended = true;
                break;
            }
            if trimmed == "codeset:" {
                let mut rows = Vec::new();
                for (no, line) in lines.by_ref() {
                    last_line = no;
                    let trimmed = line.trim();
                    if trimmed == "end" {
                        ended = true;
                        break;
                    }
                    if trimmed.is_empty() || trimmed.starts_with('#') {
                        continue;
                    }
                    rows.push((no, parse_word(no, line)?));
                }
                codeset_rows = Some(rows);
                break;
            }
            partitions.push(parse_partition(no, line, index_base)?);
        }
        if !ended {
            return Err(parse_err(last_line + 1, 1, "missing 'end'"));
        }
        if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(parse_err(no, 1, "text after 'end'"));
        }
        if partitions.len() != size {
            return Err(parse_err(
                size_line,
                1,
                format!("size {size} but {} partitions listed", partitions.len()),
            ));
        }
        for p in &partitions {
            if p.a() != a || p.b() != b {
                return Err(parse_err(
                    size_line,
                    1,
                    format!("a partition has {} parts of size {}, expected ({a},{b})", p.b(), p.a()),
                ));
            }
        }
        let codeset = match codeset_rows {
            None => None,
            Some(rows) => {
                let first = rows.first().map_or(last_line, |r| r.0);
                let set = CodeSet::from_words(size.max(1), b, rows.iter().map(|r| &r.1))
                    .map_err(|e| parse_err(first, 1, e.to_string()))?;
                if !partitions.is_empty() && partitions_to_codeset(&partitions)? != set {
                    return Err(parse_err(first, 1, "codeset block does not match the partitions"));
                }
                Some(set)
            }
        };
        Ok(WitnessFile {
            a,
            b,
            group,
            size,
            provenance,
            status,
            verifier,
            partitions,
            codeset,
        })
    }
}

fn parse_partition(no: usize, line: &str, index_base: usize) -> Result<RegularPartition> {
    let mut parts = Vec::new();
    let mut offset = 0;
    for chunk in line.split('|') {
        let mut part = Vec::new();
        for (col, token) in tokens(chunk) {
            let x: usize = token
                .parse()
                .map_err(|_| parse_err(no, offset + col, format!("'{token}' is not a point")))?;
            if x < index_base {
                return Err(parse_err(no, offset + col, format!("point {x} is below the index base {index_base}")));
            }
            part.push(x - index_base);
        }
        if part.is_empty() {
            return Err(parse_err(no, offset + 1, "empty part"));
        }
        parts.push(part);
        offset += chunk.chars().count() + 1;
    }
    RegularPartition::from_parts(parts).map_err(|e| parse_err(no, 1, e.to_string()))
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, c)) in s.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (true, Some((b0, c0))) => {
                out.push((c0 + 1, &s[b0..byte]));
                start = None;
            }
            (false, None) => start = Some((byte, col)),
            _ => {}
        }
    }
    if let Some((b0, c0)) = start {
        out.push((c0 + 1, &s[b0..]));
    }
    out
}

fn parse_word(no: usize, line: &str) -> Result<Vec<Symbol>> {
    tokens(line)
        .into_iter()
        .map(|(col, t)| {
            t.parse::<Symbol>()
                .map_err(|_| parse_err(no, col, format!("'{t}' is not a symbol")))
        })
        .collect()
}

/// A bare code set: one word per line, symbols separated by spaces.
pub fn parse_codeset(text: &str) -> Result<CodeSet> {
    let mut rows: Vec<Vec<Symbol>> = Vec::new();
    let mut width = None;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if line.trim().is_empty() || line.trim().starts_with('#') {
            continue;
        }
        let w = parse_word(no, line)?;
        match width {
            None => width = Some(w.len()),
            Some(m) if m != w.len() => {
                return Err(parse_err(no, 1, format!("word of length {} after words of length {m}", w.len())))
            }
            _ => {}
        }
        rows.push(w);
    }
    let width = width.ok_or_else(|| parse_err(1, 1, "no words"))?;
    let b = rows.iter().flatten().map(|&s| s as usize + 1).max().unwrap_or(1).max(2);
    CodeSet::from_words(width, b, rows)
}

/// Witness files contain a `key: value` line; bare code sets do not.
pub fn looks_like_witness(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.contains(':'))
}
