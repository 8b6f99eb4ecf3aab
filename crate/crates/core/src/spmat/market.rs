//! Matrix Market coordinate I/O.
//!
//! The canonical on-disk form for a [`SymSparseMatrix`] is
//! `%%MatrixMarket matrix coordinate real symmetric` with all diagonal
//! entries stored explicitly and one lower-triangle entry per edge.
//! Patterns use the `pattern` field variant. Values are serialized with 17
//! significant decimal digits, which round-trips every finite f64 exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{SparsityPattern, SymSparseMatrix};

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported header: {0}")]
    UnsupportedHeader(String),
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("duplicate entry at ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("entry ({i}, {j}) out of range for dimension {d}")]
    OutOfRange { i: usize, j: usize, d: usize },
    #[error(transparent)]
    Build(#[from] super::SpmatError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> MarketError {
    MarketError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Formats a value with 17 significant digits (lossless f64 round trip).
pub fn format_value(v: f64) -> String {
    format!("{:.16e}", v)
}

pub fn write_matrix<W: Write>(m: &SymSparseMatrix, mut w: W) -> Result<(), MarketError> {
    let d = m.d();
    let nnz = d + m.pattern().edge_count();
    writeln!(w, "%%MatrixMarket matrix coordinate real symmetric")?;
    writeln!(w, "{} {} {}", d, d, nnz)?;
    for i in 1..=d {
        writeln!(w, "{} {} {}", i, i, format_value(m.diag(i)))?;
    }
    for (i, j, v) in m.edges() {
        // lower triangle: row >= col
        writeln!(w, "{} {} {}", j, i, format_value(v))?;
    }
    Ok(())
}

pub fn write_matrix_path(m: &SymSparseMatrix, path: &Path) -> Result<(), MarketError> {
    let f = File::create(path)?;
    write_matrix(m, BufWriter::new(f))
}

pub fn write_pattern<W: Write>(e: &SparsityPattern, mut w: W) -> Result<(), MarketError> {
    let d = e.d();
    writeln!(w, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    writeln!(w, "{} {} {}", d, d, e.edge_count())?;
    for (i, j) in e.edges() {
        writeln!(w, "{} {}", j, i)?;
    }
    Ok(())
}

pub fn write_pattern_path(e: &SparsityPattern, path: &Path) -> Result<(), MarketError> {
    let f = File::create(path)?;
    write_pattern(e, BufWriter::new(f))
}

struct Header {
    pattern: bool,
}

fn read_header(line: &str) -> Result<Header, MarketError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 5
        || !toks[0].eq_ignore_ascii_case("%%MatrixMarket")
        || !toks[1].eq_ignore_ascii_case("matrix")
        || !toks[2].eq_ignore_ascii_case("coordinate")
    {
        return Err(MarketError::UnsupportedHeader(line.to_string()));
    }
    let field = toks[3].to_ascii_lowercase();
    let sym = toks[4].to_ascii_lowercase();
    if sym != "symmetric" {
        return Err(MarketError::UnsupportedHeader(line.to_string()));
    }
    match field.as_str() {
        "real" => Ok(Header { pattern: false }),
        "pattern" => Ok(Header { pattern: true }),
        _ => Err(MarketError::UnsupportedHeader(line.to_string())),
    }
}

struct Body {
    d: usize,
    // (i, j, v) with i >= j as read; v = 1.0 for pattern files
    entries: Vec<(usize, usize, f64)>,
}

fn read_body<R: Read>(r: R, want_pattern: Option<bool>) -> Result<(Body, bool), MarketError> {
    let reader = BufReader::new(r);
    let mut lines = reader.lines().enumerate();
    let (lineno, first) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))
        .and_then(|(n, l)| Ok((n + 1, l?)))?;
    let header = read_header(&first).map_err(|e| match e {
        MarketError::UnsupportedHeader(h) => parse_err(lineno, format!("unsupported header: {h}")),
        e => e,
    })?;
    if let Some(want) = want_pattern {
        if header.pattern != want {
            return Err(MarketError::UnsupportedHeader(first));
        }
    }

    let mut dims: Option<(usize, usize, usize)> = None;
    let mut entries = Vec::new();
    for (n, line) in lines {
        let lineno = n + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if dims.is_none() {
            if toks.len() != 3 {
                return Err(parse_err(lineno, "expected 'rows cols nnz'"));
            }
            let rows: usize = toks[0].parse().map_err(|_| parse_err(lineno, "bad rows"))?;
            let cols: usize = toks[1].parse().map_err(|_| parse_err(lineno, "bad cols"))?;
            let nnz: usize = toks[2].parse().map_err(|_| parse_err(lineno, "bad nnz"))?;
            if rows != cols {
                return Err(MarketError::NotSquare { rows, cols });
            }
            dims = Some((rows, cols, nnz));
            entries.reserve(nnz);
            continue;
        }
        let want = if header.pattern { 2 } else { 3 };
        if toks.len() != want {
            return Err(parse_err(lineno, format!("expected {want} fields")));
        }
        let i: usize = toks[0].parse().map_err(|_| parse_err(lineno, "bad row index"))?;
        let j: usize = toks[1].parse().map_err(|_| parse_err(lineno, "bad col index"))?;
        let v: f64 = if header.pattern {
            1.0
        } else {
            toks[2].parse().map_err(|_| parse_err(lineno, "bad value"))?
        };
        entries.push((i, j, v));
    }
    let (d, _, nnz) = dims.ok_or_else(|| parse_err(0, "missing size line"))?;
    if entries.len() != nnz {
        return Err(parse_err(
            0,
            format!("size line promises {} entries, found {}", nnz, entries.len()),
        ));
    }
    Ok((Body { d, entries }, header.pattern))
}

pub fn read_matrix<R: Read>(r: R) -> Result<SymSparseMatrix, MarketError> {
    let (body, _) = read_body(r, Some(false))?;
    let d = body.d;
    let mut diag = vec![0.0; d];
    let mut diag_seen = vec![false; d];
    let mut off = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, j, v) in body.entries {
        if i < 1 || i > d || j < 1 || j > d {
            return Err(MarketError::OutOfRange { i, j, d });
        }
        if i == j {
            if diag_seen[i - 1] {
                return Err(MarketError::Duplicate(i, j));
            }
            diag_seen[i - 1] = true;
            diag[i - 1] = v;
        } else {
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(MarketError::Duplicate(key.0, key.1));
            }
            off.push((i, j, v));
        }
    }
    Ok(SymSparseMatrix::from_entries(d, diag, &off)?)
}

pub fn read_matrix_path(path: &Path) -> Result<SymSparseMatrix, MarketError> {
    read_matrix(File::open(path)?)
}

/// Reads a pattern file; a `real symmetric` file is also accepted, in which
/// case its nonzero off-diagonal support is taken.
pub fn read_pattern<R: Read>(r: R) -> Result<SparsityPattern, MarketError> {
    let (body, is_pattern) = read_body(r, None)?;
    let d = body.d;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, j, v) in body.entries {
        if i < 1 || i > d || j < 1 || j > d {
            return Err(MarketError::OutOfRange { i, j, d });
        }
        if i == j {
            continue; // diagonal is implicit in patterns
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            return Err(MarketError::Duplicate(key.0, key.1));
        }
        if is_pattern || v != 0.0 {
            edges.push(key);
        }
    }
    Ok(SparsityPattern::from_edges(d, &edges)?)
}

pub fn read_pattern_path(path: &Path) -> Result<SparsityPattern, MarketError> {
    read_pattern(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spmat::SymSparseMatrix;

    #[test]
    fn round_trip_preserves_bits() {
        let m = SymSparseMatrix::from_entries(
            4,
            vec![1.0, 1.0 + 1e-16, 0.3333333333333333, -2.5e-300],
            &[(1, 2, 0.1 + 0.2), (2, 3, -4.0 / 3.0), (3, 4, 1e300)],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        let back = read_matrix(&buf[..]).unwrap();
        assert_eq!(m, back);
        // serialized twice gives identical bytes
        let mut buf2 = Vec::new();
        write_matrix(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn pattern_round_trip() {
        let e = SparsityPattern::from_edges(5, &[(1, 2), (2, 5), (3, 4)]).unwrap();
        let mut buf = Vec::new();
        write_pattern(&e, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("%%MatrixMarket matrix coordinate pattern symmetric"));
        let back = read_pattern(&buf[..]).unwrap();
        assert_eq!(e, back);
    }

    #[test]
    fn rejects_duplicates_and_general_field() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 1.0\n2 1 0.5\n1 2 0.5\n";
        assert!(matches!(read_matrix(text.as_bytes()), Err(MarketError::Duplicate(1, 2))));
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n";
        assert!(read_matrix(text.as_bytes()).is_err());
    }

    #[test]
    fn pattern_reader_accepts_real_files_and_skips_diagonal() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 1.0\n2 2 1.0\n2 1 0.5\n3 2 0.0\n";
        let e = read_pattern(text.as_bytes()).unwrap();
        assert!(e.has_edge(1, 2));
        assert!(!e.has_edge(2, 3)); // explicit zero is not support
        assert_eq!(e.edge_count(), 1);
    }
}
