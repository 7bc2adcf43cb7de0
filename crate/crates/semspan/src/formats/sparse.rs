//! Sparse matrices as text triplets.
//!
//! ```text
//! %semspan-sparse 1
//! %rows 3 cols 5 tokenizer 9f86d0...
//! 0 1 2
//! 2 4 1
//! ```
//!
//! One `row col value` line per stored entry, rows ascending. Row labels go
//! to a sidecar file next to the matrix (`<path>.rows.txt`), one
//! `id<TAB>community` line per row.

use std::fmt::Display;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use semspan_core::text::RowLabel;
use semspan_core::CsrMatrix;

use crate::error::{Error, Result};

const MAGIC: &str = "%semspan-sparse 1";

pub fn rows_sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".rows.txt");
    PathBuf::from(s)
}

/// Writes the matrix and its row sidecar. `tokenizer_hash` identifies the
/// tokenizer configuration that produced the columns.
pub fn write_sparse<T>(matrix: &CsrMatrix<T>, rows: &[RowLabel], tokenizer_hash: &str, path: &Path) -> Result<()>
where
    T: Copy + PartialEq + Default + Display,
{
    if rows.len() != matrix.n_rows() {
        return Err(Error::Invariant(format!("{} row labels for {} rows", rows.len(), matrix.n_rows())));
    }
    for r in rows {
        if r.id.contains(['\t', '\n', '\r']) || r.community.contains(['\t', '\n', '\r']) {
            return Err(Error::Data(format!("row label {:?} contains a tab or line break", r.id)));
        }
    }
    crate::write_atomic(path, |f| {
        let mut w = BufWriter::new(f);
        writeln!(w, "{MAGIC}")?;
        writeln!(w, "%rows {} cols {} tokenizer {tokenizer_hash}", matrix.n_rows(), matrix.n_cols())?;
        for (i, j, v) in matrix.triplets() {
            writeln!(w, "{i} {j} {v}")?;
        }
        w.flush()
    })?;
    crate::write_atomic(&rows_sidecar(path), |f| {
        let mut w = BufWriter::new(f);
        for r in rows {
            writeln!(w, "{}\t{}", r.id, r.community)?;
        }
        w.flush()
    })
}

pub struct SparseFile<T> {
    pub matrix: CsrMatrix<T>,
    pub rows: Vec<RowLabel>,
    pub tokenizer_hash: String,
}

pub fn read_sparse<T>(path: &Path) -> Result<SparseFile<T>>
where
    T: Copy + PartialEq + Default + FromStr,
{
    let text = crate::read_string(path)?;
    let bad = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(bad(1, format!("expected {MAGIC:?}"))),
    }
    let (n_rows, n_cols, tokenizer_hash) = match lines.next() {
        Some((_, l)) => {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["%rows", r, "cols", c, "tokenizer", h] => (
                    r.parse::<usize>().map_err(|e| bad(2, e.to_string()))?,
                    c.parse::<usize>().map_err(|e| bad(2, e.to_string()))?,
                    h.to_string(),
                ),
                _ => return Err(bad(2, "expected \"%rows N cols V tokenizer HASH\"".into())),
            }
        }
        None => return Err(bad(2, "missing header".into())),
    };
    let mut triplets = Vec::new();
    for (no, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [i, j, v] = parts.as_slice() else {
            return Err(bad(no, "expected \"row col value\"".into()));
        };
        let i: usize = i.parse().map_err(|_| bad(no, "bad row index".into()))?;
        let j: usize = j.parse().map_err(|_| bad(no, "bad column index".into()))?;
        let v: T = v.parse().map_err(|_| bad(no, "bad value".into()))?;
        triplets.push((i, j, v));
    }
    let matrix = CsrMatrix::from_triplets(n_rows, n_cols, &triplets)
        .ok_or_else(|| Error::format(path, "entries out of range, repeated, or out of order"))?;

    let sidecar = rows_sidecar(path);
    let rows: Vec<RowLabel> = crate::read_string(&sidecar)?
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (id, community) = l.split_once('\t').unwrap_or((l, ""));
            RowLabel {
                id: id.into(),
                community: community.into(),
            }
        })
        .collect();
    if rows.len() != n_rows {
        return Err(Error::format(sidecar, format!("{} labels for {n_rows} rows", rows.len())));
    }
    Ok(SparseFile {
        matrix,
        rows,
        tokenizer_hash,
    })
}
