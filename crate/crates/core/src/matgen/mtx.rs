//! Matrix Market reading and writing (real general, coordinate or array).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let file = File::open(path)?;
    parse_matrix_market(BufReader::new(file), path)
}

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

/// Parses Matrix Market text. `source` only labels error messages.
pub fn parse_matrix_market<R: BufRead>(reader: R, source: impl AsRef<Path>) -> Result<DenseMatrix> {
    let source: PathBuf = source.as_ref().to_path_buf();
    let err = |line: usize, message: String| Error::Parse {
        path: source.clone(),
        line,
        message,
    };

    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (ln, banner) = match lines.next() {
        Some((ln, l)) => (ln, l?),
        None => return Err(err(1, "empty file".into())),
    };
    let tokens: Vec<String> = banner.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(ln, format!("malformed header {banner:?}")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(err(ln, format!("unsupported format {other:?}"))),
    };
    if tokens[3] != "real" {
        return Err(err(ln, format!("unsupported field {:?}; only real is accepted", tokens[3])));
    }
    if tokens[4] != "general" {
        return Err(err(ln, format!("unsupported symmetry {:?}; only general is accepted", tokens[4])));
    }

    // Remaining non-blank, non-comment lines.
    let mut body = lines.filter_map(|(ln, l)| match l {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((ln, t.to_string())))
            }
        }
        Err(e) => Some(Err(e)),
    });

    let (size_ln, size_line) = match body.next() {
        Some(r) => r?,
        None => return Err(err(ln, "missing size line".into())),
    };
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(size_ln, format!("bad size line: {e}")))?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if sizes.len() != expected {
        return Err(err(size_ln, format!("size line needs {expected} integers")));
    }
    let (m, n) = (sizes[0], sizes[1]);
    let count = if layout == Layout::Coordinate { sizes[2] } else { m * n };
    let mut a = DenseMatrix::zeros(m, n);
    let data = a.data_mut();

    let parse_value = |ln: usize, t: &str| -> Result<f64> {
        let v: f64 = t.parse().map_err(|_| err(ln, format!("bad value {t:?}")))?;
        if !v.is_finite() {
            return Err(err(ln, format!("non-finite value {t:?}")));
        }
        Ok(v)
    };

    let mut last_ln = size_ln;
    for entry in 0..count {
        let (ln, line) = match body.next() {
            Some(r) => r?,
            None => {
                return Err(err(
                    last_ln,
                    format!("expected {count} entries, found {entry}"),
                ))
            }
        };
        last_ln = ln;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match layout {
            Layout::Coordinate => {
                if fields.len() != 3 {
                    return Err(err(ln, format!("expected `row col value`, got {line:?}")));
                }
                let idx = |t: &str, bound: usize, what: &str| -> Result<usize> {
                    let i: usize = t.parse().map_err(|_| err(ln, format!("bad {what} index {t:?}")))?;
                    if i == 0 || i > bound {
                        return Err(err(ln, format!("{what} index {i} out of range 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                let i = idx(fields[0], m, "row")?;
                let j = idx(fields[1], n, "column")?;
                data[i + j * m] += parse_value(ln, fields[2])?;
            }
            Layout::Array => {
                if fields.len() != 1 {
                    return Err(err(ln, format!("expected one value, got {line:?}")));
                }
                data[entry] = parse_value(ln, fields[0])?;
            }
        }
    }
    if let Some(extra) = body.next() {
        let (ln, _) = extra?;
        return Err(err(ln, format!("more than the declared {count} entries")));
    }
    Ok(a)
}

/// Writes `a` in coordinate real general format, listing nonzeros only.
/// Values use Rust's shortest round-trip formatting, so reading the file
/// back reproduces `a` exactly.
pub fn write_matrix_market(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let (m, n) = a.shape();
    let nnz = a.data().iter().filter(|&&x| x != 0.0).count();
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{m} {n} {nnz}")?;
    for j in 0..n {
        for (i, &x) in a.col(j).iter().enumerate() {
            if x != 0.0 {
                writeln!(w, "{} {} {:e}", i + 1, j + 1, x)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Row-major CSV without a header.
pub fn write_csv_dump(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for i in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|j| format!("{}", a[(i, j)])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}
