//! Matrix Market and dense JSON exchange.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, DenseJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(format!("line {line}: {}", msg.into()))
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let t = tok.ok_or_else(|| parse_err(line, "missing value"))?;
    t.parse::<f64>()
        .map_err(|_| parse_err(line, format!("bad number `{t}`")))
}

fn parse_index(tok: Option<&str>, bound: usize, line: usize) -> Result<usize> {
    let t = tok.ok_or_else(|| parse_err(line, "missing index"))?;
    let i: usize = t
        .parse()
        .map_err(|_| parse_err(line, format!("bad index `{t}`")))?;
    if i == 0 || i > bound {
        return Err(parse_err(line, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

/// Parses `coordinate` or `array` Matrix Market text with any field and
/// symmetry.
pub fn parse_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let head: Vec<String> = banner
        .split_whitespace()
        .map(|s| s.to_ascii_lowercase())
        .collect();
    if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(parse_err(
            1,
            "expected `%%MatrixMarket matrix <format> <field> <symmetry>`",
        ));
    }
    let coordinate = match head[2].as_str() {
        "coordinate" => true,
        "array" => false,
        f => return Err(parse_err(1, format!("unsupported format `{f}`"))),
    };
    let field = match head[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        f => return Err(parse_err(1, format!("unsupported field `{f}`"))),
    };
    let symmetry = match head[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        s => return Err(parse_err(1, format!("unsupported symmetry `{s}`"))),
    };
    if field == Field::Pattern && !coordinate {
        return Err(parse_err(1, "pattern field requires coordinate format"));
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_no, size_line) = body
        .next()
        .ok_or_else(|| Error::Parse("missing size line".into()))?;
    let size: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(size_no + 1, format!("bad size `{t}`")))
        })
        .collect::<Result<_>>()?;
    let (rows, cols) = match (coordinate, size.as_slice()) {
        (true, [r, c, _]) | (false, [r, c]) => (*r, *c),
        _ => return Err(parse_err(size_no + 1, "wrong number of size fields")),
    };
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(
            size_no + 1,
            "symmetric storage requires a square matrix",
        ));
    }

    let mut m = ComplexMatrix::zeros(rows, cols);
    let read_value = |toks: &mut std::str::SplitWhitespace, line: usize| -> Result<c64> {
        Ok(match field {
            Field::Pattern => c64::new(1.0, 0.0),
            Field::Real | Field::Integer => c64::new(parse_f64(toks.next(), line)?, 0.0),
            Field::Complex => {
                c64::new(parse_f64(toks.next(), line)?, parse_f64(toks.next(), line)?)
            }
        })
    };
    let mirror = |v: c64| match symmetry {
        Symmetry::General => None,
        Symmetry::Symmetric => Some(v),
        Symmetry::SkewSymmetric => Some(-v),
        Symmetry::Hermitian => Some(v.conj()),
    };

    if coordinate {
        let nnz = size[2];
        let mut seen = 0;
        for (no, l) in body {
            let line = no + 1;
            if seen == nnz {
                return Err(parse_err(line, "more entries than declared"));
            }
            let mut toks = l.split_whitespace();
            let i = parse_index(toks.next(), rows, line)?;
            let j = parse_index(toks.next(), cols, line)?;
            let v = read_value(&mut toks, line)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            m[(i, j)] += v;
            if i != j {
                if let Some(w) = mirror(v) {
                    m[(j, i)] += w;
                }
            }
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::Parse(format!(
                "declared {nnz} entries, found {seen}"
            )));
        }
    } else {
        // column-major; symmetric kinds store the lower triangle only
        let mut cells = Vec::new();
        for j in 0..cols {
            let start = match symmetry {
                Symmetry::General => 0,
                Symmetry::SkewSymmetric => j + 1,
                _ => j,
            };
            cells.extend((start..rows).map(|i| (i, j)));
        }
        let mut cells = cells.into_iter();
        for (no, l) in body {
            let line = no + 1;
            let (i, j) = cells
                .next()
                .ok_or_else(|| parse_err(line, "more entries than the size allows"))?;
            let mut toks = l.split_whitespace();
            let v = read_value(&mut toks, line)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            m[(i, j)] = v;
            if i != j {
                if let Some(w) = mirror(v) {
                    m[(j, i)] = w;
                }
            }
        }
        if cells.next().is_some() {
            return Err(Error::Parse("array data ended early".into()));
        }
    }
    Ok(m)
}

/// `coordinate complex general` text listing every nonzero entry in
/// row-major order with round-trip precision.
pub fn to_matrix_market(m: &ComplexMatrix) -> String {
    let mut entries = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                entries.push(format!("{} {} {:.17e} {:.17e}", i + 1, j + 1, z.re, z.im));
            }
        }
    }
    let mut s = String::from("%%MatrixMarket matrix coordinate complex general\n");
    s.push_str(&format!("{} {} {}\n", m.rows(), m.cols(), entries.len()));
    for e in entries {
        s.push_str(&e);
        s.push('\n');
    }
    s
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn write_matrix_market(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, to_matrix_market(m))?;
    Ok(())
}

/// Reads `.json` as dense JSON and anything else as Matrix Market.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        let dense: DenseJson = serde_json::from_str(&fs::read_to_string(path)?)?;
        ComplexMatrix::try_from(dense)
    } else {
        read_matrix_market(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_array_expands() {
        let text = "%%MatrixMarket matrix array real symmetric\n% c\n2 2\n1\n2\n3\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(
            m,
            ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]])
        );
    }

    #[test]
    fn hermitian_coordinate_conjugates() {
        let text = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 1 0\n2 1 0 1\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m[(0, 1)], c64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], c64::new(0.0, 1.0));
    }

    #[test]
    fn entry_count_mismatch_rejected() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n";
        assert!(matches!(parse_matrix_market(text), Err(Error::Parse(_))));
    }
}
