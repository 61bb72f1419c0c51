//! Matrix and tree file formats.
//!
//! Matrices are stored either as JSON, `{"dim": N, "entries": [[re, im], ...]}`
//! with `N*N` entries in row-major order, or as CSV with `N` rows of `2N`
//! columns holding interleaved real and imaginary parts.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{CMatrix, HermitianMatrix};
use crate::tolerance::Tolerances;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

fn json_error(e: serde_json::Error) -> WalkError {
    WalkError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<HermitianMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(json_error)?;
    let n = file.dim;
    if n == 0 {
        return Err(WalkError::Empty);
    }
    if file.entries.len() != n * n {
        return Err(WalkError::Parse {
            line: 1,
            column: 1,
            message: format!("expected {} entries for dim {n}, found {}", n * n, file.entries.len()),
        });
    }
    let m = CMatrix::from_fn(n, n, |j, k| {
        let [re, im] = file.entries[j * n + k];
        Complex64::new(re, im)
    });
    HermitianMatrix::with_tolerance(m, Tolerances::DEFAULT.parse_hermiticity)
}

pub fn parse_matrix_csv(text: &str) -> Result<HermitianMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(row_idx + 1, |p| p.line() as usize);
            WalkError::Parse {
                line,
                column: 1,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(row_idx + 1, |p| p.line() as usize);
        if record.len() % 2 != 0 {
            return Err(WalkError::Parse {
                line,
                column: record.len(),
                message: "odd number of columns; expected re,im pairs".into(),
            });
        }
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            let x: f64 = field.parse().map_err(|_| WalkError::Parse {
                line,
                column: col + 1,
                message: format!("not a number: {field:?}"),
            })?;
            values.push(x);
        }
        rows.push(values.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
    }
    let n = rows.len();
    if n == 0 {
        return Err(WalkError::Empty);
    }
    if let Some((j, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(WalkError::Parse {
            line: j + 1,
            column: 2 * r.len(),
            message: format!("row has {} complex entries, expected {n}", r.len()),
        });
    }
    let m = CMatrix::from_fn(n, n, |j, k| rows[j][k]);
    HermitianMatrix::with_tolerance(m, Tolerances::DEFAULT.parse_hermiticity)
}

/// Reads a matrix, choosing the format from the file extension
/// (`.csv` for CSV, anything else JSON).
pub fn read_matrix(path: &Path) -> Result<HermitianMatrix> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => parse_matrix_csv(&text),
        _ => parse_matrix_json(&text),
    }
}

pub fn matrix_to_json(h: &HermitianMatrix) -> String {
    let n = h.dim();
    let entries = h.matrix().transpose().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&MatrixFile { dim: n, entries }).expect("matrix serializes")
}

pub fn matrix_to_csv(h: &HermitianMatrix) -> String {
    let n = h.dim();
    let mut out = String::new();
    for j in 0..n {
        let row: Vec<String> = (0..n)
            .flat_map(|k| {
                let z = h[(j, k)];
                [z.re.to_string(), z.im.to_string()]
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// On-disk tree: `parent[root]` is `-1` (or the root itself) and
/// `weights[c]` is the entry `H[c][parent(c)]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeFile {
    pub n: usize,
    pub root: usize,
    pub parent: Vec<i64>,
    pub weights: Vec<[f64; 2]>,
}

pub fn parse_tree_json(text: &str) -> Result<TreeFile> {
    serde_json::from_str(text).map_err(json_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, -2.0),
                Complex64::new(0.5, 2.0),
                Complex64::new(-3.0, 0.0),
            ],
        );
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(parse_matrix_json(&matrix_to_json(&h)).unwrap(), h);
        assert_eq!(parse_matrix_csv(&matrix_to_csv(&h)).unwrap(), h);
    }

    #[test]
    fn json_errors_carry_position() {
        let err = parse_matrix_json("{\"dim\": 2,\n \"entries\": [[1, 0], oops]}").unwrap_err();
        match err {
            WalkError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_matrix_json(r#"{"dim": 2, "entries": [[1,0]]}"#).unwrap_err();
        assert!(matches!(err, WalkError::Parse { .. }));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let text = r#"{"dim": 2, "entries": [[0,0],[1,0],[1.001,0],[0,0]]}"#;
        assert!(matches!(
            parse_matrix_json(text),
            Err(WalkError::NotHermitian { .. })
        ));
        // asymmetry below 1e-9 is accepted and symmetrized
        let text = r#"{"dim": 2, "entries": [[0,0],[1,0],[1.0000000000001,0],[0,0]]}"#;
        let h = parse_matrix_json(text).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }

    #[test]
    fn csv_errors_carry_position() {
        match parse_matrix_csv("0,0,1,0\n1,0,x,0\n") {
            Err(WalkError::Parse { line, column, .. }) => {
                assert_eq!((line, column), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_matrix_csv("0,0,1\n"),
            Err(WalkError::Parse { .. })
        ));
    }
}
