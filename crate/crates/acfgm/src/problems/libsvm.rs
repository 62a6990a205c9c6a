//! LIBSVM sparse text format.
//!
//! One sample per line: `label idx:val idx:val ...` with 1-based,
//! strictly increasing feature indices. Blank lines and lines starting
//! with `#` are skipped. The column count of the parsed matrix is the
//! largest feature index seen.

use super::{Dataset, ProblemError, Provenance};
use crate::linalg::{DenseVector, SparseMatrixCsr};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestMode {
    /// Labels are mapped to `{-1, +1}`: kept as-is when already binary,
    /// otherwise the larger of exactly two distinct values becomes `+1`.
    Classification,
    /// Labels are kept as raw reals.
    Regression,
}

pub fn parse_libsvm(
    reader: impl BufRead,
    mode: IngestMode,
    name: impl Into<String>,
    provenance: Provenance,
) -> Result<Dataset, ProblemError> {
    let mut labels: Vec<f64> = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut cols = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let label_token = tokens.next().expect("non-empty line has a first token");
        let label: f64 = label_token.parse().map_err(|_| ProblemError::Parse {
            line: line_no,
            message: format!("invalid label `{label_token}`"),
        })?;
        let mut row: Vec<(usize, f64)> = Vec::new();
        let mut prev_index = 0usize;
        for token in tokens {
            let (index_str, value_str) = token.split_once(':').ok_or(ProblemError::Parse {
                line: line_no,
                message: format!("expected `index:value`, found `{token}`"),
            })?;
            let index: usize = index_str.parse().map_err(|_| ProblemError::Parse {
                line: line_no,
                message: format!("invalid feature index `{index_str}`"),
            })?;
            if index == 0 {
                return Err(ProblemError::Parse {
                    line: line_no,
                    message: "feature indices are 1-based; found 0".into(),
                });
            }
            if index <= prev_index {
                return Err(ProblemError::Parse {
                    line: line_no,
                    message: format!(
                        "feature indices must be strictly increasing ({index} after {prev_index})"
                    ),
                });
            }
            let value: f64 = value_str.parse().map_err(|_| ProblemError::Parse {
                line: line_no,
                message: format!("invalid feature value `{value_str}`"),
            })?;
            if !value.is_finite() {
                return Err(ProblemError::Parse {
                    line: line_no,
                    message: format!("non-finite feature value `{value_str}`"),
                });
            }
            prev_index = index;
            cols = cols.max(index);
            row.push((index - 1, value));
        }
        labels.push(label);
        rows.push(row);
    }

    if mode == IngestMode::Classification {
        map_binary_labels(&mut labels)?;
    }
    let matrix = SparseMatrixCsr::from_row_entries(cols, &rows)?;
    let targets = DenseVector::new(labels).map_err(|_| ProblemError::InvalidData(
        "non-finite label".into(),
    ))?;
    Dataset::new(matrix, targets, name, provenance)
}

fn map_binary_labels(labels: &mut [f64]) -> Result<(), ProblemError> {
    if labels.iter().all(|&l| l == 1.0 || l == -1.0) {
        return Ok(());
    }
    let mut distinct: Vec<f64> = Vec::new();
    for &l in labels.iter() {
        if !distinct.contains(&l) {
            distinct.push(l);
        }
    }
    if distinct.len() != 2 {
        return Err(ProblemError::InvalidData(format!(
            "classification ingestion needs exactly two label values, found {}",
            distinct.len()
        )));
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite labels"));
    for l in labels.iter_mut() {
        *l = if *l == distinct[1] { 1.0 } else { -1.0 };
    }
    Ok(())
}

pub fn parse_libsvm_str(
    text: &str,
    mode: IngestMode,
    name: impl Into<String>,
) -> Result<Dataset, ProblemError> {
    parse_libsvm(text.as_bytes(), mode, name, Provenance::Seed(0))
}

pub fn load_libsvm(path: impl AsRef<Path>, mode: IngestMode) -> Result<Dataset, ProblemError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_libsvm(
        BufReader::new(file),
        mode,
        name,
        Provenance::File(path.to_path_buf()),
    )
}

/// Serialize in the same format; floats use the shortest representation
/// that parses back to the same value.
pub fn write_libsvm(dataset: &Dataset, mut writer: impl Write) -> std::io::Result<()> {
    for r in 0..dataset.rows() {
        write!(writer, "{}", dataset.targets[r])?;
        for (c, v) in dataset.matrix.row(r) {
            write!(writer, " {}:{}", c + 1, v)?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_line() {
        let d = parse_libsvm_str("+1 1:0.5 3:2.0\n", IngestMode::Classification, "t").unwrap();
        assert_eq!(d.rows(), 1);
        assert_eq!(d.cols(), 3);
        assert_eq!(d.targets[0], 1.0);
        let row: Vec<(usize, f64)> = d.matrix.row(0).collect();
        assert_eq!(row, vec![(0, 0.5), (2, 2.0)]);
    }

    #[test]
    fn parses_label_only_line() {
        let d = parse_libsvm_str("-1\n+1 1:1\n", IngestMode::Classification, "t").unwrap();
        assert_eq!(d.rows(), 2);
        assert_eq!(d.targets[0], -1.0);
        assert_eq!(d.matrix.row(0).count(), 0);
    }

    #[test]
    fn rejects_nonmonotone_indices() {
        let err = parse_libsvm_str("1 2:1 1:1\n", IngestMode::Regression, "t").unwrap_err();
        match err {
            ProblemError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_index_and_bad_tokens() {
        assert!(parse_libsvm_str("1 0:1\n", IngestMode::Regression, "t").is_err());
        assert!(parse_libsvm_str("1 1;2\n", IngestMode::Regression, "t").is_err());
        assert!(parse_libsvm_str("abc 1:1\n", IngestMode::Regression, "t").is_err());
        // error carries the offending line number
        let err =
            parse_libsvm_str("1 1:1\n\n# note\n2 x:1\n", IngestMode::Regression, "t").unwrap_err();
        match err {
            ProblemError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn skips_blanks_and_comments() {
        let text = "# header\n\n+1 1:1.0\n\n# tail\n-1 2:0.25\n";
        let d = parse_libsvm_str(text, IngestMode::Classification, "t").unwrap();
        assert_eq!(d.rows(), 2);
        assert_eq!(d.cols(), 2);
    }

    #[test]
    fn maps_nonstandard_binary_labels() {
        let d = parse_libsvm_str("0 1:1\n1 1:2\n0 1:3\n", IngestMode::Classification, "t")
            .unwrap();
        assert_eq!(d.targets.as_slice(), &[-1.0, 1.0, -1.0]);
        assert!(d.has_binary_labels());
    }

    #[test]
    fn regression_mode_keeps_raw_labels() {
        let d = parse_libsvm_str("3.25 1:1\n-0.5 1:2\n", IngestMode::Regression, "t").unwrap();
        assert_eq!(d.targets.as_slice(), &[3.25, -0.5]);
    }

    #[test]
    fn rejects_more_than_two_classes() {
        assert!(
            parse_libsvm_str("0 1:1\n1 1:2\n2 1:3\n", IngestMode::Classification, "t").is_err()
        );
    }

    #[test]
    fn parse_write_parse_is_idempotent() {
        let text = "+1 1:0.5 3:2.0\n-1 2:-0.125\n+1 1:1e-3 2:7 3:0.3333333333333333\n";
        let first = parse_libsvm_str(text, IngestMode::Classification, "t").unwrap();
        let mut buf = Vec::new();
        write_libsvm(&first, &mut buf).unwrap();
        let second = parse_libsvm_str(
            std::str::from_utf8(&buf).unwrap(),
            IngestMode::Classification,
            "t",
        )
        .unwrap();
        assert_eq!(first.matrix, second.matrix);
        assert_eq!(first.targets, second.targets);
    }
}
