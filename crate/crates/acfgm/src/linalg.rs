//! Dense vectors and CSR sparse matrices.
//!
//! These are deliberately minimal: the solvers only need dot products,
//! norms, affine combinations and matrix-vector products. Everything is
//! `f64`; construction rejects non-finite entries so NaN/Inf can only
//! enter a run through an oracle, where the solvers check for it.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
    #[error("invalid matrix structure: {0}")]
    InvalidStructure(String),
}

/// Owned dense vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, LinalgError> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                context: "vector construction",
            });
        }
        Ok(Self(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Result<Self, LinalgError> {
        Self::new((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist_sq(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dist_sq: length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|a| c * a).collect())
    }

    /// `a*x + b*y` as a new vector.
    pub fn combined(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        assert_eq!(x.len(), y.len(), "combined: length mismatch");
        Self(
            x.0.iter()
                .zip(&y.0)
                .map(|(xi, yi)| a * xi + b * yi)
                .collect(),
        )
    }

    /// `self += c*v` in place.
    pub fn add_scaled(&mut self, c: f64, v: &Self) {
        assert_eq!(self.len(), v.len(), "add_scaled: length mismatch");
        for (s, vi) in self.0.iter_mut().zip(&v.0) {
            *s += c * vi;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::combined(1.0, self, -1.0, other)
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a DenseVector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Sparse matrix in compressed sparse row format.
///
/// Structural invariants are checked once at construction: `row_ptr` is
/// nondecreasing with `row_ptr[0] == 0` and `row_ptr[rows] == nnz`, column
/// indices are in range and strictly increasing within each row, and all
/// values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrixCsr {
    pub fn new(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self, LinalgError> {
        if row_ptr.len() != rows + 1 {
            return Err(LinalgError::InvalidStructure(format!(
                "row_ptr length {} != rows + 1 = {}",
                row_ptr.len(),
                rows + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(LinalgError::InvalidStructure("row_ptr[0] != 0".into()));
        }
        if row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(LinalgError::InvalidStructure(
                "row_ptr not nondecreasing".into(),
            ));
        }
        let nnz = row_ptr[rows];
        if col_idx.len() != nnz || values.len() != nnz {
            return Err(LinalgError::InvalidStructure(format!(
                "nnz mismatch: row_ptr says {nnz}, col_idx has {}, values has {}",
                col_idx.len(),
                values.len()
            )));
        }
        for r in 0..rows {
            let row = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            if row.iter().any(|&c| c >= cols) {
                return Err(LinalgError::InvalidStructure(format!(
                    "column index out of range in row {r}"
                )));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(LinalgError::InvalidStructure(format!(
                    "column indices not strictly increasing in row {r}"
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                context: "matrix values",
            });
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Build from per-row `(column, value)` entries, already sorted by column.
    pub fn from_row_entries(
        cols: usize,
        rows: &[Vec<(usize, f64)>],
    ) -> Result<Self, LinalgError> {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for &(c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self::new(rows.len(), cols, row_ptr, col_idx, values)
    }

    /// Build from a dense row-major buffer, keeping every entry (including
    /// zeros) so the layout is reproducible.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        let row_ptr = (0..=rows).map(|r| r * cols).collect();
        let col_idx = (0..rows).flat_map(|_| 0..cols).collect();
        Self::new(rows, cols, row_ptr, col_idx, data.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .zip(&self.values[span])
            .map(|(&c, &v)| (c, v))
    }

    /// `A x`.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let xs = x.as_slice();
        let mut out = vec![0.0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0.0;
            for (c, v) in self.row(r) {
                acc += v * xs[c];
            }
            out[r] = acc;
        }
        Ok(DenseVector(out))
    }

    /// `A^T v`.
    pub fn matvec_t(&self, v: &DenseVector) -> Result<DenseVector, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let vs = v.as_slice();
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            let vr = vs[r];
            if vr == 0.0 {
                continue;
            }
            for (c, val) in self.row(r) {
                out[c] += val * vr;
            }
        }
        Ok(DenseVector(out))
    }
}
