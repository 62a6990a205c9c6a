//! Benchmark problem oracles and data handling: least squares / QP,
//! lasso, square-root lasso, sparse logistic regression, seeded instance
//! generation, LIBSVM ingestion and penalty calculators.

pub mod generate;
pub mod libsvm;
pub mod oracles;
pub mod penalty;
pub mod spectral;
pub mod stats;

pub use generate::random_qp_instance;
pub use libsvm::{load_libsvm, parse_libsvm, write_libsvm, IngestMode};
pub use oracles::{lasso, least_squares, least_squares_lipschitz, logistic,
    logistic_lipschitz_upper, sqrt_lasso};
pub use penalty::{resolve_penalty, PenaltyFamily, PenaltySpec};

use crate::linalg::{DenseVector, LinalgError, SparseMatrixCsr};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid dataset: {0}")]
    InvalidData(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    File(PathBuf),
    Seed(u64),
}

/// A design matrix with its target vector.
///
/// `planted_solution` is populated by the synthetic generators that build
/// `targets` from a known point, making the optimal objective exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub matrix: SparseMatrixCsr,
    pub targets: DenseVector,
    pub name: String,
    pub provenance: Provenance,
    pub planted_solution: Option<DenseVector>,
}

impl Dataset {
    pub fn new(
        matrix: SparseMatrixCsr,
        targets: DenseVector,
        name: impl Into<String>,
        provenance: Provenance,
    ) -> Result<Self, ProblemError> {
        if matrix.rows() != targets.len() {
            return Err(ProblemError::InvalidData(format!(
                "matrix has {} rows but {} targets",
                matrix.rows(),
                targets.len()
            )));
        }
        Ok(Self {
            matrix,
            targets,
            name: name.into(),
            provenance,
            planted_solution: None,
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `||A^T b||_inf`, the scale penalty calculators normalize against.
    pub fn gram_target_inf_norm(&self) -> f64 {
        self.matrix
            .matvec_t(&self.targets)
            .expect("dimensions checked at construction")
            .iter()
            .fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Whether every target is a valid binary label.
    pub fn has_binary_labels(&self) -> bool {
        self.targets.iter().all(|&b| b == 1.0 || b == -1.0)
    }

    /// `A x`.
    pub fn product(&self, x: &DenseVector) -> DenseVector {
        self.matrix
            .matvec(x)
            .expect("dimensions checked at construction")
    }

    /// `A x - b`.
    pub fn residual(&self, x: &DenseVector) -> DenseVector {
        DenseVector::combined(1.0, &self.product(x), -1.0, &self.targets)
    }

    /// `A^T v`.
    pub fn transpose_product(&self, v: &DenseVector) -> DenseVector {
        self.matrix
            .matvec_t(v)
            .expect("dimensions checked at construction")
    }
}
