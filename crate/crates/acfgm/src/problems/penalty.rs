//! Penalty parameter calculators.

use super::{stats, Dataset, ProblemError};

/// How a regularization weight is derived from the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenaltyFamily {
    /// `lambda = (c / m) ||A^T b||_inf`.
    LassoFrac { c: f64 },
    /// `lambda = c m^{-1/2} Phi^{-1}(1 - 0.01/n)` with `Phi` the standard
    /// normal CDF.
    SqrtLassoQuantile { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltySpec {
    pub family: PenaltyFamily,
    pub lambda: f64,
}

pub fn resolve_penalty(
    family: PenaltyFamily,
    data: &Dataset,
) -> Result<PenaltySpec, ProblemError> {
    let lambda = match family {
        PenaltyFamily::LassoFrac { c } => {
            if !(c > 0.0) {
                return Err(ProblemError::Config(format!(
                    "penalty fraction must be positive, got {c}"
                )));
            }
            c / data.rows() as f64 * data.gram_target_inf_norm()
        }
        PenaltyFamily::SqrtLassoQuantile { c } => {
            if !(c > 0.0) {
                return Err(ProblemError::Config(format!(
                    "penalty scale must be positive, got {c}"
                )));
            }
            let n = data.cols();
            if n == 0 {
                return Err(ProblemError::Config(
                    "quantile penalty needs at least one feature".into(),
                ));
            }
            // Phi^{-1}(1 - q) = -Phi^{-1}(q); evaluating at the small tail
            // keeps full precision for large n
            let quantile = -stats::standard_normal_quantile(0.01 / n as f64);
            c / (data.rows() as f64).sqrt() * quantile
        }
    };
    Ok(PenaltySpec { family, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseVector, SparseMatrixCsr};
    use crate::problems::Provenance;

    #[test]
    fn lasso_fraction_arithmetic() {
        // ||A^T b||_inf = 50 with m = 100, c = 0.01 -> lambda = 0.005
        let mut entries = vec![0.0; 100];
        entries[0] = 50.0;
        let matrix = SparseMatrixCsr::from_dense(100, 1, &entries).unwrap();
        let mut b = vec![0.0; 100];
        b[0] = 1.0;
        let data = Dataset::new(
            matrix,
            DenseVector::new(b).unwrap(),
            "t",
            Provenance::Seed(0),
        )
        .unwrap();
        let spec = resolve_penalty(PenaltyFamily::LassoFrac { c: 0.01 }, &data).unwrap();
        assert!((spec.lambda - 0.005).abs() < 1e-15);
    }

    #[test]
    fn quantile_penalty_uses_upper_tail() {
        let matrix = SparseMatrixCsr::from_dense(4, 2, &[1.0; 8]).unwrap();
        let data = Dataset::new(
            matrix,
            DenseVector::new(vec![1.0; 4]).unwrap(),
            "t",
            Provenance::Seed(0),
        )
        .unwrap();
        let spec = resolve_penalty(PenaltyFamily::SqrtLassoQuantile { c: 10.0 }, &data).unwrap();
        // Phi^{-1}(1 - 0.005) ~ 2.575829
        let expected = 10.0 / 2.0 * 2.575_829_303_548_901;
        assert!((spec.lambda - expected).abs() < 1e-6);
    }

    #[test]
    fn rejects_nonpositive_scale() {
        let matrix = SparseMatrixCsr::from_dense(1, 1, &[1.0]).unwrap();
        let data = Dataset::new(
            matrix,
            DenseVector::new(vec![1.0]).unwrap(),
            "t",
            Provenance::Seed(0),
        )
        .unwrap();
        assert!(resolve_penalty(PenaltyFamily::LassoFrac { c: 0.0 }, &data).is_err());
        assert!(resolve_penalty(PenaltyFamily::SqrtLassoQuantile { c: -1.0 }, &data).is_err());
    }
}
