//! Prox-friendly regularizers and the prox-mapping step shared by all solvers.

use crate::linalg::{DenseVector, LinalgError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProxError {
    #[error("invalid prox parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The simple term `h` of the composite objective `f + h`.
///
/// Only the three kinds needed by the benchmark problems are supported.
/// `BallIndicator` evaluates to `f64::INFINITY` outside the ball so that
/// the full objective stays well defined in traces; iterates produced by
/// [`prox_step`] are always feasible.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxTerm {
    /// `h = 0`.
    Zero,
    /// `h(x) = lambda * ||x||_1`.
    L1 { lambda: f64 },
    /// Indicator of the Euclidean ball of the given radius.
    BallIndicator { radius: f64 },
}

impl ProxTerm {
    pub fn l1(lambda: f64) -> Result<Self, ProxError> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(ProxError::InvalidParameter(format!(
                "l1 weight must be finite and nonnegative, got {lambda}"
            )));
        }
        Ok(Self::L1 { lambda })
    }

    pub fn ball(radius: f64) -> Result<Self, ProxError> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(ProxError::InvalidParameter(format!(
                "ball radius must be finite and positive, got {radius}"
            )));
        }
        Ok(Self::BallIndicator { radius })
    }

    /// Evaluate `h(x)`; `+inf` for points outside an indicator's domain.
    pub fn evaluate(&self, x: &DenseVector) -> f64 {
        match *self {
            ProxTerm::Zero => 0.0,
            ProxTerm::L1 { lambda } => lambda * x.iter().map(|v| v.abs()).sum::<f64>(),
            ProxTerm::BallIndicator { radius } => {
                // Tiny slack so that points produced by the projection
                // itself are never reported infeasible due to rounding.
                if x.norm() <= radius * (1.0 + 1e-12) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// Solve `argmin_z { eta * [<slope, z> + h(z)] + 1/2 ||center - z||^2 }`.
///
/// Closed forms: a plain gradient step for `Zero`, componentwise
/// soft-thresholding at level `eta * lambda` for `L1` (ties map to zero),
/// and Euclidean ball projection for `BallIndicator`.
pub fn prox_step(
    term: &ProxTerm,
    center: &DenseVector,
    slope: &DenseVector,
    eta: f64,
) -> Result<DenseVector, ProxError> {
    if !(eta > 0.0) {
        return Err(ProxError::InvalidParameter(format!(
            "prox stepsize must be positive, got {eta}"
        )));
    }
    if center.len() != slope.len() {
        return Err(ProxError::Linalg(LinalgError::DimensionMismatch {
            expected: center.len(),
            found: slope.len(),
        }));
    }
    let v = DenseVector::combined(1.0, center, -eta, slope);
    let z = match *term {
        ProxTerm::Zero => v,
        ProxTerm::L1 { lambda } => {
            let level = eta * lambda;
            DenseVector::from_fn(v.len(), |i| soft_threshold(v[i], level))?
        }
        ProxTerm::BallIndicator { radius } => {
            let norm = v.norm();
            if norm > radius {
                v.scaled(radius / norm)
            } else {
                v
            }
        }
    };
    Ok(z)
}

#[inline]
fn soft_threshold(v: f64, level: f64) -> f64 {
    if v > level {
        v - level
    } else if v < -level {
        v + level
    } else {
        0.0
    }
}
