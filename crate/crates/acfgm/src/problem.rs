//! The composite problem abstraction consumed by every solver.

use crate::linalg::DenseVector;
use crate::prox::ProxTerm;

/// First-order oracle output: objective value and one (sub)gradient.
pub type OracleOutput = (f64, DenseVector);

/// A convex composite objective `f + h`, with `f` given by a first-order
/// oracle and `h` a [`ProxTerm`].
///
/// The oracle must be deterministic (identical inputs produce identical
/// outputs) and return a gradient of the problem dimension. Problems are
/// immutable after construction and can be shared across concurrent runs.
pub struct CompositeProblem {
    smooth: Box<dyn Fn(&DenseVector) -> OracleOutput + Send + Sync>,
    prox_term: ProxTerm,
    dimension: usize,
}

impl CompositeProblem {
    pub fn new(
        dimension: usize,
        prox_term: ProxTerm,
        smooth: impl Fn(&DenseVector) -> OracleOutput + Send + Sync + 'static,
    ) -> Self {
        Self {
            smooth: Box::new(smooth),
            prox_term,
            dimension,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn prox_term(&self) -> &ProxTerm {
        &self.prox_term
    }

    /// One call to the first-order oracle. Callers that account oracle
    /// calls count invocations of this method.
    pub fn eval(&self, x: &DenseVector) -> OracleOutput {
        (self.smooth)(x)
    }

    /// Full objective `f(x) + h(x)`. Not an accounted oracle call path;
    /// used for reporting and tests.
    pub fn objective(&self, x: &DenseVector) -> f64 {
        let (f, _) = self.eval(x);
        f + self.prox_term.evaluate(x)
    }

    /// `h`-value of the objective at `x`.
    pub fn prox_value(&self, x: &DenseVector) -> f64 {
        self.prox_term.evaluate(x)
    }
}

impl std::fmt::Debug for CompositeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompositeProblem")
            .field("dimension", &self.dimension)
            .field("prox_term", &self.prox_term)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_is_deterministic() {
        let p = CompositeProblem::new(2, ProxTerm::Zero, |x| {
            (0.5 * x.norm_sq(), x.clone())
        });
        let x = DenseVector::new(vec![1.5, -2.0]).unwrap();
        let (f1, g1) = p.eval(&x);
        let (f2, g2) = p.eval(&x);
        assert_eq!(f1, f2);
        assert_eq!(g1, g2);
        assert_eq!(g1.len(), p.dimension());
    }

    #[test]
    fn objective_adds_prox_term() {
        let p = CompositeProblem::new(1, ProxTerm::l1(2.0).unwrap(), |x| {
            (x[0] * x[0], DenseVector::new(vec![2.0 * x[0]]).unwrap())
        });
        let x = DenseVector::new(vec![-3.0]).unwrap();
        assert_eq!(p.objective(&x), 9.0 + 6.0);
    }
}
