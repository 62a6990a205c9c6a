//! Seeded synthetic instances.
//!
//! Reproducibility contract: all randomness comes from a ChaCha8 stream
//! keyed by the 64-bit seed, drawn in a fixed order (solution direction,
//! then its radius, then matrix entries row-major). Identical seeds give
//! byte-identical datasets on every platform.

use super::{Dataset, Provenance};
use crate::linalg::{DenseVector, SparseMatrixCsr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Random least-squares instance: a planted solution drawn uniformly
/// from the unit Euclidean ball, a design matrix with entries uniform in
/// `[0, 1)`, and targets `b = A x*`, so the optimal objective is exactly
/// zero.
///
/// The targets are produced by the same matrix-vector code the oracles
/// use, which makes the residual at the planted solution exactly zero in
/// floating point, not just analytically.
pub fn random_qp_instance(m: usize, n: usize, seed: u64) -> Dataset {
    assert!(m >= 1 && n >= 1, "instance must have at least one row and column");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let direction = DenseVector::from_fn(n, |_| rng.sample::<f64, _>(StandardNormal))
        .expect("finite normal draws");
    let norm = direction.norm();
    let radius: f64 = rng.gen::<f64>().powf(1.0 / n as f64);
    let solution = if norm == 0.0 {
        DenseVector::zeros(n)
    } else {
        direction.scaled(radius / norm)
    };

    let entries: Vec<f64> = (0..m * n).map(|_| rng.gen::<f64>()).collect();
    let matrix = SparseMatrixCsr::from_dense(m, n, &entries).expect("dense layout is valid CSR");
    let targets = matrix.matvec(&solution).expect("dimensions agree");

    let mut dataset = Dataset::new(
        matrix,
        targets,
        format!("qp-m{m}-n{n}-s{seed}"),
        Provenance::Seed(seed),
    )
    .expect("rows match targets");
    dataset.planted_solution = Some(solution);
    dataset
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::oracles::least_squares;
    use std::sync::Arc;

    #[test]
    fn identical_seeds_give_identical_datasets() {
        let a = random_qp_instance(7, 5, 42);
        let b = random_qp_instance(7, 5, 42);
        assert_eq!(a, b);
        let c = random_qp_instance(7, 5, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn planted_solution_lies_in_unit_ball() {
        for seed in 0..50 {
            let d = random_qp_instance(4, 6, seed);
            assert!(d.planted_solution.unwrap().norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn planted_residual_is_exactly_zero() {
        let d = random_qp_instance(20, 30, 9);
        let solution = d.planted_solution.clone().unwrap();
        let p = least_squares(&Arc::new(d));
        let (f, g) = p.eval(&solution);
        assert_eq!(f, 0.0);
        assert_eq!(g.norm(), 0.0);
    }
}
