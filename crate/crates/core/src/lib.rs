//! Spectral analysis of biquadratic tensors.
//!
//! A biquadratic tensor `A ∈ R^{m×n×m×n}` acts on vector pairs `(x, y)`
//! through the form `f(x,y) = Σ a_{i1 j1 i2 j2} x_{i1} y_{j1} x_{i2} y_{j2}`.
//! This crate provides:
//!
//! - [`tensor`]: the dense tensor type, contractions `g`/`h`, and
//!   M-eigenpair verification;
//! - [`graph`]: bipartite 2-graphs and their adjacency, degree, Laplacian,
//!   and signless Laplacian tensors, plus separability tests;
//! - [`structure`]: x/y-reducibility and x/y-quasi-reducibility
//!   classification with verifiable witnesses, and eigenpair class tagging;
//! - [`spectra`]: a bound-driven iteration for the largest M-eigenvalue of
//!   a nonnegative tensor, max–min bound estimators, a PSD probe, and an
//!   exhaustive enumeration oracle for m,n ≤ 3;
//! - [`io`]: JSON tensor documents, edge-list parsing, and report types
//!   (1-based indices at the file boundary, 0-based everywhere else);
//! - [`ensemble`]: seeded random tensors, pairs, and graphs for tests and
//!   benchmarks.
//!
//! Tensors and graphs are immutable once built; every operation is a pure
//! function of its inputs, so values can be shared freely across threads.
//! Parallel sections (solver restarts, grid scans) respect the
//! `BIQ_THREADS` environment variable (0 or unset = automatic).

// The contraction kernels index several arrays per loop; iterator chains
// obscure the index couplings there.
#![allow(clippy::needless_range_loop)]

pub mod ensemble;
pub mod error;
pub mod graph;
pub mod io;
pub mod spectra;
pub mod structure;
pub mod tensor;

mod union_find;

pub use error::{Error, Result};
pub use graph::{BipartiteTwoGraph, Edge, SeparabilityReport, SeparabilityWitness};
pub use spectra::{
    collatz_bounds, enumerate_m_eigenpairs_small, estimate_rho_lower, estimate_rho_star,
    min_m_eigenvalue_probe, solve_lambda_max, ProbeOutcome, SolverConfig, SolverOutcome,
};
pub use structure::{
    classify_eigenpair, is_x_quasi_reducible, is_x_reducible, is_y_quasi_reducible,
    is_y_reducible, structure_report, QuasiReducibilityWitness, ReducibilityWitness,
    StructureReport,
};
pub use tensor::{
    BiquadraticTensor, EigenClass, MEigenPair, VectorPair, DEFAULT_RESIDUAL_TOL,
    SUPPORT_THRESHOLD,
};

use std::sync::OnceLock;

static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();

/// Runs `f` inside the worker pool configured by `BIQ_THREADS` (a positive
/// value caps the worker count; 0 or unset uses the rayon default).
pub(crate) fn run_in_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let pool = POOL.get_or_init(|| {
        let threads: usize = std::env::var("BIQ_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0);
        if threads == 0 {
            None
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .ok()
        }
    });
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use crate::tensor::{BiquadraticTensor, VectorPair};
    use rand::Rng;

    /// The 2x2 reference tensor with a_1111=1, a_2222=2, a_1212=3 and the
    /// four symmetric cross entries a_1122 = a_1221 = a_2112 = a_2211 = 1
    /// (1-based notation). Its M-spectrum is
    /// {(3-sqrt(10))/2, 0, 1, 2, 3, (3+sqrt(10))/2}: the middle four sit at
    /// coordinate-vector pairs (0,e2,e1), (1,e1,e1), (2,e2,e2), (3,e1,e2),
    /// while the extreme two are interior, so the maximum
    /// (3+sqrt(10))/2 ~= 3.0811 has strictly positive eigenvectors.
    pub fn example_tensor() -> BiquadraticTensor {
        let mut a = BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, 1.0);
        a.set(1, 1, 1, 1, 2.0);
        a.set(0, 1, 0, 1, 3.0);
        a.set(0, 0, 1, 1, 1.0);
        a.set(0, 1, 1, 0, 1.0);
        a.set(1, 0, 0, 1, 1.0);
        a.set(1, 1, 0, 0, 1.0);
        a
    }

    /// a_{i j i j} = c for all i, j; the biquadratic form is identically c
    /// on the unit sphere product.
    pub fn isotropic(m: usize, n: usize, c: f64) -> BiquadraticTensor {
        let mut a = BiquadraticTensor::zeros(m, n).unwrap();
        for i in 0..m {
            for j in 0..n {
                a.set(i, j, i, j, c);
            }
        }
        a
    }

    pub fn all_ones(m: usize, n: usize) -> BiquadraticTensor {
        BiquadraticTensor::from_entries(m, n, vec![1.0; m * n * m * n]).unwrap()
    }

    pub fn random_tensor<R: Rng>(m: usize, n: usize, rng: &mut R) -> BiquadraticTensor {
        let entries = (0..m * n * m * n).map(|_| rng.random::<f64>()).collect();
        BiquadraticTensor::from_entries(m, n, entries).unwrap()
    }

    pub fn random_pair<R: Rng>(m: usize, n: usize, rng: &mut R) -> VectorPair {
        let x: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        VectorPair::new(x, y).normalized().unwrap()
    }
}
