//! Seeded random ensembles used by tests, benchmarks, and the smoke
//! scripts. All draws go through ChaCha streams so results are stable
//! across platforms and runs.

use crate::graph::{BipartiteTwoGraph, Edge};
use crate::tensor::{BiquadraticTensor, VectorPair};
use rand::Rng;
use rand_distr::StandardNormal;

/// Dense nonnegative tensor with entries uniform in [0, 1).
pub fn random_nonnegative_tensor<R: Rng>(m: usize, n: usize, rng: &mut R) -> BiquadraticTensor {
    let entries = (0..m * n * m * n).map(|_| rng.random::<f64>()).collect();
    BiquadraticTensor::from_entries(m, n, entries).expect("entries are finite")
}

/// Unit pair drawn uniformly from the positive sections of both spheres
/// (folded Gaussian directions).
pub fn random_nonnegative_unit_pair<R: Rng>(m: usize, n: usize, rng: &mut R) -> VectorPair {
    loop {
        let x: Vec<f64> = (0..m)
            .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
            .collect();
        let y: Vec<f64> = (0..n)
            .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
            .collect();
        if let Some(p) = VectorPair::new(x, y).normalized() {
            return p;
        }
    }
}

/// Unit pair drawn uniformly from the full spheres.
pub fn random_unit_pair<R: Rng>(m: usize, n: usize, rng: &mut R) -> VectorPair {
    loop {
        let x: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if let Some(p) = VectorPair::new(x, y).normalized() {
            return p;
        }
    }
}

/// Random bipartite 2-graph: every pair-of-pairs edge is included
/// independently with probability `edge_prob`; weights are uniform in
/// [0, 1) when `weighted`, otherwise 1.
pub fn random_graph<R: Rng>(
    m: usize,
    n: usize,
    edge_prob: f64,
    weighted: bool,
    rng: &mut R,
) -> BipartiteTwoGraph {
    let mut g = BipartiteTwoGraph::new(m, n).expect("sizes at least 1");
    for i1 in 0..m {
        for i2 in (i1 + 1)..m {
            for j1 in 0..n {
                for j2 in (j1 + 1)..n {
                    if rng.random::<f64>() < edge_prob {
                        let w = if weighted { rng.random::<f64>() } else { 1.0 };
                        g.add_edge(Edge::new(i1, i2, j1, j2, w).expect("valid endpoints"))
                            .expect("no duplicates in a single sweep");
                    }
                }
            }
        }
    }
    g
}
