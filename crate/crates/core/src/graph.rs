//! Bipartite 2-graphs and their tensor constructions.
//!
//! A bipartite 2-graph pairs a 2-subset of the side-S vertices `[m]` with a
//! 2-subset of the side-T vertices `[n]` per edge, optionally weighted. The
//! adjacency tensor places each edge weight at the four index arrangements
//! consistent with full symmetry; the degree tensors D0/Dx/Dy collect row
//! sums over the trailing slots, and the (signless) Laplacian combines them:
//! `Q = D0 + Dx + Dy + A`, `L = D0 - Dx - Dy + A`. Both Q and L are
//! positive semi-definite.
//!
//! Separability asks for two opposite-side vertices and a partition with no
//! cross edges; it is decided pair-by-pair with union-find connectivity.

use crate::error::{Error, Result};
use crate::tensor::BiquadraticTensor;
use crate::union_find::UnionFind;
use std::collections::HashSet;

/// An edge `({i1, i2}, {j1, j2})` with a nonnegative weight. Endpoint pairs
/// are unordered and stored sorted; 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    s_pair: (usize, usize),
    t_pair: (usize, usize),
    weight: f64,
}

impl Edge {
    pub fn new(i1: usize, i2: usize, j1: usize, j2: usize, weight: f64) -> Result<Self> {
        if i1 == i2 {
            return Err(Error::DegenerateEdge { a: i1 });
        }
        if j1 == j2 {
            return Err(Error::DegenerateEdge { a: j1 });
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::BadWeight(weight));
        }
        Ok(Self {
            s_pair: (i1.min(i2), i1.max(i2)),
            t_pair: (j1.min(j2), j1.max(j2)),
            weight,
        })
    }

    pub fn unit(i1: usize, i2: usize, j1: usize, j2: usize) -> Result<Self> {
        Self::new(i1, i2, j1, j2, 1.0)
    }

    pub fn s_pair(&self) -> (usize, usize) {
        self.s_pair
    }

    pub fn t_pair(&self) -> (usize, usize) {
        self.t_pair
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// Weighted bipartite 2-graph on vertex sets of sizes m and n.
#[derive(Clone, Debug)]
pub struct BipartiteTwoGraph {
    m: usize,
    n: usize,
    edges: Vec<Edge>,
    keys: HashSet<(usize, usize, usize, usize)>,
}

impl BipartiteTwoGraph {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::ModeTooSmall { m, n, required: 1 });
        }
        Ok(Self {
            m,
            n,
            edges: Vec::new(),
            keys: HashSet::new(),
        })
    }

    /// Convenience constructor from `(i1, i2, j1, j2, weight)` tuples.
    pub fn from_edges(
        m: usize,
        n: usize,
        edges: &[(usize, usize, usize, usize, f64)],
    ) -> Result<Self> {
        let mut g = Self::new(m, n)?;
        for &(i1, i2, j1, j2, w) in edges {
            g.add_edge(Edge::new(i1, i2, j1, j2, w)?)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        let (i1, i2) = edge.s_pair;
        let (j1, j2) = edge.t_pair;
        if i2 >= self.m {
            return Err(Error::VertexOutOfRange { index: i2, size: self.m });
        }
        if j2 >= self.n {
            return Err(Error::VertexOutOfRange { index: j2, size: self.n });
        }
        if !self.keys.insert((i1, i2, j1, j2)) {
            return Err(Error::DuplicateEdge { i1, i2, j1, j2 });
        }
        self.edges.push(edge);
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The adjacency tensor: each edge `({i1,i2},{j1,j2})` of weight w sets
    /// the four entries a_{i1 j1 i2 j2} = a_{i1 j2 i2 j1} = a_{i2 j1 i1 j2}
    /// = a_{i2 j2 i1 j1} = w (the full symmetry orbit of the quadruple).
    /// Entries with i1 = i2 or j1 = j2 stay zero.
    pub fn adjacency_tensor(&self) -> BiquadraticTensor {
        let mut a = BiquadraticTensor::zeros(self.m, self.n).expect("validated at construction");
        for e in &self.edges {
            let (i1, i2) = e.s_pair;
            let (j1, j2) = e.t_pair;
            a.set(i1, j1, i2, j2, e.weight);
            a.set(i1, j2, i2, j1, e.weight);
            a.set(i2, j1, i1, j2, e.weight);
            a.set(i2, j2, i1, j1, e.weight);
        }
        a
    }

    /// Degree tensors (D0, Dx, Dy) of the adjacency tensor A:
    /// D0 is diagonal with d0_{i j i j} = Σ_{i',j'} a_{i j i' j'};
    /// Dx lives on i1 = i2 with dx_{i j1 i j2} = Σ_{i'} a_{i j1 i' j2};
    /// Dy lives on j1 = j2 with dy_{i1 j i2 j} = Σ_{j'} a_{i1 j i2 j'}.
    pub fn degree_tensors(&self) -> (BiquadraticTensor, BiquadraticTensor, BiquadraticTensor) {
        let a = self.adjacency_tensor();
        let (m, n) = (self.m, self.n);
        let mut d0 = BiquadraticTensor::zeros(m, n).unwrap();
        let mut dx = BiquadraticTensor::zeros(m, n).unwrap();
        let mut dy = BiquadraticTensor::zeros(m, n).unwrap();
        for i in 0..m {
            for j in 0..n {
                let mut s = 0.0;
                for i2 in 0..m {
                    for j2 in 0..n {
                        s += a.get(i, j, i2, j2);
                    }
                }
                d0.set(i, j, i, j, s);
            }
        }
        for i in 0..m {
            for j1 in 0..n {
                for j2 in 0..n {
                    let mut s = 0.0;
                    for i2 in 0..m {
                        s += a.get(i, j1, i2, j2);
                    }
                    dx.set(i, j1, i, j2, s);
                }
            }
        }
        for i1 in 0..m {
            for i2 in 0..m {
                for j in 0..n {
                    let mut s = 0.0;
                    for j2 in 0..n {
                        s += a.get(i1, j, i2, j2);
                    }
                    dy.set(i1, j, i2, j, s);
                }
            }
        }
        (d0, dx, dy)
    }

    /// Signless Laplacian Q = D0 + Dx + Dy + A.
    pub fn signless_laplacian(&self) -> BiquadraticTensor {
        let a = self.adjacency_tensor();
        let (d0, dx, dy) = self.degree_tensors();
        BiquadraticTensor::linear_combination(&[(1.0, &d0), (1.0, &dx), (1.0, &dy), (1.0, &a)])
            .expect("shapes agree")
    }

    /// Laplacian L = D0 - Dx - Dy + A. May carry negative entries but is
    /// positive semi-definite.
    pub fn laplacian(&self) -> BiquadraticTensor {
        let a = self.adjacency_tensor();
        let (d0, dx, dy) = self.degree_tensors();
        BiquadraticTensor::linear_combination(&[(1.0, &d0), (-1.0, &dx), (-1.0, &dy), (1.0, &a)])
            .expect("shapes agree")
    }

    fn require_analyzable(&self) -> Result<()> {
        if self.m < 2 || self.n < 2 {
            return Err(Error::ModeTooSmall {
                m: self.m,
                n: self.n,
                required: 2,
            });
        }
        Ok(())
    }

    /// Tests whether S is T-separable: two distinct vertices j1, j2 of T and
    /// a proper partition (S1, S2) of S such that no positive-weight edge
    /// `({i1,i2},{j1,j2})` crosses the partition. For each vertex pair the
    /// simple graph on `[m]` induced by that pair is checked for
    /// connectivity; any disconnected pair yields a witness.
    pub fn t_separability(&self) -> Result<Option<SeparabilityWitness>> {
        self.require_analyzable()?;
        for j1 in 0..self.n {
            for j2 in (j1 + 1)..self.n {
                let mut uf = UnionFind::new(self.m);
                for e in &self.edges {
                    if e.weight > 0.0 && e.t_pair == (j1, j2) {
                        uf.union(e.s_pair.0, e.s_pair.1);
                    }
                }
                if !uf.is_connected() {
                    return Ok(Some(SeparabilityWitness {
                        pair: (j1, j2),
                        block: uf.smallest_component(),
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Tests whether T is S-separable: the mirror of [`Self::t_separability`].
    pub fn s_separability(&self) -> Result<Option<SeparabilityWitness>> {
        self.require_analyzable()?;
        for i1 in 0..self.m {
            for i2 in (i1 + 1)..self.m {
                let mut uf = UnionFind::new(self.n);
                for e in &self.edges {
                    if e.weight > 0.0 && e.s_pair == (i1, i2) {
                        uf.union(e.t_pair.0, e.t_pair.1);
                    }
                }
                if !uf.is_connected() {
                    return Ok(Some(SeparabilityWitness {
                        pair: (i1, i2),
                        block: uf.smallest_component(),
                    }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_bi_separable(&self) -> Result<bool> {
        Ok(self.t_separability()?.is_some() || self.s_separability()?.is_some())
    }

    pub fn separability_report(&self) -> Result<SeparabilityReport> {
        let t = self.t_separability()?;
        let s = self.s_separability()?;
        let bi = t.is_some() || s.is_some();
        Ok(SeparabilityReport {
            t_separable: t,
            s_separable: s,
            bi_separable: bi,
        })
    }
}

/// Witness of a separability split: the opposite-side vertex pair plus one
/// block of the partition (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct SeparabilityWitness {
    pub pair: (usize, usize),
    pub block: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SeparabilityReport {
    pub t_separable: Option<SeparabilityWitness>,
    pub s_separable: Option<SeparabilityWitness>,
    pub bi_separable: bool,
}
