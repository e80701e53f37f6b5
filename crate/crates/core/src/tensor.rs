//! Dense biquadratic tensors and the M-eigenpair primitives.
//!
//! A biquadratic tensor `A = (a_{i1 j1 i2 j2})` over `R^{m x n x m x n}`
//! defines the biquadratic form
//!
//! ```text
//! f(x, y) = sum_{i1,i2,j1,j2} a_{i1 j1 i2 j2} x_{i1} y_{j1} x_{i2} y_{j2}
//! ```
//!
//! and the contraction pair `g(x,y)` (length m) and `h(x,y)` (length n)
//! defined so that an M-eigenpair satisfies `g = lambda x`, `h = lambda y`
//! with `||x|| = ||y|| = 1`. The 1/2 factor of the raw eigen equations is
//! folded into `g` and `h`, so no factor 2 appears on the right-hand side.

use crate::error::{Error, Result};

/// Coordinates with absolute value above this threshold count as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

/// Default residual tolerance for verifying candidate eigenpairs.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

/// Dense order-4 tensor with modes (m, n, m, n), row-major over
/// (i1, j1, i2, j2). Immutable in all spectral operations; builders fill
/// entries before handing the tensor out.
#[derive(Clone, Debug, PartialEq)]
pub struct BiquadraticTensor {
    m: usize,
    n: usize,
    entries: Vec<f64>,
}

impl BiquadraticTensor {
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::ModeTooSmall { m, n, required: 1 });
        }
        Ok(Self {
            m,
            n,
            entries: vec![0.0; m * n * m * n],
        })
    }

    /// Builds a tensor from a row-major entry buffer of length `m*n*m*n`.
    pub fn from_entries(m: usize, n: usize, entries: Vec<f64>) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::ModeTooSmall { m, n, required: 1 });
        }
        let expected = m * n * m * n;
        if entries.len() != expected {
            return Err(Error::EntryCount {
                m,
                n,
                expected,
                got: entries.len(),
            });
        }
        let t = Self { m, n, entries };
        t.check_finite()?;
        Ok(t)
    }

    fn check_finite(&self) -> Result<()> {
        for (pos, &v) in self.entries.iter().enumerate() {
            if !v.is_finite() {
                let (i1, j1, i2, j2) = self.unindex(pos);
                return Err(Error::NonFiniteEntry { i1, j1, i2, j2, value: v });
            }
        }
        Ok(())
    }

    #[inline]
    fn idx(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> usize {
        ((i1 * self.n + j1) * self.m + i2) * self.n + j2
    }

    fn unindex(&self, pos: usize) -> (usize, usize, usize, usize) {
        let j2 = pos % self.n;
        let rest = pos / self.n;
        let i2 = rest % self.m;
        let rest = rest / self.m;
        let j1 = rest % self.n;
        let i1 = rest / self.n;
        (i1, j1, i2, j2)
    }

    #[inline]
    pub fn get(&self, i1: usize, j1: usize, i2: usize, j2: usize) -> f64 {
        self.entries[self.idx(i1, j1, i2, j2)]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, j1: usize, i2: usize, j2: usize, value: f64) {
        let k = self.idx(i1, j1, i2, j2);
        self.entries[k] = value;
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&v| v >= 0.0)
    }

    /// Returns the first strictly negative entry, if any.
    pub(crate) fn first_negative_entry(&self) -> Option<(usize, usize, usize, usize, f64)> {
        self.entries.iter().position(|&v| v < 0.0).map(|pos| {
            let (i1, j1, i2, j2) = self.unindex(pos);
            (i1, j1, i2, j2, self.entries[pos])
        })
    }

    /// Weak symmetry: invariance under the block swap (i1,j1) <-> (i2,j2).
    pub fn is_weakly_symmetric(&self, tol: f64) -> bool {
        for i1 in 0..self.m {
            for j1 in 0..self.n {
                for i2 in 0..self.m {
                    for j2 in 0..self.n {
                        let d = self.get(i1, j1, i2, j2) - self.get(i2, j2, i1, j1);
                        if d.abs() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Full symmetry: weak symmetry plus invariance under swapping the two
    /// i-indices alone (equivalently the two j-indices alone).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_weakly_symmetric(tol) {
            return false;
        }
        for i1 in 0..self.m {
            for j1 in 0..self.n {
                for i2 in 0..self.m {
                    for j2 in 0..self.n {
                        let a = self.get(i1, j1, i2, j2);
                        if (a - self.get(i2, j1, i1, j2)).abs() > tol
                            || (a - self.get(i1, j2, i2, j1)).abs() > tol
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn check_pair_dims(&self, pair: &VectorPair) -> Result<()> {
        if pair.x.len() != self.m || pair.y.len() != self.n {
            return Err(Error::DimensionMismatch {
                m: self.m,
                n: self.n,
                x_len: pair.x.len(),
                y_len: pair.y.len(),
            });
        }
        Ok(())
    }

    /// Evaluates the biquadratic form f(x, y). Unit norms are not required.
    pub fn biquadratic_form(&self, pair: &VectorPair) -> Result<f64> {
        self.check_pair_dims(pair)?;
        let (x, y) = (&pair.x, &pair.y);
        let mut total = 0.0;
        let mut pos = 0;
        for i1 in 0..self.m {
            for j1 in 0..self.n {
                let xy1 = x[i1] * y[j1];
                if xy1 == 0.0 {
                    pos += self.m * self.n;
                    continue;
                }
                let mut inner = 0.0;
                for i2 in 0..self.m {
                    for j2 in 0..self.n {
                        inner += self.entries[pos] * x[i2] * y[j2];
                        pos += 1;
                    }
                }
                total += xy1 * inner;
            }
        }
        Ok(total)
    }

    /// The x-side contraction g with the 1/2 factor folded in:
    ///
    /// ```text
    /// g_i = 1/2 [ sum_{i1,j1,j2} a_{i1 j1 i j2} x_{i1} y_{j1} y_{j2}
    ///           + sum_{i2,j1,j2} a_{i j1 i2 j2} y_{j1} x_{i2} y_{j2} ]
    /// ```
    ///
    /// Satisfies `g . x = f(x, y)` for every input.
    pub fn contract_g(&self, pair: &VectorPair) -> Result<Vec<f64>> {
        self.check_pair_dims(pair)?;
        let (x, y) = (&pair.x, &pair.y);
        let mut g = vec![0.0; self.m];
        for i in 0..self.m {
            let mut first = 0.0;
            let mut second = 0.0;
            for j1 in 0..self.n {
                if y[j1] == 0.0 {
                    continue;
                }
                for j2 in 0..self.n {
                    if y[j2] == 0.0 {
                        continue;
                    }
                    let yy = y[j1] * y[j2];
                    let mut s1 = 0.0;
                    let mut s2 = 0.0;
                    for k in 0..self.m {
                        s1 += self.get(k, j1, i, j2) * x[k];
                        s2 += self.get(i, j1, k, j2) * x[k];
                    }
                    first += s1 * yy;
                    second += s2 * yy;
                }
            }
            g[i] = 0.5 * (first + second);
        }
        Ok(g)
    }

    /// The y-side contraction h, mirror of [`Self::contract_g`]:
    ///
    /// ```text
    /// h_j = 1/2 [ sum_{i1,j1,i2} a_{i1 j1 i2 j} x_{i1} y_{j1} x_{i2}
    ///           + sum_{i1,i2,j2} a_{i1 j i2 j2} x_{i1} x_{i2} y_{j2} ]
    /// ```
    ///
    /// Satisfies `h . y = f(x, y)`.
    pub fn contract_h(&self, pair: &VectorPair) -> Result<Vec<f64>> {
        self.check_pair_dims(pair)?;
        let (x, y) = (&pair.x, &pair.y);
        let mut h = vec![0.0; self.n];
        for j in 0..self.n {
            let mut first = 0.0;
            let mut second = 0.0;
            for i1 in 0..self.m {
                if x[i1] == 0.0 {
                    continue;
                }
                for i2 in 0..self.m {
                    if x[i2] == 0.0 {
                        continue;
                    }
                    let xx = x[i1] * x[i2];
                    let mut s1 = 0.0;
                    let mut s2 = 0.0;
                    for k in 0..self.n {
                        s1 += self.get(i1, k, i2, j) * y[k];
                        s2 += self.get(i1, j, i2, k) * y[k];
                    }
                    first += s1 * xx;
                    second += s2 * xx;
                }
            }
            h[j] = 0.5 * (first + second);
        }
        Ok(h)
    }

    /// Symmetric m x m matrix B(y) with g(x, y) = B(y) x for every x.
    /// Row-major. `y` must have length n.
    pub fn x_quadratic_matrix(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.n);
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let mut s = 0.0;
                for j1 in 0..self.n {
                    if y[j1] == 0.0 {
                        continue;
                    }
                    for j2 in 0..self.n {
                        s += (self.get(k, j1, i, j2) + self.get(i, j1, k, j2)) * y[j1] * y[j2];
                    }
                }
                b[i * m + k] = 0.5 * s;
            }
        }
        b
    }

    /// Symmetric n x n matrix C(x) with h(x, y) = C(x) y for every y.
    pub fn y_quadratic_matrix(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.m);
        let n = self.n;
        let mut c = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for i1 in 0..self.m {
                    if x[i1] == 0.0 {
                        continue;
                    }
                    for i2 in 0..self.m {
                        s += (self.get(i1, k, i2, j) + self.get(i1, j, i2, k)) * x[i1] * x[i2];
                    }
                }
                c[j * n + k] = 0.5 * s;
            }
        }
        c
    }

    /// Max-norm residual of the eigen equations at (lambda, x, y), including
    /// the unit-norm defects.
    pub fn eigen_residual(&self, pair: &VectorPair, lambda: f64) -> Result<f64> {
        let g = self.contract_g(pair)?;
        let h = self.contract_h(pair)?;
        let mut r: f64 = 0.0;
        for (gi, xi) in g.iter().zip(&pair.x) {
            r = r.max((gi - lambda * xi).abs());
        }
        for (hj, yj) in h.iter().zip(&pair.y) {
            r = r.max((hj - lambda * yj).abs());
        }
        r = r.max((norm2(&pair.x) - 1.0).abs());
        r = r.max((norm2(&pair.y) - 1.0).abs());
        Ok(r)
    }

    /// Verifies a candidate M-eigenpair: `g = lambda x`, `h = lambda y` and
    /// both norms equal 1, all within `tol` in max norm. Writes the achieved
    /// residual back into `cand.residual`.
    pub fn check_m_eigenpair(&self, cand: &mut MEigenPair, tol: f64) -> Result<bool> {
        if tol <= 0.0 {
            return Err(Error::NonPositiveTolerance(tol));
        }
        let r = self.eigen_residual(&cand.pair, cand.lambda)?;
        cand.residual = r;
        Ok(r <= tol)
    }

    /// Largest magnitude among the diagonal-style entries a_{i j i j};
    /// used for the default iteration shift.
    pub fn max_diagonal_magnitude(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.m {
            for j in 0..self.n {
                best = best.max(self.get(i, j, i, j).abs());
            }
        }
        best
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    /// Entry-wise linear combination of same-shaped tensors.
    pub fn linear_combination(terms: &[(f64, &BiquadraticTensor)]) -> Result<Self> {
        let (m, n) = (terms[0].1.m, terms[0].1.n);
        let mut out = Self::zeros(m, n)?;
        for &(c, t) in terms {
            if t.m != m || t.n != n {
                return Err(Error::DimensionMismatch {
                    m,
                    n,
                    x_len: t.m,
                    y_len: t.n,
                });
            }
            for (o, &v) in out.entries.iter_mut().zip(&t.entries) {
                *o += c * v;
            }
        }
        Ok(out)
    }
}

/// A pair of real vectors (x, y), the argument of the biquadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl VectorPair {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (norm2(&self.x) - 1.0).abs() <= tol && (norm2(&self.y) - 1.0).abs() <= tol
    }

    /// Euclidean normalization of both vectors; `None` if either is zero.
    pub fn normalized(mut self) -> Option<Self> {
        let nx = norm2(&self.x);
        let ny = norm2(&self.y);
        if nx == 0.0 || ny == 0.0 {
            return None;
        }
        self.x.iter_mut().for_each(|v| *v /= nx);
        self.y.iter_mut().for_each(|v| *v /= ny);
        Some(self)
    }

    /// Indices of x-coordinates above the support threshold.
    pub fn support_x(&self) -> Vec<usize> {
        support(&self.x)
    }

    pub fn support_y(&self) -> Vec<usize> {
        support(&self.y)
    }
}

pub(crate) fn support(v: &[f64]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > SUPPORT_THRESHOLD)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Classification tag of an M-eigenpair by the sign structure of its
/// eigenvectors: general (M), nonnegative (M+), strictly positive (M++),
/// or singleton-support (M0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenClass {
    M,
    MPlus,
    MPlusPlus,
    MZero,
}

impl std::fmt::Display for EigenClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EigenClass::M => "M",
            EigenClass::MPlus => "M+",
            EigenClass::MPlusPlus => "M++",
            EigenClass::MZero => "M0",
        };
        f.write_str(s)
    }
}

/// An M-eigenvalue with its eigenvector pair, the achieved residual of the
/// eigen equations, and a sign-structure class tag.
#[derive(Clone, Debug)]
pub struct MEigenPair {
    pub lambda: f64,
    pub pair: VectorPair,
    pub residual: f64,
    pub class: EigenClass,
}

impl MEigenPair {
    pub fn new(lambda: f64, pair: VectorPair) -> Self {
        Self {
            lambda,
            pair,
            residual: f64::INFINITY,
            class: EigenClass::M,
        }
    }

    /// True when some independent sign flip of x and of y makes both vectors
    /// nonnegative within `tol`. The eigen equations are invariant under
    /// flipping x or y alone (g is odd in x and even in y; h is even in x
    /// and odd in y), so the flipped pair is an eigenvector pair for the
    /// same eigenvalue.
    pub fn is_m_plus(&self, tol: f64) -> bool {
        flip_to_nonnegative(&self.pair.x, tol).is_some()
            && flip_to_nonnegative(&self.pair.y, tol).is_some()
    }
}

/// Returns the sign (+1/-1) whose flip makes `v` componentwise >= -tol,
/// preferring +1; `None` if neither sign works.
pub(crate) fn flip_to_nonnegative(v: &[f64], tol: f64) -> Option<f64> {
    if v.iter().all(|&c| c >= -tol) {
        Some(1.0)
    } else if v.iter().all(|&c| -c >= -tol) {
        Some(-1.0)
    } else {
        None
    }
}

/// Canonical sign for a vector modulo the flip symmetry: negate when the
/// negative mass dominates (ties broken by the first nonzero coordinate).
pub(crate) fn canonical_sign(v: &[f64]) -> f64 {
    let pos: f64 = v.iter().filter(|&&c| c > 0.0).sum();
    let neg: f64 = -v.iter().filter(|&&c| c < 0.0).sum::<f64>();
    if neg > pos {
        -1.0
    } else if neg < pos {
        1.0
    } else {
        match v.iter().find(|c| **c != 0.0) {
            Some(c) if *c < 0.0 => -1.0,
            _ => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{example_tensor, isotropic, random_pair, random_tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(x: &[f64], y: &[f64]) -> VectorPair {
        VectorPair::new(x.to_vec(), y.to_vec())
    }

    /// Brute-force g straight from the two defining sums, no skipping.
    fn brute_g(a: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; a.m()];
        for i in 0..a.m() {
            let mut s = 0.0;
            for i1 in 0..a.m() {
                for j1 in 0..a.n() {
                    for j2 in 0..a.n() {
                        s += a.get(i1, j1, i, j2) * x[i1] * y[j1] * y[j2];
                        s += a.get(i, j1, i1, j2) * y[j1] * x[i1] * y[j2];
                    }
                }
            }
            g[i] = 0.5 * s;
        }
        g
    }

    fn brute_h(a: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; a.n()];
        for j in 0..a.n() {
            let mut s = 0.0;
            for i1 in 0..a.m() {
                for i2 in 0..a.m() {
                    for j1 in 0..a.n() {
                        s += a.get(i1, j1, i2, j) * x[i1] * y[j1] * x[i2];
                        s += a.get(i1, j, i2, j1) * x[i1] * x[i2] * y[j1];
                    }
                }
            }
            h[j] = 0.5 * s;
        }
        h
    }

    #[test]
    fn form_on_example_tensor() {
        let a = example_tensor();
        let p = pair(&[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(a.biquadratic_form(&p).unwrap(), 3.0);
    }

    #[test]
    fn form_on_zero_tensor() {
        let a = BiquadraticTensor::zeros(3, 2).unwrap();
        let p = pair(&[1.0, 0.0, 0.0], &[0.0, 1.0]);
        assert_eq!(a.biquadratic_form(&p).unwrap(), 0.0);
    }

    #[test]
    fn form_on_single_entry_tensor() {
        let mut a = BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, 1.0);
        let p = pair(&[1.0, 0.0], &[1.0, 0.0]);
        assert_eq!(a.biquadratic_form(&p).unwrap(), 1.0);
    }

    #[test]
    fn form_rejects_dimension_mismatch() {
        let a = example_tensor();
        let p = pair(&[1.0, 0.0, 0.0], &[0.0, 1.0]);
        assert!(matches!(
            a.biquadratic_form(&p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn contractions_on_example_tensor() {
        let a = example_tensor();
        let p = pair(&[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(a.contract_g(&p).unwrap(), vec![3.0, 0.0]);
        assert_eq!(a.contract_h(&p).unwrap(), vec![0.0, 3.0]);
    }

    #[test]
    fn contractions_on_zero_tensor() {
        let a = BiquadraticTensor::zeros(2, 3).unwrap();
        let p = pair(&[0.6, 0.8], &[1.0, 0.0, 0.0]);
        assert_eq!(a.contract_g(&p).unwrap(), vec![0.0, 0.0]);
        assert_eq!(a.contract_h(&p).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn contractions_on_isotropic_tensor() {
        let c = 2.5;
        let a = isotropic(3, 2, c);
        let p = pair(&[0.6, 0.8, 0.0], &[0.28, 0.96]);
        let g = a.contract_g(&p).unwrap();
        let h = a.contract_h(&p).unwrap();
        for (gi, xi) in g.iter().zip(&p.x) {
            assert!((gi - c * xi).abs() < 1e-14);
        }
        for (hj, yj) in h.iter().zip(&p.y) {
            assert!((hj - c * yj).abs() < 1e-14);
        }
    }

    #[test]
    fn contractions_match_brute_force_on_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(m, n) in &[(2usize, 2usize), (3, 2), (2, 3), (4, 3)] {
            let a = random_tensor(m, n, &mut rng);
            let p = random_pair(m, n, &mut rng);
            let g = a.contract_g(&p).unwrap();
            let h = a.contract_h(&p).unwrap();
            let bg = brute_g(&a, &p.x, &p.y);
            let bh = brute_h(&a, &p.x, &p.y);
            for (u, v) in g.iter().zip(&bg) {
                assert!((u - v).abs() < 1e-12);
            }
            for (u, v) in h.iter().zip(&bh) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadratic_matrices_reproduce_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for &(m, n) in &[(2usize, 2usize), (3, 3), (3, 2)] {
            let a = random_tensor(m, n, &mut rng);
            let p = random_pair(m, n, &mut rng);
            let b = a.x_quadratic_matrix(&p.y);
            let c = a.y_quadratic_matrix(&p.x);
            let g = a.contract_g(&p).unwrap();
            let h = a.contract_h(&p).unwrap();
            for i in 0..m {
                let row: f64 = (0..m).map(|k| b[i * m + k] * p.x[k]).sum();
                assert!((row - g[i]).abs() < 1e-12);
            }
            for j in 0..n {
                let row: f64 = (0..n).map(|k| c[j * n + k] * p.y[k]).sum();
                assert!((row - h[j]).abs() < 1e-12);
            }
            // B and C are symmetric by construction.
            for i in 0..m {
                for k in 0..m {
                    assert!((b[i * m + k] - b[k * m + i]).abs() < 1e-14);
                }
            }
            for i in 0..n {
                for k in 0..n {
                    assert!((c[i * n + k] - c[k * n + i]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn homogeneity_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = random_tensor(3, 3, &mut rng);
            let p = random_pair(3, 3, &mut rng);
            let f = a.biquadratic_form(&p).unwrap();
            let g = a.contract_g(&p).unwrap();
            let h = a.contract_h(&p).unwrap();
            let scale = f.abs().max(1.0);
            assert!((dot(&g, &p.x) - f).abs() <= 1e-12 * scale);
            assert!((dot(&h, &p.y) - f).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let step = 1e-6;
        for _ in 0..5 {
            let a = random_tensor(3, 2, &mut rng);
            let p = random_pair(3, 2, &mut rng);
            let g = a.contract_g(&p).unwrap();
            let h = a.contract_h(&p).unwrap();
            for i in 0..3 {
                let mut up = p.clone();
                let mut dn = p.clone();
                up.x[i] += step;
                dn.x[i] -= step;
                let fd = (a.biquadratic_form(&up).unwrap() - a.biquadratic_form(&dn).unwrap())
                    / (2.0 * step);
                assert!((2.0 * g[i] - fd).abs() <= 1e-5);
            }
            for j in 0..2 {
                let mut up = p.clone();
                let mut dn = p.clone();
                up.y[j] += step;
                dn.y[j] -= step;
                let fd = (a.biquadratic_form(&up).unwrap() - a.biquadratic_form(&dn).unwrap())
                    / (2.0 * step);
                assert!((2.0 * h[j] - fd).abs() <= 1e-5);
            }
        }
    }

    #[test]
    fn weakly_symmetric_form_is_block_swap_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..5 {
            let raw = random_tensor(3, 2, &mut rng);
            // Symmetrize over the block swap.
            let mut a = BiquadraticTensor::zeros(3, 2).unwrap();
            for i1 in 0..3 {
                for j1 in 0..2 {
                    for i2 in 0..3 {
                        for j2 in 0..2 {
                            let v = 0.5 * (raw.get(i1, j1, i2, j2) + raw.get(i2, j2, i1, j1));
                            a.set(i1, j1, i2, j2, v);
                        }
                    }
                }
            }
            assert!(a.is_weakly_symmetric(0.0));
            let p = random_pair(3, 2, &mut rng);
            let f = a.biquadratic_form(&p).unwrap();
            // Evaluate with the index loops transposed.
            let mut ft = 0.0;
            for i2 in 0..3 {
                for j2 in 0..2 {
                    for i1 in 0..3 {
                        for j1 in 0..2 {
                            ft += a.get(i2, j2, i1, j1) * p.x[i1] * p.y[j1] * p.x[i2] * p.y[j2];
                        }
                    }
                }
            }
            assert!((f - ft).abs() <= 1e-12 * f.abs().max(1.0));
        }
    }

    #[test]
    fn example_tensor_symmetry_flags() {
        let a = example_tensor();
        assert!(a.is_weakly_symmetric(0.0));
        let mut b = a.clone();
        b.set(0, 0, 1, 0, 0.5);
        assert!(!b.is_weakly_symmetric(0.0));
        let mut c = BiquadraticTensor::zeros(2, 2).unwrap();
        c.set(0, 0, 0, 0, -1.0);
        assert!(!c.is_nonnegative());
    }

    #[test]
    fn check_m_eigenpair_on_example_tensor() {
        let a = example_tensor();
        let mut good = MEigenPair::new(3.0, pair(&[1.0, 0.0], &[0.0, 1.0]));
        assert!(a.check_m_eigenpair(&mut good, 1e-10).unwrap());
        assert!(good.residual <= 1e-15);

        let mut bad = MEigenPair::new(2.5, pair(&[1.0, 0.0], &[0.0, 1.0]));
        assert!(!a.check_m_eigenpair(&mut bad, 1e-10).unwrap());
        assert!((bad.residual - 0.5).abs() < 1e-15);

        let mut zero = MEigenPair::new(0.0, pair(&[0.0, 1.0], &[1.0, 0.0]));
        assert!(a.check_m_eigenpair(&mut zero, 1e-10).unwrap());
    }

    #[test]
    fn check_rejects_bad_tolerance() {
        let a = example_tensor();
        let mut cand = MEigenPair::new(3.0, pair(&[1.0, 0.0], &[0.0, 1.0]));
        assert!(a.check_m_eigenpair(&mut cand, 0.0).is_err());
    }

    #[test]
    fn check_monotone_in_tolerance() {
        let a = example_tensor();
        // Slightly perturbed eigenpair: residual sits between the two tols.
        let mut cand = MEigenPair::new(3.0 + 1e-6, pair(&[1.0, 0.0], &[0.0, 1.0]));
        let tols = [1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-2];
        let mut seen_true = false;
        for &t in &tols {
            let ok = a.check_m_eigenpair(&mut cand, t).unwrap();
            if seen_true {
                assert!(ok, "monotonicity violated at tol {t}");
            }
            seen_true |= ok;
        }
        assert!(seen_true);
    }

    #[test]
    fn from_entries_validates() {
        assert!(matches!(
            BiquadraticTensor::from_entries(2, 2, vec![0.0; 15]),
            Err(Error::EntryCount { .. })
        ));
        let mut e = vec![0.0; 16];
        e[3] = f64::NAN;
        assert!(matches!(
            BiquadraticTensor::from_entries(2, 2, e),
            Err(Error::NonFiniteEntry { .. })
        ));
        assert!(BiquadraticTensor::zeros(0, 2).is_err());
    }

    #[test]
    fn sign_helpers() {
        assert_eq!(flip_to_nonnegative(&[1.0, 0.0], 1e-12), Some(1.0));
        assert_eq!(flip_to_nonnegative(&[-1.0, -0.5], 1e-12), Some(-1.0));
        assert_eq!(flip_to_nonnegative(&[1.0, -0.5], 1e-12), None);
        assert_eq!(canonical_sign(&[-0.9, 0.1]), -1.0);
        assert_eq!(canonical_sign(&[0.9, -0.1]), 1.0);
        let p = MEigenPair::new(3.0, pair(&[-1.0, 0.0], &[0.0, 1.0]));
        assert!(p.is_m_plus(1e-12));
        let q = MEigenPair::new(3.0, pair(&[-0.8, 0.6], &[0.0, 1.0]));
        assert!(!q.is_m_plus(1e-12));
    }

    #[test]
    fn max_diagonal_magnitude_examples() {
        let a = example_tensor();
        assert_eq!(a.max_diagonal_magnitude(), 3.0);
        let z = BiquadraticTensor::zeros(2, 2).unwrap();
        assert_eq!(z.max_diagonal_magnitude(), 0.0);
    }

    proptest::proptest! {
        /// g . x = f = h . y for arbitrary tensors and (not necessarily
        /// unit) vector pairs.
        #[test]
        fn homogeneity_holds_for_arbitrary_inputs(
            entries in proptest::collection::vec(-1.0f64..1.0, 36),
            xs in proptest::collection::vec(-2.0f64..2.0, 3),
            ys in proptest::collection::vec(-2.0f64..2.0, 2),
        ) {
            let a = BiquadraticTensor::from_entries(3, 2, entries).unwrap();
            let p = VectorPair::new(xs, ys);
            let f = a.biquadratic_form(&p).unwrap();
            let g = a.contract_g(&p).unwrap();
            let h = a.contract_h(&p).unwrap();
            let scale = f.abs().max(1.0);
            proptest::prop_assert!((dot(&g, &p.x) - f).abs() <= 1e-12 * scale);
            proptest::prop_assert!((dot(&h, &p.y) - f).abs() <= 1e-12 * scale);
        }

        /// Verification is monotone in the tolerance.
        #[test]
        fn check_is_monotone_in_tolerance(
            lambda_shift in -1e-3f64..1e-3,
            tol_exponents in proptest::collection::vec(-12.0f64..-1.0, 4),
        ) {
            let a = example_tensor();
            let mut cand = MEigenPair::new(
                3.0 + lambda_shift,
                VectorPair::new(vec![1.0, 0.0], vec![0.0, 1.0]),
            );
            let mut tols: Vec<f64> = tol_exponents.iter().map(|e| 10f64.powf(*e)).collect();
            tols.sort_by(|p, q| p.partial_cmp(q).unwrap());
            let mut seen_true = false;
            for tol in tols {
                let ok = a.check_m_eigenpair(&mut cand, tol).unwrap();
                proptest::prop_assert!(ok || !seen_true, "verification flipped back to false");
                seen_true |= ok;
            }
        }
    }
}
