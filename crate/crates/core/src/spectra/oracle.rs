//! Exhaustive M-eigenpair enumeration for small tensors (m, n <= 3).
//!
//! For a fixed unit x the stationary y on its sphere are exactly the unit
//! eigenvectors of the symmetric matrix C(x) (since h(x, .) = C(x) y), and
//! symmetrically for fixed y with B(y). The scan therefore walks an angular
//! grid over one sphere, takes the exact eigenvector fan on the other side,
//! and measures only the remaining stationarity defect. Local minima of
//! that defect over the grid (per eigenvalue branch) seed damped Newton
//! refinement; verified, sign-canonicalized pairs are deduplicated modulo
//! the (x, y) -> (+-x, +-y) symmetry.

use super::newton::newton_polish;
use crate::error::{Error, Result};
use crate::structure::classify_eigenpair;
use crate::tensor::{canonical_sign, dot, BiquadraticTensor, EigenClass, MEigenPair, VectorPair};

/// Grid-point budget per residual branch; plateaus (every point a minimum,
/// as on the zero tensor) are stride-subsampled down to this size.
const BRANCH_CANDIDATE_CAP: usize = 1500;
/// Overall candidate budget entering Newton refinement.
const TOTAL_CANDIDATE_CAP: usize = 4096;
/// Two eigenpairs within this distance in (lambda, |x|, |y|) are the same.
const DEDUP_DISTANCE: f64 = 1e-6;
/// A lambda level carrying more than this many distinct pairs is treated
/// as a continuum (zero or isotropic-like tensors) and collapsed to one
/// representative.
const CONTINUUM_GROUP: usize = 12;

struct SphereGrid {
    points: Vec<Vec<f64>>,
    shape: GridShape,
}

enum GridShape {
    /// Half-circle parametrization (cos t, sin t), t in [0, pi].
    Line(usize),
    /// Upper hemisphere in spherical coordinates, phi-major; theta wraps.
    Hemisphere { nphi: usize, ntheta: usize },
}

fn sphere_grid(dim: usize, grid: usize) -> SphereGrid {
    match dim {
        2 => {
            let count = grid.max(8);
            let points = (0..count)
                .map(|i| {
                    let t = std::f64::consts::PI * i as f64 / (count - 1) as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            SphereGrid {
                points,
                shape: GridShape::Line(count),
            }
        }
        3 => {
            let nphi = (grid / 4).max(8) + 1;
            let ntheta = grid.max(16);
            let mut points = Vec::with_capacity(nphi * ntheta);
            for i in 0..nphi {
                let phi = std::f64::consts::FRAC_PI_2 * i as f64 / (nphi - 1) as f64;
                for j in 0..ntheta {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / ntheta as f64;
                    points.push(vec![
                        phi.sin() * theta.cos(),
                        phi.sin() * theta.sin(),
                        phi.cos(),
                    ]);
                }
            }
            SphereGrid {
                points,
                shape: GridShape::Hemisphere { nphi, ntheta },
            }
        }
        _ => unreachable!("oracle sizes are validated to 2 or 3"),
    }
}

fn local_minima(res: &[f64], shape: &GridShape) -> Vec<usize> {
    let mut out = Vec::new();
    match *shape {
        GridShape::Line(count) => {
            for i in 0..count {
                let left_ok = i == 0 || res[i] <= res[i - 1];
                let right_ok = i + 1 == count || res[i] <= res[i + 1];
                if left_ok && right_ok {
                    out.push(i);
                }
            }
        }
        GridShape::Hemisphere { nphi, ntheta } => {
            for i in 0..nphi {
                for j in 0..ntheta {
                    let p = i * ntheta + j;
                    let v = res[p];
                    let mut is_min = true;
                    if i > 0 && v > res[(i - 1) * ntheta + j] {
                        is_min = false;
                    }
                    if is_min && i + 1 < nphi && v > res[(i + 1) * ntheta + j] {
                        is_min = false;
                    }
                    let jl = (j + ntheta - 1) % ntheta;
                    let jr = (j + 1) % ntheta;
                    if is_min && (v > res[i * ntheta + jl] || v > res[i * ntheta + jr]) {
                        is_min = false;
                    }
                    if is_min {
                        out.push(p);
                    }
                }
            }
        }
    }
    if out.len() > BRANCH_CANDIDATE_CAP {
        let stride = out.len().div_ceil(BRANCH_CANDIDATE_CAP);
        out = out.into_iter().step_by(stride).collect();
    }
    out
}

/// Jacobi eigendecomposition of a k x k symmetric matrix (k <= 3). Returns
/// eigenvalues ascending with matching unit eigenvectors, each sign-fixed so
/// its largest-magnitude coordinate is positive.
pub(crate) fn sym_eigen_small(mat: &[f64], k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut a = mat.to_vec();
    let mut v = vec![0.0; k * k];
    for i in 0..k {
        v[i * k + i] = 1.0;
    }
    let scale = a
        .iter()
        .fold(0.0f64, |acc, c| acc.max(c.abs()))
        .max(1e-300);
    for _ in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..k {
            for q in (p + 1)..k {
                off = off.max(a[p * k + q].abs());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[p * k + q];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let theta = (a[q * k + q] - a[p * k + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..k {
                    let aip = a[i * k + p];
                    let aiq = a[i * k + q];
                    a[i * k + p] = c * aip - s * aiq;
                    a[i * k + q] = s * aip + c * aiq;
                }
                for j in 0..k {
                    let apj = a[p * k + j];
                    let aqj = a[q * k + j];
                    a[p * k + j] = c * apj - s * aqj;
                    a[q * k + j] = s * apj + c * aqj;
                }
                for i in 0..k {
                    let vip = v[i * k + p];
                    let viq = v[i * k + q];
                    v[i * k + p] = c * vip - s * viq;
                    v[i * k + q] = s * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&p, &q| a[p * k + p].partial_cmp(&a[q * k + q]).unwrap());
    let mut vals = Vec::with_capacity(k);
    let mut vecs = Vec::with_capacity(k);
    for &col in &order {
        vals.push(a[col * k + col]);
        let mut vec_col: Vec<f64> = (0..k).map(|i| v[i * k + col]).collect();
        let lead = vec_col
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        if vec_col[lead] < 0.0 {
            vec_col.iter_mut().for_each(|c| *c = -*c);
        }
        vecs.push(vec_col);
    }
    (vals, vecs)
}

/// Stationarity defect of x for the fixed partner y: || B(y) x - (x.B x) x ||_inf.
fn x_stationarity_defect(a: &BiquadraticTensor, x: &[f64], y: &[f64]) -> f64 {
    let m = a.m();
    let b = a.x_quadratic_matrix(y);
    let gx: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|k| b[i * m + k] * x[k]).sum())
        .collect();
    let lam = dot(&gx, x);
    gx.iter()
        .zip(x)
        .map(|(gi, xi)| (gi - lam * xi).abs())
        .fold(0.0, f64::max)
}

fn y_stationarity_defect(a: &BiquadraticTensor, x: &[f64], y: &[f64]) -> f64 {
    let n = a.n();
    let c = a.y_quadratic_matrix(x);
    let hy: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| c[j * n + k] * y[k]).sum())
        .collect();
    let mu = dot(&hy, y);
    hy.iter()
        .zip(y)
        .map(|(hj, yj)| (hj - mu * yj).abs())
        .fold(0.0, f64::max)
}

fn scan_x_side(a: &BiquadraticTensor, grid: usize, out: &mut Vec<(Vec<f64>, Vec<f64>)>) {
    let n = a.n();
    let sg = sphere_grid(a.m(), grid);
    let np = sg.points.len();
    let mut res = vec![vec![f64::INFINITY; np]; n];
    for (p_idx, x) in sg.points.iter().enumerate() {
        let c = a.y_quadratic_matrix(x);
        let (_, vecs) = sym_eigen_small(&c, n);
        for (k, y) in vecs.iter().enumerate() {
            res[k][p_idx] = x_stationarity_defect(a, x, y);
        }
    }
    for branch in res.iter() {
        for p_idx in local_minima(branch, &sg.shape) {
            let x = &sg.points[p_idx];
            let c = a.y_quadratic_matrix(x);
            let (_, vecs) = sym_eigen_small(&c, n);
            for y in vecs {
                out.push((x.clone(), y));
            }
        }
    }
}

fn scan_y_side(a: &BiquadraticTensor, grid: usize, out: &mut Vec<(Vec<f64>, Vec<f64>)>) {
    let m = a.m();
    let sg = sphere_grid(a.n(), grid);
    let np = sg.points.len();
    let mut res = vec![vec![f64::INFINITY; np]; m];
    for (p_idx, y) in sg.points.iter().enumerate() {
        let b = a.x_quadratic_matrix(y);
        let (_, vecs) = sym_eigen_small(&b, m);
        for (k, x) in vecs.iter().enumerate() {
            res[k][p_idx] = y_stationarity_defect(a, x, y);
        }
    }
    for branch in res.iter() {
        for p_idx in local_minima(branch, &sg.shape) {
            let y = &sg.points[p_idx];
            let b = a.x_quadratic_matrix(y);
            let (_, vecs) = sym_eigen_small(&b, m);
            for x in vecs {
                out.push((x, y.clone()));
            }
        }
    }
}

fn vec_distance_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u.abs() - v.abs()).abs())
        .fold(0.0, f64::max)
}

/// Enumerates the distinct M-eigenpairs of a small tensor (2 <= m, n <= 3)
/// by angular grid scan plus Newton refinement; only pairs whose verified
/// residual is at most `tol` are returned, sorted by eigenvalue. `grid`
/// sets the angular resolution (points per half-turn; 721 gives 0.25
/// degrees). Pairs are stored sign-canonicalized, nonnegative whenever a
/// flip achieves it.
pub fn enumerate_m_eigenpairs_small(
    a: &BiquadraticTensor,
    grid: usize,
    tol: f64,
) -> Result<Vec<MEigenPair>> {
    if a.m() > 3 || a.n() > 3 {
        return Err(Error::SizeTooLargeForOracle { m: a.m(), n: a.n() });
    }
    if a.m() < 2 || a.n() < 2 {
        return Err(Error::ModeTooSmall {
            m: a.m(),
            n: a.n(),
            required: 2,
        });
    }
    if tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }

    let mut candidates: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    scan_x_side(a, grid, &mut candidates);
    scan_y_side(a, grid, &mut candidates);
    for i in 0..a.m() {
        for j in 0..a.n() {
            let mut x = vec![0.0; a.m()];
            let mut y = vec![0.0; a.n()];
            x[i] = 1.0;
            y[j] = 1.0;
            candidates.push((x, y));
        }
    }
    if candidates.len() > TOTAL_CANDIDATE_CAP {
        let stride = candidates.len().div_ceil(TOTAL_CANDIDATE_CAP);
        candidates = candidates.into_iter().step_by(stride).collect();
    }

    let mut found: Vec<MEigenPair> = Vec::new();
    for (mut x, mut y) in candidates {
        newton_polish(a, &mut x, &mut y);
        let pair = match VectorPair::new(x, y).normalized() {
            Some(p) => p,
            None => continue,
        };
        let lambda = a.biquadratic_form(&pair)?;
        let mut cand = MEigenPair::new(lambda, pair);
        if !a.check_m_eigenpair(&mut cand, tol)? {
            continue;
        }
        let sx = canonical_sign(&cand.pair.x);
        let sy = canonical_sign(&cand.pair.y);
        cand.pair.x.iter_mut().for_each(|c| *c *= sx);
        cand.pair.y.iter_mut().for_each(|c| *c *= sy);

        let mut duplicate = false;
        for kept in found.iter_mut() {
            if (kept.lambda - cand.lambda).abs() < DEDUP_DISTANCE
                && vec_distance_abs(&kept.pair.x, &cand.pair.x) < DEDUP_DISTANCE
                && vec_distance_abs(&kept.pair.y, &cand.pair.y) < DEDUP_DISTANCE
            {
                if cand.residual < kept.residual {
                    *kept = cand.clone();
                }
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            found.push(cand);
        }
    }

    found.sort_by(|p, q| p.lambda.partial_cmp(&q.lambda).unwrap());

    // Collapse continuum levels: a flat form (zero or isotropic tensors)
    // makes every grid point an eigenpair at the same lambda.
    let mut collapsed: Vec<MEigenPair> = Vec::new();
    let mut start = 0;
    while start < found.len() {
        let mut end = start + 1;
        while end < found.len() && found[end].lambda - found[start].lambda < DEDUP_DISTANCE {
            end += 1;
        }
        if end - start > CONTINUUM_GROUP {
            let rep = found[start..end]
                .iter()
                .max_by(|p, q| {
                    let mp = min_coordinate(p);
                    let mq = min_coordinate(q);
                    mp.partial_cmp(&mq).unwrap()
                })
                .unwrap()
                .clone();
            collapsed.push(rep);
        } else {
            collapsed.extend_from_slice(&found[start..end]);
        }
        start = end;
    }

    let classify_tol = tol.max(1e-8);
    for pair in collapsed.iter_mut() {
        pair.class = classify_eigenpair(pair, classify_tol).unwrap_or(EigenClass::M);
    }
    Ok(collapsed)
}

fn min_coordinate(p: &MEigenPair) -> f64 {
    let mx = p.pair.x.iter().cloned().fold(f64::INFINITY, f64::min);
    let my = p.pair.y.iter().cloned().fold(f64::INFINITY, f64::min);
    mx.min(my)
}
