//! Damped Newton refinement of approximate M-eigenpairs.
//!
//! Works on the square system in the unknowns (x, y, lambda, mu):
//!
//! ```text
//! F = [ g(x,y) - lambda x ; h(x,y) - mu y ; (x.x - 1)/2 ; (y.y - 1)/2 ]
//! ```
//!
//! At a solution lambda = mu automatically, because both equal the form
//! value through the homogeneity identities g.x = f = h.y. Steps are damped
//! by halving until the residual norm decreases; quadratic local
//! convergence cleans grid-resolution candidates to machine precision.

use crate::tensor::{dot, norm2, BiquadraticTensor};

/// Mixed second-derivative block D with D[i][j] = d g_i / d y_j
/// (equivalently d h_j / d x_i). Row-major m x n.
fn mixed_jacobian(a: &BiquadraticTensor, x: &[f64], y: &[f64]) -> Vec<f64> {
    let (m, n) = (a.m(), a.n());
    let mut d = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..m {
                for l in 0..n {
                    let w = x[k] * y[l];
                    if w == 0.0 {
                        continue;
                    }
                    s += (a.get(k, j, i, l)
                        + a.get(k, l, i, j)
                        + a.get(i, j, k, l)
                        + a.get(i, l, k, j))
                        * w;
                }
            }
            d[i * n + j] = 0.5 * s;
        }
    }
    d
}

/// In-place Gaussian elimination with partial pivoting; returns false when
/// the matrix is numerically singular.
fn solve_dense(a: &mut [f64], b: &mut [f64], k: usize) -> bool {
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in (col + 1)..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-14 * scale {
            return false;
        }
        if piv != col {
            for c in 0..k {
                a.swap(col * k + c, piv * k + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * k + col];
        for r in (col + 1)..k {
            let factor = a[r * k + col] / d;
            if factor == 0.0 {
                continue;
            }
            for c in col..k {
                a[r * k + c] -= factor * a[col * k + c];
            }
            b[r] -= factor * b[col];
        }
    }
    for col in (0..k).rev() {
        let mut s = b[col];
        for c in (col + 1)..k {
            s -= a[col * k + c] * b[c];
        }
        b[col] = s / a[col * k + col];
    }
    true
}

fn residual_vec(a: &BiquadraticTensor, x: &[f64], y: &[f64], lambda: f64, mu: f64) -> Vec<f64> {
    let (m, n) = (a.m(), a.n());
    let pair = crate::tensor::VectorPair::new(x.to_vec(), y.to_vec());
    let g = a.contract_g(&pair).expect("dims fixed");
    let h = a.contract_h(&pair).expect("dims fixed");
    let mut f = Vec::with_capacity(m + n + 2);
    for i in 0..m {
        f.push(g[i] - lambda * x[i]);
    }
    for j in 0..n {
        f.push(h[j] - mu * y[j]);
    }
    f.push(0.5 * (dot(x, x) - 1.0));
    f.push(0.5 * (dot(y, y) - 1.0));
    f
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, c| acc.max(c.abs()))
}

/// Refines (x, y) toward an exact M-eigenpair. Returns the final residual
/// max-norm of the square system; x and y are updated in place only along
/// accepted (residual-decreasing) steps. Iteration stops at 50 Newton
/// steps, on a failed line search, or once the residual reaches the
/// machine-level floor for the tensor's magnitude.
pub(crate) fn newton_polish(a: &BiquadraticTensor, x: &mut Vec<f64>, y: &mut Vec<f64>) -> f64 {
    let (m, n) = (a.m(), a.n());
    let k = m + n + 2;
    let scale = a
        .entries()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let floor = 1e-14 * scale;

    let pair = crate::tensor::VectorPair::new(x.clone(), y.clone());
    let g = match a.contract_g(&pair) {
        Ok(g) => g,
        Err(_) => return f64::INFINITY,
    };
    let h = a.contract_h(&pair).expect("dims checked");
    let mut lambda = dot(&g, x);
    let mut mu = dot(&h, y);

    let mut f = residual_vec(a, x, y, lambda, mu);
    let mut best = inf_norm(&f);

    for _ in 0..50 {
        if best <= floor {
            break;
        }
        let b_mat = a.x_quadratic_matrix(y);
        let c_mat = a.y_quadratic_matrix(x);
        let d_mat = mixed_jacobian(a, x, y);

        let mut jac = vec![0.0; k * k];
        for i in 0..m {
            for c in 0..m {
                jac[i * k + c] = b_mat[i * m + c];
            }
            jac[i * k + i] -= lambda;
            for c in 0..n {
                jac[i * k + m + c] = d_mat[i * n + c];
            }
            jac[i * k + m + n] = -x[i];
        }
        for j in 0..n {
            let row = m + j;
            for c in 0..m {
                jac[row * k + c] = d_mat[c * n + j];
            }
            for c in 0..n {
                jac[row * k + m + c] = c_mat[j * n + c];
            }
            jac[row * k + m + j] -= mu;
            jac[row * k + m + n + 1] = -y[j];
        }
        for c in 0..m {
            jac[(m + n) * k + c] = x[c];
        }
        for c in 0..n {
            jac[(m + n + 1) * k + m + c] = y[c];
        }

        let mut step: Vec<f64> = f.iter().map(|v| -v).collect();
        if !solve_dense(&mut jac, &mut step, k) {
            break;
        }

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let nx: Vec<f64> = (0..m).map(|i| x[i] + t * step[i]).collect();
            let ny: Vec<f64> = (0..n).map(|j| y[j] + t * step[m + j]).collect();
            let nl = lambda + t * step[m + n];
            let nm = mu + t * step[m + n + 1];
            if norm2(&nx) < 1e-6 || norm2(&ny) < 1e-6 {
                t *= 0.5;
                continue;
            }
            let nf = residual_vec(a, &nx, &ny, nl, nm);
            let nr = inf_norm(&nf);
            if nr < best {
                *x = nx;
                *y = ny;
                lambda = nl;
                mu = nm;
                f = nf;
                best = nr;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    best
}
