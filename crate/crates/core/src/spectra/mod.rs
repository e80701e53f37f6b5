//! Eigenvalue computation for nonnegative biquadratic tensors.
//!
//! The driver is a shifted alternating iteration with simultaneous x/y
//! updates: `x <- normalize_+(g + tau x)`, `y <- normalize_+(h + tau y)`,
//! tracked by the ratio bounds
//!
//! ```text
//! v(x,y) = min { g_i/x_i, h_j/y_j : supported coordinates }
//! u(x,y) = max { ... same set ... }
//! ```
//!
//! Any feasible v is a lower bound on lambda_max (sup v equals lambda_max,
//! which in turn equals the M-spectral radius for nonnegative tensors), so
//! the gap u - v certifies convergence: at an exact eigenpair every defined
//! ratio coincides with lambda. Each restart finishes with projected
//! gradient ascent on the sphere product and a damped Newton refinement;
//! the returned value is the best over restarts and is always a valid
//! lower bound on lambda_max.
//!
//! Restarts are independent and run in parallel; per-restart seeds derive
//! from the configured seed plus the restart index, so outcomes do not
//! depend on worker scheduling.

mod newton;
mod oracle;

pub use oracle::enumerate_m_eigenpairs_small;

use crate::error::{Error, Result};
use crate::structure::classify_eigenpair;
use crate::tensor::{
    dot, norm2, BiquadraticTensor, EigenClass, MEigenPair, VectorPair, SUPPORT_THRESHOLD,
};
use newton::newton_polish;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Parameters of the bound-driven iteration.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Sweep budget per restart.
    pub max_iter: usize,
    /// Convergence threshold on the bound gap u - v.
    pub tol: f64,
    /// Stabilizing shift tau; `None` selects the largest diagonal-style
    /// entry magnitude plus one.
    pub shift: Option<f64>,
    /// Number of independent restarts (the first starts from the uniform
    /// positive pair, the rest from folded Gaussian draws).
    pub restarts: usize,
    /// Base seed; restart r uses seed + r.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iter: 5000,
            tol: 1e-10,
            shift: None,
            restarts: 32,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(Error::NonPositiveTolerance(self.tol));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if let Some(s) = self.shift {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "shift must be nonnegative and finite, got {s}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of [`solve_lambda_max`].
#[derive(Clone, Debug)]
pub struct SolverOutcome {
    pub best: MEigenPair,
    /// Final v at the returned eigenvector pair.
    pub lower_bound: f64,
    /// Final u at the returned eigenvector pair.
    pub upper_bound: f64,
    pub converged: bool,
    /// Sweeps used by the winning restart.
    pub iterations_used: usize,
    /// Per-restart lambda estimates, in restart order.
    pub restart_values: Vec<f64>,
}

/// Result of [`min_m_eigenvalue_probe`].
#[derive(Clone, Debug)]
pub struct ProbeOutcome {
    /// Least stationary value of the form found; an upper bound on the true
    /// minimal M-eigenvalue.
    pub value: f64,
    pub converged: bool,
    /// The pair attaining `value`.
    pub witness: VectorPair,
}

fn require_nonnegative(a: &BiquadraticTensor) -> Result<()> {
    if let Some((i1, j1, i2, j2, value)) = a.first_negative_entry() {
        return Err(Error::NegativeEntry { i1, j1, i2, j2, value });
    }
    Ok(())
}

fn require_m2(a: &BiquadraticTensor) -> Result<()> {
    if a.m() < 2 || a.n() < 2 {
        return Err(Error::ModeTooSmall {
            m: a.m(),
            n: a.n(),
            required: 2,
        });
    }
    Ok(())
}

/// Ratio bounds over the supported coordinates; `None` when either vector
/// has no coordinate above the support threshold.
fn ratio_bounds(x: &[f64], y: &[f64], g: &[f64], h: &[f64]) -> Option<(f64, f64)> {
    let mut v = f64::INFINITY;
    let mut u = f64::NEG_INFINITY;
    let mut seen_x = false;
    let mut seen_y = false;
    for (xi, gi) in x.iter().zip(g) {
        if *xi > SUPPORT_THRESHOLD {
            let r = gi / xi;
            v = v.min(r);
            u = u.max(r);
            seen_x = true;
        }
    }
    for (yj, hj) in y.iter().zip(h) {
        if *yj > SUPPORT_THRESHOLD {
            let r = hj / yj;
            v = v.min(r);
            u = u.max(r);
            seen_y = true;
        }
    }
    (seen_x && seen_y).then_some((v, u))
}

/// The Collatz-style lower/upper bound pair (v, u) at a nonnegative,
/// nonzero vector pair. Ratios are restricted to supported coordinates to
/// avoid the indeterminate form 0/0.
pub fn collatz_bounds(a: &BiquadraticTensor, pair: &VectorPair) -> Result<(f64, f64)> {
    require_nonnegative(a)?;
    for (which, v) in [("x", &pair.x), ("y", &pair.y)] {
        if let Some((index, &value)) = v.iter().enumerate().find(|(_, c)| **c < 0.0) {
            return Err(Error::NegativeCoordinate { which, index, value });
        }
    }
    let g = a.contract_g(pair)?;
    let h = a.contract_h(pair)?;
    match ratio_bounds(&pair.x, &pair.y, &g, &h) {
        Some(bounds) => Ok(bounds),
        None => {
            let which = if pair.x.iter().all(|c| *c <= SUPPORT_THRESHOLD) {
                "x"
            } else {
                "y"
            };
            Err(Error::ZeroVector { which })
        }
    }
}

fn normalize_clamped(w: &mut [f64]) -> bool {
    for c in w.iter_mut() {
        if *c < 0.0 {
            *c = 0.0;
        }
    }
    let nrm = norm2(w);
    if nrm == 0.0 || !nrm.is_finite() {
        return false;
    }
    w.iter_mut().for_each(|c| *c /= nrm);
    true
}

fn uniform_positive_pair(m: usize, n: usize) -> VectorPair {
    VectorPair::new(
        vec![1.0 / (m as f64).sqrt(); m],
        vec![1.0 / (n as f64).sqrt(); n],
    )
}

fn folded_gaussian_pair<R: Rng>(m: usize, n: usize, rng: &mut R) -> VectorPair {
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

fn signed_gaussian_pair<R: Rng>(m: usize, n: usize, rng: &mut R) -> VectorPair {
    loop {
        let x: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        if let Some(p) = VectorPair::new(x, y).normalized() {
            return p;
        }
    }
}

/// Projected gradient optimization of the form over the sphere product,
/// in place. Backtracking keeps accepted values monotone; returns the
/// final form value.
fn projected_gradient_opt(
    a: &BiquadraticTensor,
    pair: &mut VectorPair,
    maximize: bool,
    max_iter: usize,
) -> f64 {
    let sgn = if maximize { 1.0 } else { -1.0 };
    let scale = a
        .entries()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let mut f = a.biquadratic_form(pair).expect("dims fixed");
    let mut step = 0.5;
    for _ in 0..max_iter {
        let g = a.contract_g(pair).expect("dims fixed");
        let h = a.contract_h(pair).expect("dims fixed");
        let gx = dot(&g, &pair.x);
        let hy = dot(&h, &pair.y);
        let rx: Vec<f64> = g.iter().zip(&pair.x).map(|(gi, xi)| gi - gx * xi).collect();
        let ry: Vec<f64> = h.iter().zip(&pair.y).map(|(hj, yj)| hj - hy * yj).collect();
        let grad_norm = rx
            .iter()
            .chain(&ry)
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
        if grad_norm <= 1e-13 * scale {
            break;
        }
        let mut accepted = false;
        for _ in 0..45 {
            let x: Vec<f64> = pair
                .x
                .iter()
                .zip(&rx)
                .map(|(xi, ri)| xi + sgn * step * ri)
                .collect();
            let y: Vec<f64> = pair
                .y
                .iter()
                .zip(&ry)
                .map(|(yj, rj)| yj + sgn * step * rj)
                .collect();
            if let Some(candidate) = VectorPair::new(x, y).normalized() {
                let fc = a.biquadratic_form(&candidate).expect("dims fixed");
                if sgn * (fc - f) > 0.0 {
                    *pair = candidate;
                    f = fc;
                    step = (step * 2.0).min(8.0);
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    f
}

struct RestartResult {
    lambda: f64,
    pair: VectorPair,
    converged: bool,
    iterations: usize,
}

fn run_restart(
    a: &BiquadraticTensor,
    cfg: &SolverConfig,
    shift: f64,
    restart_index: usize,
) -> RestartResult {
    let (m, n) = (a.m(), a.n());
    let mut pair = if restart_index == 0 {
        uniform_positive_pair(m, n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart_index as u64));
        folded_gaussian_pair(m, n, &mut rng)
    };

    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.max_iter {
        iterations += 1;
        let g = a.contract_g(&pair).expect("dims fixed");
        let h = a.contract_h(&pair).expect("dims fixed");
        match ratio_bounds(&pair.x, &pair.y, &g, &h) {
            Some((v, u)) => {
                if u - v <= cfg.tol {
                    converged = true;
                    break;
                }
            }
            None => break,
        }
        let mut nx: Vec<f64> = g
            .iter()
            .zip(&pair.x)
            .map(|(gi, xi)| gi + shift * xi)
            .collect();
        let mut ny: Vec<f64> = h
            .iter()
            .zip(&pair.y)
            .map(|(hj, yj)| hj + shift * yj)
            .collect();
        let ok_x = normalize_clamped(&mut nx);
        let ok_y = normalize_clamped(&mut ny);
        if ok_x {
            pair.x = nx;
        }
        if ok_y {
            pair.y = ny;
        }
        if !ok_x && !ok_y {
            break;
        }
    }

    projected_gradient_opt(a, &mut pair, true, 600);
    // For a nonnegative tensor the form never decreases under taking
    // absolute values, so fold any stray negative coordinates back.
    pair.x.iter_mut().for_each(|c| *c = c.abs());
    pair.y.iter_mut().for_each(|c| *c = c.abs());
    if let Some(p) = pair.clone().normalized() {
        pair = p;
    }
    let f_before = a.biquadratic_form(&pair).expect("dims fixed");
    let r_before = a.eigen_residual(&pair, f_before).expect("dims fixed");

    let mut refined = pair.clone();
    newton_polish(a, &mut refined.x, &mut refined.y);
    let polished = refined.clone().normalized();
    if let Some(mut q) = polished {
        let min_coord = q
            .x
            .iter()
            .chain(&q.y)
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let fq = a.biquadratic_form(&q).expect("dims fixed");
        let rq = a.eigen_residual(&q, fq).expect("dims fixed");
        if rq < r_before && min_coord >= -1e-9 && fq >= f_before - 1e-9 * (1.0 + f_before.abs()) {
            q.x.iter_mut().for_each(|c| *c = c.max(0.0));
            q.y.iter_mut().for_each(|c| *c = c.max(0.0));
            if let Some(qn) = q.normalized() {
                pair = qn;
            }
        }
    }

    let lambda = a.biquadratic_form(&pair).expect("dims fixed");
    RestartResult {
        lambda,
        pair,
        converged,
        iterations,
    }
}

/// Computes the largest M-eigenvalue of a nonnegative tensor by multi-start
/// bound-driven iteration. The returned lambda is always a valid lower
/// bound on the true maximum (the form is evaluated at feasible points);
/// reaching the maximum itself is heuristic, backed by the restart sweep.
/// Non-convergence is reported through `converged`, not as an error.
pub fn solve_lambda_max(a: &BiquadraticTensor, cfg: &SolverConfig) -> Result<SolverOutcome> {
    require_nonnegative(a)?;
    require_m2(a)?;
    cfg.validate()?;
    let shift = cfg.shift.unwrap_or_else(|| a.max_diagonal_magnitude() + 1.0);

    let results: Vec<RestartResult> = crate::run_in_pool(|| {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|r| run_restart(a, cfg, shift, r))
            .collect()
    });

    let mut best_idx = 0;
    for (idx, r) in results.iter().enumerate() {
        if r.lambda > results[best_idx].lambda {
            best_idx = idx;
        }
    }
    let restart_values: Vec<f64> = results.iter().map(|r| r.lambda).collect();
    let winner = &results[best_idx];

    let mut best = MEigenPair::new(winner.lambda, winner.pair.clone());
    a.check_m_eigenpair(&mut best, 10.0 * cfg.tol)?;
    best.class = classify_eigenpair(&best, (10.0 * cfg.tol).max(1e-8)).unwrap_or(EigenClass::M);

    let g = a.contract_g(&best.pair)?;
    let h = a.contract_h(&best.pair)?;
    let (lower_bound, upper_bound) =
        ratio_bounds(&best.pair.x, &best.pair.y, &g, &h).unwrap_or((best.lambda, best.lambda));
    let converged = winner.converged || upper_bound - lower_bound <= cfg.tol;

    Ok(SolverOutcome {
        best,
        lower_bound,
        upper_bound,
        converged,
        iterations_used: winner.iterations,
        restart_values,
    })
}

/// Estimates rho* = sup v over the nonnegative sphere product from
/// `samples` folded-Gaussian draws plus the solver's best eigenvector pair
/// (where v equals lambda). Never exceeds lambda_max beyond tolerance.
pub fn estimate_rho_star(a: &BiquadraticTensor, samples: usize, seed: u64) -> Result<f64> {
    let (_, best) = sampled_bounds(a, samples, seed)?;
    Ok(best)
}

/// Estimates rho_* = inf u over the same sample set. Instrumentation only:
/// no attainment statement is made for the infimum.
pub fn estimate_rho_lower(a: &BiquadraticTensor, samples: usize, seed: u64) -> Result<f64> {
    let (low, _) = sampled_bounds(a, samples, seed)?;
    Ok(low)
}

fn sampled_bounds(a: &BiquadraticTensor, samples: usize, seed: u64) -> Result<(f64, f64)> {
    require_nonnegative(a)?;
    require_m2(a)?;
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let outcome = solve_lambda_max(a, &SolverConfig::with_seed(seed))?;
    let (v0, u0) = collatz_bounds(a, &outcome.best.pair)?;
    let mut sup_v = v0;
    let mut inf_u = u0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x517c_c1b7_2722_0a95));
    for _ in 0..samples {
        let pair = folded_gaussian_pair(a.m(), a.n(), &mut rng);
        let g = a.contract_g(&pair)?;
        let h = a.contract_h(&pair)?;
        if let Some((v, u)) = ratio_bounds(&pair.x, &pair.y, &g, &h) {
            sup_v = sup_v.max(v);
            inf_u = inf_u.min(u);
        }
    }
    Ok((inf_u, sup_v))
}

/// Multi-start projected-gradient minimization of the form over the sphere
/// product; serves as a one-sided positive semi-definiteness probe. The
/// returned value is an upper bound on the minimal M-eigenvalue: a
/// strictly negative probe certifies an indefinite tensor, a nonnegative
/// probe is consistent with (but does not prove) semi-definiteness.
/// Negative tensor entries are allowed.
pub fn min_m_eigenvalue_probe(a: &BiquadraticTensor, cfg: &SolverConfig) -> Result<ProbeOutcome> {
    cfg.validate()?;
    let (m, n) = (a.m(), a.n());
    let mut starts: Vec<VectorPair> = vec![uniform_positive_pair(m, n)];
    for i in 0..m {
        for j in 0..n {
            let mut x = vec![0.0; m];
            let mut y = vec![0.0; n];
            x[i] = 1.0;
            y[j] = 1.0;
            starts.push(VectorPair::new(x, y));
        }
    }
    for r in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
        starts.push(signed_gaussian_pair(m, n, &mut rng));
    }

    let scale = a
        .entries()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let pga_iters = cfg.max_iter.min(2000);

    let evaluated: Vec<(f64, VectorPair, f64)> = crate::run_in_pool(|| {
        starts
            .into_par_iter()
            .map(|mut pair| {
                projected_gradient_opt(a, &mut pair, false, pga_iters);
                let mut refined = pair.clone();
                let res = newton_polish(a, &mut refined.x, &mut refined.y);
                if let Some(q) = refined.normalized() {
                    let fq = a.biquadratic_form(&q).expect("dims fixed");
                    let fp = a.biquadratic_form(&pair).expect("dims fixed");
                    if res < 1e-10 * scale && fq <= fp + 1e-9 * (1.0 + fp.abs()) {
                        return (fq, q, res);
                    }
                }
                let fp = a.biquadratic_form(&pair).expect("dims fixed");
                let rp = a.eigen_residual(&pair, fp).expect("dims fixed");
                (fp, pair, rp)
            })
            .collect()
    });

    let mut best = 0;
    for (idx, cand) in evaluated.iter().enumerate() {
        if cand.0 < evaluated[best].0 {
            best = idx;
        }
    }
    let (value, witness, residual) = evaluated.into_iter().nth(best).expect("nonempty");
    Ok(ProbeOutcome {
        value,
        converged: residual <= 1e-8 * scale,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{example_tensor, isotropic};

    fn pair(x: &[f64], y: &[f64]) -> VectorPair {
        VectorPair::new(x.to_vec(), y.to_vec())
    }

    #[test]
    fn bounds_at_example_eigenpair_coincide() {
        let a = example_tensor();
        let (v, u) = collatz_bounds(&a, &pair(&[1.0, 0.0], &[0.0, 1.0])).unwrap();
        assert_eq!((v, u), (3.0, 3.0));
    }

    #[test]
    fn bounds_on_isotropic_tensor() {
        let c = 0.75;
        let a = isotropic(3, 2, c);
        let p = pair(&[0.6, 0.8, 0.0], &[0.28, 0.96]);
        let (v, u) = collatz_bounds(&a, &p).unwrap();
        assert!((v - c).abs() < 1e-12 && (u - c).abs() < 1e-12);
    }

    #[test]
    fn bounds_on_zero_tensor() {
        let a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (v, u) = collatz_bounds(&a, &pair(&[s, s], &[s, s])).unwrap();
        assert_eq!((v, u), (0.0, 0.0));
    }

    #[test]
    fn bounds_reject_bad_inputs() {
        let a = example_tensor();
        assert!(matches!(
            collatz_bounds(&a, &pair(&[-0.5, 1.0], &[1.0, 0.0])),
            Err(Error::NegativeCoordinate { .. })
        ));
        assert!(matches!(
            collatz_bounds(&a, &pair(&[0.0, 0.0], &[1.0, 0.0])),
            Err(Error::ZeroVector { .. })
        ));
        let mut neg = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        neg.set(0, 0, 0, 0, -1.0);
        assert!(matches!(
            collatz_bounds(&neg, &pair(&[1.0, 0.0], &[1.0, 0.0])),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn solver_finds_lambda_max_on_example_tensor() {
        // The maximum sits at an interior positive pair with
        // lambda = (3 + sqrt(10))/2, above the largest boundary value 3.
        let a = example_tensor();
        let cfg = SolverConfig {
            restarts: 8,
            ..Default::default()
        };
        let lambda_max = (3.0 + 10.0f64.sqrt()) / 2.0;
        let out = solve_lambda_max(&a, &cfg).unwrap();
        assert!(
            (out.best.lambda - lambda_max).abs() < 1e-9,
            "{}",
            out.best.lambda
        );
        assert!(out.converged);
        assert!(out.best.residual <= 1e-9);
        assert!(out.lower_bound <= out.best.lambda + 1e-12);
        assert!(out.best.lambda <= out.upper_bound + cfg.tol);
        assert_eq!(out.restart_values.len(), 8);
        assert_eq!(out.best.class, crate::EigenClass::MPlusPlus);
    }

    #[test]
    fn solver_on_isotropic_and_zero_tensors() {
        let c = 2.0;
        let a = isotropic(2, 3, c);
        let cfg = SolverConfig {
            restarts: 4,
            ..Default::default()
        };
        let out = solve_lambda_max(&a, &cfg).unwrap();
        assert!((out.best.lambda - c).abs() < 1e-9);

        let z = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        let out = solve_lambda_max(&z, &cfg).unwrap();
        assert!(out.best.lambda.abs() < 1e-12);
        assert!(out.converged);
    }

    #[test]
    fn solver_scales_linearly() {
        let a = example_tensor();
        let cfg = SolverConfig {
            restarts: 6,
            ..Default::default()
        };
        let base = solve_lambda_max(&a, &cfg).unwrap().best.lambda;
        for c in [0.5, 4.0] {
            let scaled = solve_lambda_max(&a.scaled(c), &cfg).unwrap().best.lambda;
            assert!((scaled - c * base).abs() <= 1e-9 * c.max(1.0));
        }
    }

    #[test]
    fn solver_rejects_negative_tensors() {
        let mut a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, -1.0);
        assert!(matches!(
            solve_lambda_max(&a, &SolverConfig::default()),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn solver_is_deterministic_given_seed() {
        let a = example_tensor();
        let cfg = SolverConfig {
            restarts: 8,
            seed: 42,
            ..Default::default()
        };
        let r1 = solve_lambda_max(&a, &cfg).unwrap();
        let r2 = solve_lambda_max(&a, &cfg).unwrap();
        assert_eq!(r1.best.lambda.to_bits(), r2.best.lambda.to_bits());
        assert_eq!(r1.restart_values, r2.restart_values);
    }

    #[test]
    fn rho_star_estimates_bracket_lambda_max_on_example() {
        let a = example_tensor();
        let lambda_max = (3.0 + 10.0f64.sqrt()) / 2.0;
        let hi = estimate_rho_star(&a, 200, 3).unwrap();
        assert!((hi - lambda_max).abs() < 1e-8, "rho* estimate {hi}");
        let lo = estimate_rho_lower(&a, 200, 3).unwrap();
        assert!(lo <= hi + 1e-12);
    }

    #[test]
    fn rho_estimates_on_isotropic_and_zero_tensors() {
        let c = 1.5;
        let a = isotropic(2, 2, c);
        let hi = estimate_rho_star(&a, 50, 1).unwrap();
        let lo = estimate_rho_lower(&a, 50, 1).unwrap();
        assert!((hi - c).abs() < 1e-9 && (lo - c).abs() < 1e-9);

        let z = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        assert_eq!(estimate_rho_star(&z, 50, 1).unwrap(), 0.0);
        assert_eq!(estimate_rho_lower(&z, 50, 1).unwrap(), 0.0);
    }

    #[test]
    fn probe_finds_negative_value_of_indefinite_tensor() {
        let mut a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, 1.0);
        a.set(0, 1, 0, 1, -1.0);
        let cfg = SolverConfig {
            restarts: 8,
            ..Default::default()
        };
        let probe = min_m_eigenvalue_probe(&a, &cfg).unwrap();
        assert!((probe.value + 1.0).abs() < 1e-9, "probe {}", probe.value);

        // Independent grid oracle over the angle parametrization.
        let mut grid_min = f64::INFINITY;
        let steps = 720;
        for i in 0..steps {
            for j in 0..steps {
                let t = std::f64::consts::PI * i as f64 / steps as f64;
                let s = std::f64::consts::PI * j as f64 / steps as f64;
                let p = pair(&[t.cos(), t.sin()], &[s.cos(), s.sin()]);
                grid_min = grid_min.min(a.biquadratic_form(&p).unwrap());
            }
        }
        assert!((grid_min - probe.value).abs() < 1e-4);
    }

    #[test]
    fn probe_on_isotropic_tensor_returns_the_constant() {
        let c = 0.8;
        let a = isotropic(2, 2, c);
        let cfg = SolverConfig {
            restarts: 4,
            ..Default::default()
        };
        let probe = min_m_eigenvalue_probe(&a, &cfg).unwrap();
        assert!((probe.value - c).abs() < 1e-10);
    }

    #[test]
    fn oracle_and_solver_agree_on_small_random_tensors() {
        use crate::test_support::random_tensor;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let cfg = SolverConfig {
            restarts: 12,
            ..Default::default()
        };
        for _ in 0..5 {
            let raw = random_tensor(2, 2, &mut rng);
            let entries: Vec<f64> = raw.entries().iter().map(|v| v.abs()).collect();
            let a = crate::BiquadraticTensor::from_entries(2, 2, entries).unwrap();
            let solved = solve_lambda_max(&a, &cfg).unwrap().best.lambda;
            let pairs = enumerate_m_eigenpairs_small(&a, 361, 1e-9).unwrap();
            let oracle_max = pairs
                .iter()
                .map(|p| p.lambda)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                (solved - oracle_max).abs() <= 1e-6,
                "solver {solved} vs oracle {oracle_max}"
            );
        }
    }
}
