//! Structural classification of biquadratic tensors.
//!
//! A tensor is x-reducible when some index `j` and a proper subset
//! `J_x ⊊ [m]` satisfy `a_{i2 j i1 j} + a_{i1 j i2 j} = 0` for every i1 in
//! J_x and i2 outside it; y-reducibility mirrors the roles of the modes.
//! The quasi variants replace the repeated index by an ordered pair of
//! distinct indices: x-quasi-reducibility asks for distinct `j1 ≠ j2` with
//! `a_{i2 j1 i1 j2} + a_{i1 j1 i2 j2} = 0` across the partition.
//!
//! Each predicate is decided in polynomial time by building, per (fixed
//! index or index pair), the simple graph on the partitioned mode whose
//! edges are the nonzero pair-sums; the condition holds exactly when some
//! such graph is disconnected, and any component split is a witness. For
//! nonnegative tensors a zero pair-sum forces both addends to zero, so the
//! nonzero rule and the positive rule coincide.

use crate::error::{Error, Result};
use crate::tensor::{
    flip_to_nonnegative, support, BiquadraticTensor, EigenClass, MEigenPair, SUPPORT_THRESHOLD,
};
use crate::union_find::UnionFind;

/// Witness of x- or y-reducibility: the repeated opposite-mode index and
/// one block of the partition (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct ReducibilityWitness {
    pub fixed: usize,
    pub block: Vec<usize>,
}

/// Witness of quasi-reducibility: the ordered pair of distinct
/// opposite-mode indices and one block of the partition (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiReducibilityWitness {
    pub fixed: (usize, usize),
    pub block: Vec<usize>,
}

/// Aggregated reducibility flags with witnesses for the true ones.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub x_reducible: Option<ReducibilityWitness>,
    pub y_reducible: Option<ReducibilityWitness>,
    pub x_quasi_reducible: Option<QuasiReducibilityWitness>,
    pub y_quasi_reducible: Option<QuasiReducibilityWitness>,
    pub irreducible: bool,
    pub quasi_irreducible: bool,
}

fn require_m(a: &BiquadraticTensor) -> Result<()> {
    if a.m() < 2 {
        return Err(Error::ModeTooSmall {
            m: a.m(),
            n: a.n(),
            required: 2,
        });
    }
    Ok(())
}

fn require_both(a: &BiquadraticTensor) -> Result<()> {
    if a.m() < 2 || a.n() < 2 {
        return Err(Error::ModeTooSmall {
            m: a.m(),
            n: a.n(),
            required: 2,
        });
    }
    Ok(())
}

/// x-reducibility scan. Returns a witness (j, block) or `None`.
pub fn is_x_reducible(a: &BiquadraticTensor) -> Result<Option<ReducibilityWitness>> {
    require_m(a)?;
    let m = a.m();
    for j in 0..a.n() {
        let mut uf = UnionFind::new(m);
        for i1 in 0..m {
            for i2 in (i1 + 1)..m {
                if a.get(i1, j, i2, j) + a.get(i2, j, i1, j) != 0.0 {
                    uf.union(i1, i2);
                }
            }
        }
        if !uf.is_connected() {
            return Ok(Some(ReducibilityWitness {
                fixed: j,
                block: uf.smallest_component(),
            }));
        }
    }
    Ok(None)
}

/// y-reducibility scan: roles of the two modes exchanged.
pub fn is_y_reducible(a: &BiquadraticTensor) -> Result<Option<ReducibilityWitness>> {
    if a.n() < 2 {
        return Err(Error::ModeTooSmall {
            m: a.m(),
            n: a.n(),
            required: 2,
        });
    }
    let n = a.n();
    for i in 0..a.m() {
        let mut uf = UnionFind::new(n);
        for j1 in 0..n {
            for j2 in (j1 + 1)..n {
                if a.get(i, j1, i, j2) + a.get(i, j2, i, j1) != 0.0 {
                    uf.union(j1, j2);
                }
            }
        }
        if !uf.is_connected() {
            return Ok(Some(ReducibilityWitness {
                fixed: i,
                block: uf.smallest_component(),
            }));
        }
    }
    Ok(None)
}

/// x-quasi-reducibility scan over ordered pairs (j1, j2) of distinct
/// indices. The pair-sum `a_{i1 j1 i2 j2} + a_{i2 j1 i1 j2}` is symmetric
/// under i1 <-> i2, so the induced graph on `[m]` is undirected.
pub fn is_x_quasi_reducible(a: &BiquadraticTensor) -> Result<Option<QuasiReducibilityWitness>> {
    require_both(a)?;
    let m = a.m();
    for j1 in 0..a.n() {
        for j2 in 0..a.n() {
            if j1 == j2 {
                continue;
            }
            let mut uf = UnionFind::new(m);
            for i1 in 0..m {
                for i2 in (i1 + 1)..m {
                    if a.get(i1, j1, i2, j2) + a.get(i2, j1, i1, j2) != 0.0 {
                        uf.union(i1, i2);
                    }
                }
            }
            if !uf.is_connected() {
                return Ok(Some(QuasiReducibilityWitness {
                    fixed: (j1, j2),
                    block: uf.smallest_component(),
                }));
            }
        }
    }
    Ok(None)
}

/// y-quasi-reducibility scan over ordered pairs (i1, i2); the pair-sum
/// `a_{i1 j1 i2 j2} + a_{i1 j2 i2 j1}` is symmetric under j1 <-> j2.
pub fn is_y_quasi_reducible(a: &BiquadraticTensor) -> Result<Option<QuasiReducibilityWitness>> {
    require_both(a)?;
    let n = a.n();
    for i1 in 0..a.m() {
        for i2 in 0..a.m() {
            if i1 == i2 {
                continue;
            }
            let mut uf = UnionFind::new(n);
            for j1 in 0..n {
                for j2 in (j1 + 1)..n {
                    if a.get(i1, j1, i2, j2) + a.get(i1, j2, i2, j1) != 0.0 {
                        uf.union(j1, j2);
                    }
                }
            }
            if !uf.is_connected() {
                return Ok(Some(QuasiReducibilityWitness {
                    fixed: (i1, i2),
                    block: uf.smallest_component(),
                }));
            }
        }
    }
    Ok(None)
}

/// Runs all four predicates and aggregates the combined flags.
pub fn structure_report(a: &BiquadraticTensor) -> Result<StructureReport> {
    require_both(a)?;
    let x_reducible = is_x_reducible(a)?;
    let y_reducible = is_y_reducible(a)?;
    let x_quasi_reducible = is_x_quasi_reducible(a)?;
    let y_quasi_reducible = is_y_quasi_reducible(a)?;
    let irreducible = x_reducible.is_none() && y_reducible.is_none();
    let quasi_irreducible = x_quasi_reducible.is_none() && y_quasi_reducible.is_none();
    Ok(StructureReport {
        x_reducible,
        y_reducible,
        x_quasi_reducible,
        y_quasi_reducible,
        irreducible,
        quasi_irreducible,
    })
}

/// Classifies a verified M-eigenpair by the sign structure of its
/// eigenvectors. The eigen equations are invariant under flipping the sign
/// of x and of y independently, so the classifier searches all four sign
/// combinations for a nonnegative representative. Tags, in priority order:
/// M0 (a singleton support side), M++ (all coordinates > tol after
/// normalization), M+ (nonnegative), M otherwise.
///
/// `tol` gates the residual (the pair must have passed
/// `check_m_eigenpair`) and serves as the positivity threshold; support
/// uses the fixed [`SUPPORT_THRESHOLD`].
pub fn classify_eigenpair(pair: &MEigenPair, tol: f64) -> Result<EigenClass> {
    if tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }
    if pair.residual.is_nan() || pair.residual > tol {
        return Err(Error::NotAnEigenpair {
            residual: pair.residual,
            tol,
        });
    }
    let singleton = support(&pair.pair.x).len() == 1 || support(&pair.pair.y).len() == 1;
    let sx = flip_to_nonnegative(&pair.pair.x, tol);
    let sy = flip_to_nonnegative(&pair.pair.y, tol);
    let class = match (sx, sy) {
        (Some(fx), Some(fy)) => {
            if singleton {
                EigenClass::MZero
            } else {
                let all_positive = pair.pair.x.iter().all(|&c| fx * c > tol)
                    && pair.pair.y.iter().all(|&c| fy * c > tol);
                if all_positive {
                    EigenClass::MPlusPlus
                } else {
                    EigenClass::MPlus
                }
            }
        }
        _ => {
            if singleton {
                EigenClass::MZero
            } else {
                EigenClass::M
            }
        }
    };
    Ok(class)
}

/// Re-checks a witness against the defining zero-sum condition, entry by
/// entry. Used by tests and report consumers; `kind` selects the pattern.
pub fn witness_holds(a: &BiquadraticTensor, kind: WitnessKind) -> bool {
    match kind {
        WitnessKind::XReducible(w) => {
            let inside: Vec<bool> = membership(a.m(), &w.block);
            if w.block.is_empty() || w.block.len() == a.m() {
                return false;
            }
            for i1 in 0..a.m() {
                for i2 in 0..a.m() {
                    if inside[i1] && !inside[i2]
                        && a.get(i2, w.fixed, i1, w.fixed) + a.get(i1, w.fixed, i2, w.fixed) != 0.0
                    {
                        return false;
                    }
                }
            }
            true
        }
        WitnessKind::YReducible(w) => {
            let inside = membership(a.n(), &w.block);
            if w.block.is_empty() || w.block.len() == a.n() {
                return false;
            }
            for j1 in 0..a.n() {
                for j2 in 0..a.n() {
                    if inside[j1] && !inside[j2]
                        && a.get(w.fixed, j1, w.fixed, j2) + a.get(w.fixed, j2, w.fixed, j1) != 0.0
                    {
                        return false;
                    }
                }
            }
            true
        }
        WitnessKind::XQuasi(w) => {
            let (j1, j2) = w.fixed;
            let inside = membership(a.m(), &w.block);
            if w.block.is_empty() || w.block.len() == a.m() || j1 == j2 {
                return false;
            }
            for i1 in 0..a.m() {
                for i2 in 0..a.m() {
                    if inside[i1] && !inside[i2]
                        && a.get(i2, j1, i1, j2) + a.get(i1, j1, i2, j2) != 0.0
                    {
                        return false;
                    }
                }
            }
            true
        }
        WitnessKind::YQuasi(w) => {
            let (i1, i2) = w.fixed;
            let inside = membership(a.n(), &w.block);
            if w.block.is_empty() || w.block.len() == a.n() || i1 == i2 {
                return false;
            }
            for j1 in 0..a.n() {
                for j2 in 0..a.n() {
                    if inside[j1] && !inside[j2]
                        && a.get(i1, j1, i2, j2) + a.get(i1, j2, i2, j1) != 0.0
                    {
                        return false;
                    }
                }
            }
            true
        }
    }
}

pub enum WitnessKind<'a> {
    XReducible(&'a ReducibilityWitness),
    YReducible(&'a ReducibilityWitness),
    XQuasi(&'a QuasiReducibilityWitness),
    YQuasi(&'a QuasiReducibilityWitness),
}

fn membership(len: usize, block: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; len];
    for &v in block {
        inside[v] = true;
    }
    inside
}

/// Support threshold re-exported for report consumers.
pub fn support_threshold() -> f64 {
    SUPPORT_THRESHOLD
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::VectorPair;
    use crate::test_support::{all_ones, example_tensor};
    use crate::BipartiteTwoGraph;

    #[test]
    fn example_tensor_is_x_and_y_reducible_with_expected_witnesses() {
        let a = example_tensor();
        let wx = is_x_reducible(&a).unwrap().expect("x-reducible");
        assert_eq!(wx.fixed, 0);
        assert_eq!(wx.block, vec![0]);
        assert!(witness_holds(&a, WitnessKind::XReducible(&wx)));

        let wy = is_y_reducible(&a).unwrap().expect("y-reducible");
        assert_eq!(wy.fixed, 0);
        assert_eq!(wy.block, vec![0]);
        assert!(witness_holds(&a, WitnessKind::YReducible(&wy)));
    }

    #[test]
    fn example_tensor_is_quasi_irreducible() {
        let a = example_tensor();
        assert!(is_x_quasi_reducible(&a).unwrap().is_none());
        assert!(is_y_quasi_reducible(&a).unwrap().is_none());
        let r = structure_report(&a).unwrap();
        assert!(r.x_reducible.is_some());
        assert!(r.y_reducible.is_some());
        assert!(!r.irreducible);
        assert!(r.quasi_irreducible);
    }

    #[test]
    fn all_ones_tensor_is_irreducible_and_quasi_irreducible() {
        let a = all_ones(3, 2);
        let r = structure_report(&a).unwrap();
        assert!(r.irreducible);
        assert!(r.quasi_irreducible);
    }

    #[test]
    fn zero_tensor_is_reducible_in_every_sense() {
        let a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        let r = structure_report(&a).unwrap();
        assert!(r.x_reducible.is_some());
        assert!(r.y_reducible.is_some());
        assert!(r.x_quasi_reducible.is_some());
        assert!(r.y_quasi_reducible.is_some());
        assert!(!r.irreducible && !r.quasi_irreducible);
    }

    #[test]
    fn single_corner_entry_is_quasi_reducible() {
        let mut a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, 1.0);
        let w = is_x_quasi_reducible(&a).unwrap().expect("quasi-reducible");
        assert_eq!(w.fixed, (0, 1));
        assert_eq!(w.block, vec![0]);
        assert!(witness_holds(&a, WitnessKind::XQuasi(&w)));
        assert!(is_y_quasi_reducible(&a).unwrap().is_some());
    }

    #[test]
    fn adjacency_tensors_are_always_x_and_y_reducible() {
        let g = BipartiteTwoGraph::from_edges(3, 3, &[(0, 1, 0, 1, 1.0), (1, 2, 1, 2, 2.0)])
            .unwrap();
        let a = g.adjacency_tensor();
        assert!(is_x_reducible(&a).unwrap().is_some());
        assert!(is_y_reducible(&a).unwrap().is_some());
    }

    #[test]
    fn predicates_reject_small_modes() {
        let a = crate::BiquadraticTensor::zeros(1, 2).unwrap();
        assert!(is_x_reducible(&a).is_err());
        assert!(is_x_quasi_reducible(&a).is_err());
        assert!(structure_report(&a).is_err());
        let b = crate::BiquadraticTensor::zeros(2, 1).unwrap();
        assert!(is_y_reducible(&b).is_err());
    }

    #[test]
    fn quasi_reducibility_is_scale_invariant() {
        let mut a = crate::BiquadraticTensor::zeros(2, 2).unwrap();
        a.set(0, 0, 0, 0, 1.0);
        a.set(0, 0, 1, 1, 0.25);
        for c in [0.5, 2.0, 1e6] {
            let scaled = a.scaled(c);
            assert_eq!(
                is_x_quasi_reducible(&a).unwrap().is_some(),
                is_x_quasi_reducible(&scaled).unwrap().is_some()
            );
            assert_eq!(
                is_y_quasi_reducible(&a).unwrap().is_some(),
                is_y_quasi_reducible(&scaled).unwrap().is_some()
            );
        }
    }

    fn verified(a: &crate::BiquadraticTensor, lambda: f64, x: &[f64], y: &[f64]) -> MEigenPair {
        let mut p = MEigenPair::new(lambda, VectorPair::new(x.to_vec(), y.to_vec()));
        assert!(a.check_m_eigenpair(&mut p, 1e-10).unwrap());
        p
    }

    #[test]
    fn classify_boundary_pair_as_m_zero() {
        let a = example_tensor();
        let p = verified(&a, 3.0, &[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(classify_eigenpair(&p, 1e-8).unwrap(), EigenClass::MZero);
        assert!(p.is_m_plus(1e-12));
    }

    #[test]
    fn classify_interior_pair_as_m_plus_plus() {
        let c = 1.5;
        let a = crate::test_support::isotropic(2, 2, c);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = verified(&a, c, &[s, s], &[s, s]);
        assert_eq!(classify_eigenpair(&p, 1e-8).unwrap(), EigenClass::MPlusPlus);
    }

    #[test]
    fn classify_normalizes_signs_independently() {
        let a = example_tensor();
        let p = verified(&a, 3.0, &[-1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(classify_eigenpair(&p, 1e-8).unwrap(), EigenClass::MZero);
        assert!(p.is_m_plus(1e-12));
    }

    #[test]
    fn classify_rejects_non_eigenpairs() {
        let pair = MEigenPair::new(2.5, VectorPair::new(vec![1.0, 0.0], vec![0.0, 1.0]));
        // residual never verified (infinite)
        assert!(classify_eigenpair(&pair, 1e-8).is_err());
    }

    #[test]
    fn nonnegative_pair_sum_zero_iff_both_zero() {
        // For a nonnegative tensor the != 0 rule and the > 0 rule agree.
        let g = BipartiteTwoGraph::from_edges(3, 2, &[(0, 1, 0, 1, 1.0)]).unwrap();
        let a = g.adjacency_tensor();
        for j1 in 0..2 {
            for j2 in 0..2 {
                for i1 in 0..3 {
                    for i2 in 0..3 {
                        let s = a.get(i1, j1, i2, j2) + a.get(i2, j1, i1, j2);
                        assert_eq!(
                            s != 0.0,
                            s > 0.0,
                            "nonnegative tensors cannot cancel in pair sums"
                        );
                    }
                }
            }
        }
    }
}
