use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix};

/// Relative cutoff used to decide how many interpolation nodes a variable
/// needs: the degree of `det(zI + Σ z_i A_i)` in `z_i` is `rank(A_i)`.
const INTERPOLATION_RANK_TOL: f64 = 1e-13;

/// Max `‖Σ A_i − I‖` for the identity flag.
pub const IDENTITY_TOL: f64 = 1e-9;

/// A validated tuple `(A_1, …, A_m)` of PSD matrices of one dimension, with
/// the flags the theorems branch on.
#[derive(Debug, Clone)]
pub struct PsdSystem {
    dim: usize,
    matrices: Vec<HermitianMatrix>,
    sum_is_identity: bool,
    all_rank_one: bool,
    trace_bound: f64,
    norm_bound: f64,
    interpolation_degrees: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummary {
    pub dim: usize,
    pub m: usize,
    pub sum_is_identity: bool,
    pub all_rank_one: bool,
    pub trace_bound: f64,
    pub norm_bound: f64,
}

impl PsdSystem {
    pub fn new(dim: usize, matrices: Vec<HermitianMatrix>, tol: &Tolerances) -> Result<Self> {
        let mut trace_bound = 0.0f64;
        let mut norm_bound = 0.0f64;
        let mut all_rank_one = true;
        let mut interpolation_degrees = Vec::with_capacity(matrices.len());
        for (i, a) in matrices.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("{dim}x{dim}"),
                    found: format!("matrix {} is {}x{}", i + 1, a.dim(), a.dim()),
                });
            }
            let vals = linalg::eigenvalues(a);
            if let Some(&low) = vals.last() {
                if low < -tol.psd_clamp {
                    return Err(Error::NotPsd { eigenvalue: low });
                }
            }
            let top = vals.first().copied().unwrap_or(0.0);
            trace_bound = trace_bound.max(a.trace());
            norm_bound = norm_bound.max(top);
            let scale = top.max(1.0);
            if vals.iter().filter(|&&l| l > tol.psd_clamp * scale).count() > 1 {
                all_rank_one = false;
            }
            interpolation_degrees.push(
                vals.iter()
                    .filter(|&&l| l.abs() > INTERPOLATION_RANK_TOL * scale)
                    .count(),
            );
        }
        let sum = HermitianMatrix::sum(dim, &matrices);
        let defect = linalg::hermitian_norm(&sum.sub(&HermitianMatrix::identity(dim)));
        Ok(Self {
            dim,
            sum_is_identity: defect <= IDENTITY_TOL,
            all_rank_one,
            trace_bound,
            norm_bound,
            interpolation_degrees,
            matrices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn sum_is_identity(&self) -> bool {
        self.sum_is_identity
    }

    pub fn all_rank_one(&self) -> bool {
        self.all_rank_one
    }

    /// `ε = max_i Tr A_i`.
    pub fn trace_bound(&self) -> f64 {
        self.trace_bound
    }

    /// `C = max_i ‖A_i‖`.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn sum(&self) -> HermitianMatrix {
        HermitianMatrix::sum(self.dim, &self.matrices)
    }

    /// Degree of the determinantal polynomial in each `z_i`.
    pub fn interpolation_degrees(&self) -> &[usize] {
        &self.interpolation_degrees
    }

    /// `Σ x_i A_i`.
    pub fn weighted_sum(&self, x: &[f64]) -> HermitianMatrix {
        self.matrices
            .iter()
            .zip(x)
            .fold(HermitianMatrix::zeros(self.dim), |acc, (a, &w)| acc.add(&a.scale(w)))
    }

    /// Same system with the matrices reordered by `perm` (`perm[k]` is the old
    /// index of the new `k`-th matrix).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        out.matrices = perm.iter().map(|&k| self.matrices[k].clone()).collect();
        out.interpolation_degrees = perm.iter().map(|&k| self.interpolation_degrees[k]).collect();
        out
    }

    pub fn summary(&self) -> SystemSummary {
        SystemSummary {
            dim: self.dim,
            m: self.m(),
            sum_is_identity: self.sum_is_identity,
            all_rank_one: self.all_rank_one,
            trace_bound: self.trace_bound,
            norm_bound: self.norm_bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn flags_for_coordinate_projectors() {
        let e = |i: usize| {
            let mut v = vec![C64::new(0.0, 0.0); 2];
            v[i] = C64::new(1.0, 0.0);
            HermitianMatrix::outer(&v)
        };
        let s = PsdSystem::new(2, vec![e(0), e(1)], &Tolerances::default()).unwrap();
        assert!(s.sum_is_identity());
        assert!(s.all_rank_one());
        assert_eq!(s.trace_bound(), 1.0);
        assert_eq!(s.interpolation_degrees(), &[1, 1]);
    }

    #[test]
    fn rejects_indefinite_and_mismatched() {
        let tol = Tolerances::default();
        let bad = HermitianMatrix::from_diagonal(&[1.0, -0.5]);
        assert!(matches!(PsdSystem::new(2, vec![bad], &tol), Err(Error::NotPsd { .. })));
        let small = HermitianMatrix::from_diagonal(&[1.0]);
        assert!(matches!(
            PsdSystem::new(2, vec![small], &tol),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn full_rank_member_clears_rank_one_flag() {
        let s = PsdSystem::new(2, vec![HermitianMatrix::identity(2)], &Tolerances::default()).unwrap();
        assert!(!s.all_rank_one());
        assert!(s.sum_is_identity());
        assert_eq!(s.interpolation_degrees(), &[2]);
    }

    #[test]
    fn empty_system() {
        let s = PsdSystem::new(2, vec![], &Tolerances::default()).unwrap();
        assert_eq!(s.m(), 0);
        assert!(s.all_rank_one());
        assert!(!s.sum_is_identity());
    }
}
