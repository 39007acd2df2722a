//! Paving by diagonal projections: projections through a rank-one
//! decomposition of the identity on their range, self-adjoint operators
//! through a projection dilation, and zero-diagonal operators through their
//! real and imaginary parts.
//!
//! Block index lists are 0-based and sorted.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, HermitianMatrix, C64};
use crate::partition::{partition_bound, partition_search, SearchOptions, SearchStatus, Strategy, BOUND_SLACK};
use crate::realstable::PsdSystem;

/// Max `‖P² − P‖` accepted for a projection.
pub const PROJECTION_TOL: f64 = 1e-8;
/// Slack on the contraction check in `dilate`.
const CONTRACTION_SLACK: f64 = 1e-12;
/// Slack on the inequality defining `choose_r`.
const CHOOSE_R_SLACK: f64 = 1e-12;
/// Diagonal entries of a zero-diagonal operator may be this fraction of `‖T‖`.
const DIAGONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct PavingResult {
    pub dim: usize,
    /// Disjoint, covering `0..dim`; empty blocks allowed.
    pub blocks: Vec<Vec<usize>>,
    /// `‖Q T Q‖` per block, for the operator that was paved.
    pub norms: Vec<f64>,
    /// Absolute bound every norm is held to.
    pub bound: f64,
    /// Relative target `ε` (`bound = ε ‖T‖`), absent for projection paving.
    pub epsilon: Option<f64>,
    /// Blocks per paving of a dilation or partition search.
    pub r: usize,
    pub operator_norm: f64,
    /// `max |T_ii| ≤ 1e-10 ‖T‖`. Without it the dilation's diagonal is not
    /// constant ½ and a missed bound is not a counterexample.
    pub zero_diagonal: bool,
    pub strategy: Strategy,
    pub iterations: u64,
    pub status: SearchStatus,
}

impl PavingResult {
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }

    /// `max ‖QTQ‖ / ‖T‖`, zero for `T = 0`.
    pub fn max_ratio(&self) -> f64 {
        if self.operator_norm > 0.0 {
            self.max_norm() / self.operator_norm
        } else {
            0.0
        }
    }

    fn trivial(dim: usize, epsilon: f64, strategy: Strategy) -> Self {
        Self {
            dim,
            blocks: vec![(0..dim).collect()],
            norms: vec![0.0],
            bound: 0.0,
            epsilon: Some(epsilon),
            r: 1,
            operator_norm: 0.0,
            zero_diagonal: true,
            strategy,
            iterations: 0,
            status: SearchStatus::Certified,
        }
    }
}

fn compression_norm(t: &ComplexMatrix, block: &[usize]) -> f64 {
    if block.is_empty() {
        return 0.0;
    }
    linalg::spectral_norm(&t.principal_submatrix(block))
}

/// Paves a projection `P` into `r` blocks with
/// `‖Q_j P Q_j‖ ≤ (1/√r + √max_i P_ii)²`.
///
/// With `W` an orthonormal basis of `range P`, the vectors `u_i = W* e_i`
/// give rank-one `A_i = u_i u_i*` summing to the identity on the range, and
/// `‖Σ_{i∈S} A_i‖ = ‖Q_S P Q_S‖`.
pub fn pave_projection(p: &HermitianMatrix, r: usize, options: &SearchOptions, cfg: &Config) -> Result<PavingResult> {
    let deviation = linalg::projection_defect(p);
    if deviation > PROJECTION_TOL {
        return Err(Error::NotProjection { deviation });
    }
    let dim = p.dim();
    let w = linalg::range_basis(p, 0.5);
    let k = w.ncols();
    let matrices: Vec<HermitianMatrix> = (0..dim)
        .map(|i| {
            let u: Vec<C64> = (0..k).map(|c| w[(i, c)].conj()).collect();
            HermitianMatrix::outer(&u)
        })
        .collect();
    let system = PsdSystem::new(k, matrices, &cfg.tol)?;
    let search = partition_search(&system, r, options)?;
    let c = (0..dim).map(|i| p.get(i, i).re).fold(0.0, f64::max);
    let bound = partition_bound(r, c);
    let blocks = search.best.blocks();
    let norms: Vec<f64> = blocks.iter().map(|b| compression_norm(p.as_complex(), b)).collect();
    let within = norms.iter().all(|&n| n <= bound + BOUND_SLACK);
    Ok(PavingResult {
        dim,
        blocks,
        norms,
        bound,
        epsilon: None,
        r,
        operator_norm: linalg::hermitian_norm(p),
        zero_diagonal: has_zero_diagonal(p.as_complex()),
        strategy: search.strategy,
        iterations: search.iterations,
        status: combine(search.status, within),
    })
}

/// Search status, downgraded when a recomputed norm misses the bound.
fn combine(search: SearchStatus, within: bool) -> SearchStatus {
    match (search, within) {
        (SearchStatus::Certified, true) => SearchStatus::Certified,
        (SearchStatus::Certified, false) => SearchStatus::BoundViolated,
        (other, _) => other,
    }
}

fn max_diagonal(t: &ComplexMatrix) -> f64 {
    linalg::diag_vector(t).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn has_zero_diagonal(t: &ComplexMatrix) -> bool {
    max_diagonal(t) <= DIAGONAL_TOL * linalg::spectral_norm(t)
}

/// Like `combine`, but a miss on an operator with nonzero diagonal is only
/// "not certified": the bound needs the zero diagonal.
fn combine_for(search: SearchStatus, within: bool, zero_diagonal: bool) -> SearchStatus {
    match combine(search, within) {
        SearchStatus::BoundViolated if !zero_diagonal => SearchStatus::BoundNotCertified,
        other => other,
    }
}

#[derive(Debug, Clone)]
pub struct Dilation {
    pub source: HermitianMatrix,
    /// `[[(I+T)/2, S], [S, (I−T)/2]]` with `S = ½ (I − T²)^{1/2}`.
    pub p: HermitianMatrix,
}

impl Dilation {
    /// `‖P² − P‖`.
    pub fn projection_defect(&self) -> f64 {
        linalg::projection_defect(&self.p)
    }

    /// `max_i |P_ii − ½|`.
    pub fn diagonal_defect(&self) -> f64 {
        (0..self.p.dim())
            .map(|i| (self.p.get(i, i) - C64::new(0.5, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// The projection dilation of a self-adjoint contraction.
pub fn dilate(t: &HermitianMatrix, cfg: &Config) -> Result<Dilation> {
    let norm = linalg::hermitian_norm(t);
    if norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotContraction { norm });
    }
    let m = t.dim();
    let id = HermitianMatrix::identity(m);
    let t2 = HermitianMatrix::hermitian_part(&(t.as_complex() * t.as_complex()));
    let s = linalg::sqrt_psd(&id.sub(&t2), cfg.tol.psd_clamp.max(4.0 * CONTRACTION_SLACK))?.scale(0.5);
    let top = id.add(t).scale(0.5);
    let bottom = id.sub(t).scale(0.5);
    let data = DMatrix::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
        (true, true) => top.get(i, j),
        (true, false) => s.get(i, j - m),
        (false, true) => s.get(i - m, j),
        (false, false) => bottom.get(i - m, j - m),
    });
    let p = HermitianMatrix::hermitian_part(&ComplexMatrix::from_matrix(data)?);
    Ok(Dilation { source: t.clone(), p })
}

fn choose_r_lhs(r: usize) -> f64 {
    2.0 * (1.0 / (r as f64).sqrt() + std::f64::consts::FRAC_1_SQRT_2).powi(2) - 1.0
}

/// Smallest `r ≥ 1` with `2 (1/√r + 1/√2)² − 1 ≤ ε`.
pub fn choose_r(epsilon: f64) -> Result<usize> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::BadEpsilon(epsilon));
    }
    let ok = |r: usize| choose_r_lhs(r) <= epsilon + CHOOSE_R_SLACK;
    // 1/√r ≤ √((ε+1)/2) − 1/√2
    let s = ((epsilon + 1.0) / 2.0).sqrt() - std::f64::consts::FRAC_1_SQRT_2;
    let mut r = (1.0 / (s * s)).ceil().clamp(1.0, usize::MAX as f64) as usize;
    while r > 1 && ok(r - 1) {
        r -= 1;
    }
    while !ok(r) {
        r += 1;
    }
    Ok(r)
}

fn require_selfadjoint(t: &ComplexMatrix, cfg: &Config) -> Result<HermitianMatrix> {
    let deviation = t.hermitian_defect();
    if deviation > cfg.tol.hermitian * t.frobenius_norm().max(1.0) {
        return Err(Error::NotSelfAdjoint { deviation });
    }
    Ok(HermitianMatrix::hermitian_part(t))
}

/// Paves a self-adjoint `T` into `r²` blocks `Q_i Q'_j` with
/// `‖Q_{ij} T Q_{ij}‖ ≤ ε ‖T‖`, where `r = choose_r(ε)`.
///
/// `T` is rescaled to unit norm, its dilation is paved into `r` blocks, and
/// each block splits into its first-half indices (`Q_i`) and second-half
/// indices (`Q'_i`).
pub fn pave_selfadjoint(t: &ComplexMatrix, epsilon: f64, options: &SearchOptions, cfg: &Config) -> Result<PavingResult> {
    let h = require_selfadjoint(t, cfg)?;
    let r = choose_r(epsilon)?;
    let m = h.dim();
    let norm = linalg::hermitian_norm(&h);
    if norm == 0.0 {
        return Ok(PavingResult::trivial(m, epsilon, options.strategy));
    }
    let dilation = dilate(&h.scale(1.0 / norm), cfg)?;
    let paved = pave_projection(&dilation.p, r, options, cfg)?;
    let mut first = vec![Vec::new(); r];
    let mut second = vec![Vec::new(); r];
    for (j, block) in paved.blocks.iter().enumerate() {
        for &k in block {
            if k < m {
                first[j].push(k);
            } else {
                second[j].push(k - m);
            }
        }
    }
    let blocks: Vec<Vec<usize>> = first
        .iter()
        .flat_map(|q| second.iter().map(move |q2| intersect(q, q2)))
        .collect();
    let norms: Vec<f64> = blocks.iter().map(|b| compression_norm(h.as_complex(), b)).collect();
    let bound = epsilon * norm;
    let within = norms.iter().all(|&n| n <= bound + BOUND_SLACK);
    let zero_diagonal = has_zero_diagonal(h.as_complex());
    let search = match paved.status {
        SearchStatus::BoundViolated if !zero_diagonal => SearchStatus::BoundNotCertified,
        other => other,
    };
    Ok(PavingResult {
        dim: m,
        blocks,
        norms,
        bound,
        epsilon: Some(epsilon),
        r,
        operator_norm: norm,
        zero_diagonal,
        strategy: paved.strategy,
        iterations: paved.iterations,
        status: combine_for(search, within, zero_diagonal),
    })
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Paves a zero-diagonal `T = A + iB` by paving `A` and `B` at `ε/2` and
/// intersecting the two block families; empty intersections are dropped.
pub fn pave_general(t: &ComplexMatrix, epsilon: f64, options: &SearchOptions, cfg: &Config) -> Result<PavingResult> {
    let half = epsilon / 2.0;
    let r = choose_r(half)?;
    let m = t.dim();
    let norm = linalg::spectral_norm(t);
    let max = max_diagonal(t);
    if max > DIAGONAL_TOL * norm {
        return Err(Error::NonzeroDiagonal { max });
    }
    if norm == 0.0 {
        return Ok(PavingResult::trivial(m, epsilon, options.strategy));
    }
    let adj = t.adjoint();
    let a = (t + &adj).scale(C64::new(0.5, 0.0));
    let b = (t - &adj).scale(C64::new(0.0, -0.5));
    let pa = pave_selfadjoint(&a, half, options, cfg)?;
    let pb = pave_selfadjoint(&b, half, options, cfg)?;
    let blocks: Vec<Vec<usize>> = pa
        .blocks
        .iter()
        .flat_map(|qa| pb.blocks.iter().map(move |qb| intersect(qa, qb)))
        .filter(|q| !q.is_empty())
        .collect();
    let norms: Vec<f64> = blocks.iter().map(|q| compression_norm(t, q)).collect();
    let bound = epsilon * norm;
    let within = norms.iter().all(|&n| n <= bound + BOUND_SLACK);
    let search = match (pa.status, pb.status) {
        (SearchStatus::Certified, s) | (s, SearchStatus::Certified) => s,
        (s, _) => s,
    };
    Ok(PavingResult {
        dim: m,
        blocks,
        norms,
        bound,
        epsilon: Some(epsilon),
        r,
        operator_norm: norm,
        zero_diagonal: true,
        strategy: options.strategy,
        iterations: pa.iterations + pb.iterations,
        status: combine(search, within),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PavingReport {
    pub norms: Vec<f64>,
    pub operator_norm: f64,
    /// `max ‖QTQ‖ / ‖T‖`, zero for `T = 0`.
    pub max_ratio: f64,
    pub epsilon: Option<f64>,
    /// `max_ratio ≤ ε` (up to slack) when `ε` is given.
    pub holds: Option<bool>,
}

/// Recomputes every `‖Q T Q‖` for 0-based blocks that must partition
/// `0..dim`.
pub fn verify_paving(t: &ComplexMatrix, blocks: &[Vec<usize>], epsilon: Option<f64>) -> Result<PavingReport> {
    let m = t.dim();
    let mut seen = vec![false; m];
    for &i in blocks.iter().flatten() {
        if i >= m {
            return Err(Error::BadPartition(format!("index {} outside 1..={m}", i + 1)));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::BadPartition(format!("index {} appears twice", i + 1)));
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(Error::BadPartition(format!("index {} is not covered", i + 1)));
    }
    let norms: Vec<f64> = blocks
        .iter()
        .map(|b| {
            let mut sorted = b.clone();
            sorted.sort_unstable();
            compression_norm(t, &sorted)
        })
        .collect();
    let operator_norm = linalg::spectral_norm(t);
    let max = norms.iter().copied().fold(0.0, f64::max);
    let max_ratio = if operator_norm > 0.0 { max / operator_norm } else { 0.0 };
    Ok(PavingReport {
        norms,
        operator_norm,
        max_ratio,
        epsilon,
        holds: epsilon.map(|e| max_ratio <= e + BOUND_SLACK),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> Config {
        Config::default()
    }

    fn exhaustive() -> SearchOptions {
        SearchOptions::exhaustive(10_000_000)
    }

    fn real(rows: &[Vec<f64>]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn choose_r_fixed_points() {
        assert_eq!(choose_r(1.0).unwrap(), 12);
        assert!(choose_r_lhs(11) > 1.0 && choose_r_lhs(12) <= 1.0);
        assert_eq!(choose_r(0.5).unwrap(), 40);
        assert!(choose_r_lhs(39) > 0.5 && choose_r_lhs(40) <= 0.5);
        assert_eq!(choose_r(3.0).unwrap(), 2);
        assert_eq!(choose_r(0.99).unwrap(), 12);
        assert_eq!(choose_r(100.0).unwrap(), 1);
        assert!(matches!(choose_r(0.0), Err(Error::BadEpsilon(_))));
        assert!(matches!(choose_r(-1.0), Err(Error::BadEpsilon(_))));
    }

    #[test]
    fn half_all_ones_projection() {
        let p = HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]], 1e-12).unwrap();
        let res = pave_projection(&p, 2, &exhaustive(), &cfg()).unwrap();
        assert_eq!(res.blocks, vec![vec![0], vec![1]]);
        assert_abs_diff_eq!(res.norms[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(res.norms[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(res.bound, 2.0, epsilon = 1e-12);
        assert_eq!(res.status, SearchStatus::Certified);
    }

    #[test]
    fn identity_and_zero_projections() {
        let res = pave_projection(&HermitianMatrix::identity(3), 2, &exhaustive(), &cfg()).unwrap();
        assert!(res.norms.iter().all(|&n| n == 0.0 || (n - 1.0).abs() < 1e-12));
        assert!(res.bound >= 1.0);
        let res = pave_projection(&HermitianMatrix::zeros(3), 2, &exhaustive(), &cfg()).unwrap();
        assert!(res.norms.iter().all(|&n| n == 0.0));
        assert_eq!(res.blocks[0], vec![0, 1, 2]);
        let bad = HermitianMatrix::from_diagonal(&[0.5, 1.0]);
        assert!(matches!(
            pave_projection(&bad, 2, &exhaustive(), &cfg()),
            Err(Error::NotProjection { .. })
        ));
    }

    #[test]
    fn dilation_examples() {
        let flip = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
        let d = dilate(&flip, &cfg()).unwrap();
        assert!(d.projection_defect() < 1e-12);
        assert!(d.diagonal_defect() < 1e-12);
        let want = [
            [0.5, 0.5, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, -0.5],
            [0.0, 0.0, -0.5, 0.5],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_abs_diff_eq!(d.p.get(i, j).re, v, epsilon = 1e-12);
            }
        }
        let d = dilate(&HermitianMatrix::zeros(2), &cfg()).unwrap();
        assert!(d.projection_defect() < 1e-12);
        assert_abs_diff_eq!(d.p.get(0, 2).re, 0.5, epsilon = 1e-12);
        let d = dilate(&HermitianMatrix::identity(2), &cfg()).unwrap();
        assert_abs_diff_eq!(d.p.get(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.p.get(2, 2).re, 0.0, epsilon = 1e-12);
        assert!(matches!(
            dilate(&HermitianMatrix::identity(2).scale(1.5), &cfg()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn selfadjoint_flip_is_separated() {
        let flip = real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let res = pave_selfadjoint(&flip, 0.99, &exhaustive(), &cfg()).unwrap();
        assert_eq!(res.blocks.len(), 144);
        assert_eq!(res.status, SearchStatus::Certified);
        assert!(res.max_norm() <= 0.99 + 1e-9);
        assert!(res.blocks.iter().all(|b| b.len() <= 1));
        assert!(verify_paving(&flip, &res.blocks, Some(0.99)).unwrap().holds.unwrap());

        let zero = pave_selfadjoint(&ComplexMatrix::zeros(3), 0.5, &exhaustive(), &cfg()).unwrap();
        assert_eq!(zero.blocks, vec![vec![0, 1, 2]]);

        // |T_11| = ‖T‖, so no block holding index 1 meets 0.99 ‖T‖
        let diag = real(&[vec![1.0, 0.0], vec![0.0, -0.25]]);
        let res = pave_selfadjoint(&diag, 0.99, &exhaustive(), &cfg()).unwrap();
        assert!(!res.zero_diagonal);
        assert_eq!(res.status, SearchStatus::BoundNotCertified);
        let res = pave_selfadjoint(&diag, 3.0, &exhaustive(), &cfg()).unwrap();
        assert_eq!(res.status, SearchStatus::Certified);

        let skew = real(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(
            pave_selfadjoint(&skew, 0.99, &exhaustive(), &cfg()),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn general_examples() {
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        let t = ComplexMatrix::from_rows(&[vec![z, i], vec![-i, z]]).unwrap();
        let res = pave_general(&t, 0.99, &exhaustive(), &cfg()).unwrap();
        assert_eq!(res.status, SearchStatus::Certified);
        assert_eq!(res.max_norm(), 0.0);

        let t = ComplexMatrix::from_rows(&[vec![z, C64::new(0.5, 0.5)], vec![z, z]]).unwrap();
        let res = pave_general(&t, 0.99, &exhaustive(), &cfg()).unwrap();
        assert_eq!(res.status, SearchStatus::Certified);
        assert!(verify_paving(&t, &res.blocks, Some(0.99)).unwrap().holds.unwrap());

        let zero = pave_general(&ComplexMatrix::zeros(2), 0.5, &exhaustive(), &cfg()).unwrap();
        assert_eq!(zero.status, SearchStatus::Certified);

        let diag = real(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!(matches!(
            pave_general(&diag, 0.5, &exhaustive(), &cfg()),
            Err(Error::NonzeroDiagonal { .. })
        ));
    }

    #[test]
    fn verify_examples() {
        let t = real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let rep = verify_paving(&t, &[vec![0, 1]], Some(2.0)).unwrap();
        assert_abs_diff_eq!(rep.max_ratio, 1.0, epsilon = 1e-12);
        assert_eq!(rep.holds, Some(true));
        assert!(matches!(
            verify_paving(&t, &[vec![0, 1], vec![1]], None),
            Err(Error::BadPartition(_))
        ));
        assert!(matches!(verify_paving(&t, &[vec![0]], None), Err(Error::BadPartition(_))));
    }
}
