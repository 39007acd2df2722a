//! The mixed characteristic polynomial
//! `μ[A_1, …, A_m](z) = Π_i (1 − ∂_i) det(zI + Σ z_i A_i) |_{z_1 = … = z_m = 0}`.
//!
//! Two independent algorithms are available. The general one interpolates the
//! determinantal polynomial and applies the operators coefficient-wise. For
//! rank-one `A_i` the determinant is affine in each `z_i`, so
//! `(1 − ∂_i) f |_{z_i=0} = 2 f(0) − f(1)` and
//! `μ = Σ_{T ⊆ [m]} (−1)^{|T|} 2^{m−|T|} det(zI + Σ_{i∈T} A_i)`.
//! When both apply they are run and required to agree.

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix};
use crate::par;
use crate::realstable::{from_determinant, interpolation_grid_size, PsdSystem};
use crate::unipoly::{real_roots, RealPoly};

/// Coefficients below this fraction of the largest are rounding residue.
const SNAP_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Interpolation,
    InclusionExclusion,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedCharResult {
    /// Monic of degree `d`, coefficients ascending.
    pub mu: RealPoly,
    /// Descending.
    pub roots: Vec<f64>,
    pub method: Method,
    /// `(1 + √ε)²` with `ε = max Tr A_i`, present when `Σ A_i = I`.
    pub bound: Option<f64>,
    /// Coefficient deviation between the two algorithms, when both ran.
    pub cross_check_deviation: Option<f64>,
}

/// `(1 + √ε)²`.
pub fn root_bound(epsilon: f64) -> f64 {
    (1.0 + epsilon.sqrt()).powi(2)
}

/// `μ` without root extraction.
pub fn mixed_char_poly(system: &PsdSystem, cfg: &Config) -> Result<(RealPoly, Method, Option<f64>)> {
    let d = system.dim();
    let m = system.m();
    if m == 0 {
        return Ok((RealPoly::monomial(d), Method::Interpolation, None));
    }
    let fast_ok = system.all_rank_one() && m < 64 && (1u64 << m) <= cfg.budget.subsets;
    let grid = interpolation_grid_size(system);
    if grid > cfg.budget.interpolation as u128 {
        if fast_ok {
            return Ok((inclusion_exclusion(system, cfg)?, Method::InclusionExclusion, None));
        }
        return Err(Error::DimensionTooLarge {
            required: grid,
            budget: cfg.budget.interpolation as u128,
        });
    }
    let mu = by_interpolation(system, cfg)?;
    if !fast_ok {
        return Ok((mu, Method::Interpolation, None));
    }
    let other = inclusion_exclusion(system, cfg)?;
    let deviation = mu.max_coeff_deviation(&other);
    let tolerance = cfg.tol.cross_check * mu.max_abs_coeff().max(1.0);
    if deviation > tolerance {
        return Err(Error::CrossCheckFailed { deviation, tolerance });
    }
    Ok((mu, Method::Interpolation, Some(deviation)))
}

/// `μ`, its roots, and the root bound when `Σ A_i = I`.
pub fn mixed_char(system: &PsdSystem, cfg: &Config) -> Result<MixedCharResult> {
    let (mu, method, cross_check_deviation) = mixed_char_poly(system, cfg)?;
    let roots = real_roots(&mu, cfg.tol.root)?;
    Ok(MixedCharResult {
        mu,
        roots,
        method,
        bound: system.sum_is_identity().then(|| root_bound(system.trace_bound())),
        cross_check_deviation,
    })
}

/// Roots of `μ`, descending. Failure means bad input or numerical trouble.
pub fn mixed_real_rooted(system: &PsdSystem, cfg: &Config) -> Result<Vec<f64>> {
    Ok(mixed_char(system, cfg)?.roots)
}

#[derive(Debug, Clone, Serialize)]
pub struct RootBound {
    pub largest_root: f64,
    pub epsilon: f64,
    pub bound: f64,
    /// `bound − largest_root`.
    pub margin: f64,
}

/// Largest root of `μ` against `(1 + √ε)²`; requires `Σ A_i = I`.
pub fn mixed_root_bound(system: &PsdSystem, cfg: &Config) -> Result<RootBound> {
    if !system.sum_is_identity() {
        return Err(Error::PreconditionFailed("the matrices do not sum to the identity".into()));
    }
    let roots = mixed_real_rooted(system, cfg)?;
    let epsilon = system.trace_bound();
    let bound = root_bound(epsilon);
    let largest_root = roots.first().copied().unwrap_or(f64::NEG_INFINITY);
    Ok(RootBound {
        largest_root,
        epsilon,
        bound,
        margin: bound - largest_root,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RankOneIdentity {
    /// `det(zI − Σ A_i)`.
    pub char_poly: RealPoly,
    pub mu: RealPoly,
    pub deviation: f64,
    /// `cross_check · max(1, max|coeff|)`.
    pub tolerance: f64,
}

impl RankOneIdentity {
    pub fn holds(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Compares `μ[A_1, …, A_m]` with the characteristic polynomial of `Σ A_i`
/// for rank-one `A_i`.
pub fn rank_one_identity_check(system: &PsdSystem, cfg: &Config) -> Result<RankOneIdentity> {
    if let Some(index) = first_non_rank_one(system, cfg) {
        return Err(Error::NotRankOne { index });
    }
    let char_poly = linalg::char_poly(&system.sum());
    let (mu, _, _) = mixed_char_poly(system, cfg)?;
    let deviation = char_poly.max_coeff_deviation(&mu);
    let scale = char_poly.max_abs_coeff().max(mu.max_abs_coeff()).max(1.0);
    Ok(RankOneIdentity {
        char_poly,
        mu,
        deviation,
        tolerance: cfg.tol.cross_check * scale,
    })
}

fn first_non_rank_one(system: &PsdSystem, cfg: &Config) -> Option<usize> {
    system.matrices().iter().position(|a| {
        let vals = linalg::eigenvalues(a);
        let scale = vals.first().copied().unwrap_or(0.0).max(1.0);
        vals.iter().filter(|&&l| l > cfg.tol.psd_clamp * scale).count() > 1
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineCheck {
    pub deviation: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// `μ` with slot `i` set to `tA + (1−t)B` against `t μ(A) + (1−t) μ(B)`.
pub fn affine_in_each_argument_check(
    system: &PsdSystem,
    i: usize,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
    cfg: &Config,
) -> Result<AffineCheck> {
    if i >= system.m() {
        return Err(Error::BadIndex {
            index: i,
            nvars: system.m(),
        });
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("t must lie in [0, 1], got {t}")));
    }
    let with_slot = |x: HermitianMatrix| -> Result<RealPoly> {
        let mut mats = system.matrices().to_vec();
        mats[i] = x;
        let s = PsdSystem::new(system.dim(), mats, &cfg.tol)?;
        Ok(mixed_char_poly(&s, cfg)?.0)
    };
    let mixed = with_slot(a.scale(t).add(&b.scale(1.0 - t)))?;
    let mu_a = with_slot(a.clone())?;
    let mu_b = with_slot(b.clone())?;
    let combo = mu_a.scale(t).add(&mu_b.scale(1.0 - t));
    let deviation = mixed.max_coeff_deviation(&combo);
    let tolerance = cfg.tol.cross_check * mixed.max_abs_coeff().max(1.0);
    Ok(AffineCheck {
        deviation,
        tolerance,
        holds: deviation <= tolerance,
    })
}

/// Interpolation path: `(1 − ∂_{i+1})` then `z_{i+1} = 0` for every `i`.
fn by_interpolation(system: &PsdSystem, cfg: &Config) -> Result<RealPoly> {
    let mut q = from_determinant(system, cfg.budget.interpolation)?;
    for v in 1..=system.m() {
        q = q.one_minus_partial(v)?.restrict(v, 0.0)?;
    }
    Ok(normalize(q.to_univariate(0)?, system.dim()))
}

/// Inclusion–exclusion over subsets; valid only for rank-one matrices.
pub fn inclusion_exclusion(system: &PsdSystem, cfg: &Config) -> Result<RealPoly> {
    let m = system.m();
    let required = 1u128 << m.min(127);
    if m >= 64 || required > cfg.budget.subsets as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: cfg.budget.subsets as u128,
        });
    }
    let d = system.dim();
    let terms = par::map_range(1usize << m, |mask| {
        let members = (0..m).filter(|&i| mask >> i & 1 == 1);
        let size = members.clone().count();
        let sum = HermitianMatrix::sum(d, members.map(|i| &system.matrices()[i]));
        // det(zI + M) has roots −λ(M)
        let p = linalg::char_poly(&sum.scale(-1.0));
        let sign = if size % 2 == 0 { 1.0 } else { -1.0 };
        p.scale(sign * 2f64.powi((m - size) as i32))
    });
    let total = terms.iter().fold(RealPoly::zero(), |acc, p| acc.add(p));
    Ok(normalize(total, d))
}

/// Snaps rounding residue and pins the leading coefficient `z^d` to 1.
fn normalize(p: RealPoly, d: usize) -> RealPoly {
    let mut c = p.snapped(SNAP_REL).coeffs().to_vec();
    c.resize(d + 1, 0.0);
    c[d] = 1.0;
    RealPoly::new(c)
}
