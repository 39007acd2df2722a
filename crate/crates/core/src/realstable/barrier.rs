//! Barrier functions `Φ^i_p = ∂_i p / p` of `p(z_1, …, z_m) = det(Σ z_i A_i)`.
//!
//! On the positive orthant Jacobi's formula gives the closed form
//! `Φ^i_p(x) = Tr((Σ x_k A_k)^{-1} A_i)`, and differentiating `k` times along
//! `e_j` gives `(−1)^k k! Tr((M^{-1} A_j)^k M^{-1} A_i)`. The checks here
//! compare that exact path against central finite differences and against the
//! coefficient-level polynomial.
//!
//! Matrix indices `i`, `j` are 0-based; the multiplier of `A_i` is variable
//! `i + 1` of the determinantal polynomial (variable 0 is `z`).

use nalgebra::DMatrix;
use serde::Serialize;

use super::{from_determinant, MultiPoly, PsdSystem};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix, C64};

const SINGULAR_TOL: f64 = 1e-13;

/// Samples along each coordinate ray when checking monotonicity and convexity.
const RAY_SAMPLES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeCheck {
    pub k: usize,
    /// `(−1)^k ∂^k_j Φ^i` by central differences.
    pub finite_difference: f64,
    /// The same quantity from the trace formula.
    pub exact: f64,
    /// Rounding floor of the finite difference; disagreements below it are
    /// not counted.
    pub noise_floor: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayCheck {
    /// 0-based coordinate direction `e_l`.
    pub coordinate: usize,
    pub monotone: Verdict,
    pub convex: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct BarrierReport {
    pub point: Vec<f64>,
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub positivity: Verdict,
    pub step: f64,
    pub derivatives: Vec<DerivativeCheck>,
    pub rays: Vec<RayCheck>,
    /// Rays are sampled on `[0, ray_extent]`.
    pub ray_extent: f64,
}

impl BarrierReport {
    pub fn passed(&self) -> bool {
        !self.positivity.is_fail()
            && self.derivatives.iter().all(|d| !d.verdict.is_fail())
            && self
                .rays
                .iter()
                .all(|r| !r.monotone.is_fail() && !r.convex.is_fail())
    }
}

fn check_point(system: &PsdSystem, x: &[f64], idx: &[usize]) -> Result<()> {
    if x.len() != system.m() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coordinates", system.m()),
            found: format!("{} coordinates", x.len()),
        });
    }
    if let Some(&bad) = idx.iter().find(|&&k| k >= system.m()) {
        return Err(Error::BadIndex {
            index: bad,
            nvars: system.m(),
        });
    }
    Ok(())
}

fn inverse_at(system: &PsdSystem, x: &[f64]) -> Result<HermitianMatrix> {
    linalg::hermitian_inverse(&system.weighted_sum(x), SINGULAR_TOL).ok_or(Error::SingularPoint)
}

fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    // Tr(AB) without forming AB
    let n = a.nrows();
    let mut t = C64::new(0.0, 0.0);
    for r in 0..n {
        for c in 0..n {
            t += a[(r, c)] * b[(c, r)];
        }
    }
    t.re
}

/// `Φ^j(x) = Tr((Σ x_i A_i)^{-1} A_j)`.
pub fn barrier(system: &PsdSystem, x: &[f64], j: usize) -> Result<f64> {
    check_point(system, x, &[j])?;
    let inv = inverse_at(system, x)?;
    Ok(trace_of_product(inv.as_matrix(), system.matrices()[j].as_matrix()))
}

/// `(−1)^k ∂^k_j Φ^i(x) = k! Tr((M^{-1} A_j)^k M^{-1} A_i)` with `M = Σ x_l A_l`.
pub fn barrier_derivative_exact(system: &PsdSystem, x: &[f64], i: usize, j: usize, k: usize) -> Result<f64> {
    check_point(system, x, &[i, j])?;
    let inv = inverse_at(system, x)?;
    let step = inv.as_matrix() * system.matrices()[j].as_matrix();
    let mut acc = DMatrix::<C64>::identity(system.dim(), system.dim());
    let mut factorial = 1.0;
    for l in 1..=k {
        acc = &acc * &step;
        factorial *= l as f64;
    }
    let tail = inv.as_matrix() * system.matrices()[i].as_matrix();
    Ok(factorial * trace_of_product(&acc, &tail))
}

/// `∂_var p / p` at a real point, straight from the coefficient tensor.
pub fn polynomial_barrier(p: &MultiPoly, point: &[f64], var: usize) -> Result<f64> {
    let value = p.eval_real(point)?;
    if value == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(p.partial(var)?.eval_real(point)? / value)
}

/// Default central-difference step for coordinate value `xj`.
pub fn default_step(xj: f64) -> f64 {
    1e-4 * (1.0 + xj.abs())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, l| acc * (n - l) as f64 / (l + 1) as f64)
}

/// Checks that `Σ y_i A_i ≻ 0` on a grid of points `y ≥ x` (five offsets per
/// axis, all combinations for `m ≤ 5`, axis and diagonal lines otherwise) and
/// in the limit direction `Σ A_i`. This is a heuristic stand-in for
/// zero-freeness of `p` on `{y ≥ x}`.
pub fn orthant_positivity_scan(system: &PsdSystem, x: &[f64]) -> bool {
    let m = system.m();
    let span = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let offsets = [0.0, 0.5 * span, 2.0 * span, 10.0 * span, 100.0 * span];
    let pd = |y: &[f64]| {
        let vals = linalg::eigenvalues(&system.weighted_sum(y));
        let top = vals.first().copied().unwrap_or(0.0);
        vals.last().is_some_and(|&low| low > SINGULAR_TOL * top.max(1.0))
    };
    if !pd(&vec![1.0; m]) {
        return false;
    }
    let shifted = |steps: &[usize]| -> Vec<f64> { x.iter().zip(steps).map(|(v, &s)| v + offsets[s]).collect() };
    if m <= 5 {
        let total = offsets.len().pow(m as u32);
        (0..total).all(|mut code| {
            let steps: Vec<usize> = (0..m)
                .map(|_| {
                    let s = code % offsets.len();
                    code /= offsets.len();
                    s
                })
                .collect();
            pd(&shifted(&steps))
        })
    } else {
        (0..offsets.len()).all(|s| {
            pd(&shifted(&vec![s; m]))
                && (0..m).all(|axis| {
                    let mut steps = vec![0; m];
                    steps[axis] = s;
                    pd(&shifted(&steps))
                })
        })
    }
}

/// Sign pattern of `Φ^i` at `x` and along coordinate rays.
///
/// Derivatives `k = 1..=kmax` along `e_j` are taken by central differences of
/// step `h` and compared with the exact trace formula; each must satisfy
/// `(−1)^k ∂^k ≥ −fd_tol` (finite-difference values get their rounding floor
/// added to the slack). Monotonicity (`kmax ≥ 1`) and convexity (`kmax ≥ 2`)
/// are sampled along every ray `x + t e_l` for `t ∈ [0, 10 (1 + ‖x‖_∞)]`.
pub fn barrier_sign_check(
    system: &PsdSystem,
    x: &[f64],
    i: usize,
    j: usize,
    kmax: usize,
    h: f64,
    cfg: &Config,
) -> Result<BarrierReport> {
    check_point(system, x, &[i, j])?;
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    if !orthant_positivity_scan(system, x) {
        return Err(Error::PreconditionUnverifiable(
            "Σ y_i A_i is not positive definite on the sampled orthant {y ≥ x}".into(),
        ));
    }
    let fd_tol = cfg.tol.fd;
    let value = barrier(system, x, i)?;
    let along = |t: f64, l: usize| -> Result<f64> {
        let mut y = x.to_vec();
        y[l] += t;
        barrier(system, &y, i)
    };

    let mut derivatives = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut fd = 0.0;
        let mut biggest = 0.0f64;
        for l in 0..=k {
            let t = (k as f64 / 2.0 - l as f64) * h;
            let g = along(t, j)?;
            biggest = biggest.max(g.abs());
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            fd += sign * binomial(k, l) * g;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let fd = sign * fd / h.powi(k as i32);
        let noise_floor = 64.0 * f64::EPSILON * 2f64.powi(k as i32) * biggest / h.powi(k as i32);
        let exact = barrier_derivative_exact(system, x, i, j, k)?;
        let ok = fd >= -(fd_tol + noise_floor)
            && exact >= -fd_tol
            && (fd - exact).abs() <= fd_tol * exact.abs().max(1.0) + noise_floor;
        derivatives.push(DerivativeCheck {
            k,
            finite_difference: fd,
            exact,
            noise_floor,
            verdict: Verdict::from_bool(ok),
        });
    }

    let ray_extent = 10.0 * (1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs())));
    let mut rays = Vec::with_capacity(system.m());
    for l in 0..system.m() {
        let ts: Vec<f64> = (0..=RAY_SAMPLES)
            .map(|s| ray_extent * (s as f64 / RAY_SAMPLES as f64).powi(2))
            .collect();
        let gs = ts.iter().map(|&t| along(t, l)).collect::<Result<Vec<_>>>()?;
        let monotone = if kmax >= 1 {
            Verdict::from_bool(gs.windows(2).all(|w| w[1] <= w[0] + fd_tol))
        } else {
            Verdict::NotApplicable
        };
        let convex = if kmax >= 2 {
            let slopes: Vec<f64> = (0..RAY_SAMPLES)
                .map(|s| (gs[s + 1] - gs[s]) / (ts[s + 1] - ts[s]))
                .collect();
            Verdict::from_bool(slopes.windows(2).all(|w| w[1] >= w[0] - fd_tol))
        } else {
            Verdict::NotApplicable
        };
        rays.push(RayCheck {
            coordinate: l,
            monotone,
            convex,
        });
    }

    Ok(BarrierReport {
        point: x.to_vec(),
        i,
        j,
        value,
        positivity: Verdict::from_bool(value >= -1e-12 * value.abs().max(1.0)),
        step: h,
        derivatives,
        rays,
        ray_extent,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftReport {
    pub j: usize,
    pub delta: f64,
    /// `Φ^j_p(x) + 1/δ`, required to be at most 1.
    pub precondition: f64,
    /// `Φ^i_{(1−∂_j)p}(x + δ e_j)` for each `i`.
    pub shifted: Vec<f64>,
    /// `Φ^i_p(x)` for each `i`.
    pub original: Vec<f64>,
    pub holds: bool,
}

/// Verifies `Φ^i_{(1−∂_j)p}(x + δ e_j) ≤ Φ^i_p(x)` for every `i`.
///
/// The left side goes through the coefficient tensor: `p` is the
/// determinantal polynomial restricted to `z = 0`, then `(1 − ∂_j)` is applied
/// and the ratio `∂_i/·` evaluated. The right side uses the trace formula.
pub fn barrier_shift_check(system: &PsdSystem, x: &[f64], j: usize, delta: f64, cfg: &Config) -> Result<ShiftReport> {
    check_point(system, x, &[j])?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::PreconditionFailed(format!("δ must be positive, got {delta}")));
    }
    let phi_j = barrier(system, x, j)?;
    let precondition = phi_j + 1.0 / delta;
    if precondition > 1.0 + 1e-12 {
        return Err(Error::PreconditionFailed(format!(
            "Φ^j(x) + 1/δ = {precondition} exceeds 1"
        )));
    }
    let q = from_determinant(system, cfg.budget.interpolation)?;
    let p = q.restrict(0, 0.0)?;
    let shifted_poly = p.one_minus_partial(j + 1)?;
    let mut y = vec![0.0];
    y.extend_from_slice(x);
    y[j + 1] += delta;

    let m = system.m();
    let mut shifted = Vec::with_capacity(m);
    let mut original = Vec::with_capacity(m);
    for i in 0..m {
        shifted.push(polynomial_barrier(&shifted_poly, &y, i + 1)?);
        original.push(barrier(system, x, i)?);
    }
    let holds = shifted
        .iter()
        .zip(&original)
        .all(|(l, r)| *l <= r + cfg.tol.fd);
    Ok(ShiftReport {
        j,
        delta,
        precondition,
        shifted,
        original,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Tolerances;
    use approx::assert_abs_diff_eq;

    fn diagonal_pair() -> PsdSystem {
        PsdSystem::new(
            2,
            vec![
                HermitianMatrix::from_diagonal(&[1.0, 0.0]),
                HermitianMatrix::from_diagonal(&[0.0, 1.0]),
            ],
            &Tolerances::default(),
        )
        .unwrap()
    }

    #[test]
    fn barrier_of_diagonal_system() {
        assert_abs_diff_eq!(barrier(&diagonal_pair(), &[2.0, 5.0], 0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(barrier(&diagonal_pair(), &[2.0, 5.0], 1).unwrap(), 0.2, epsilon = 1e-14);
    }

    #[test]
    fn barrier_at_uniform_point_is_trace_over_t() {
        // d = 1, A_1 + A_2 = I, Tr A_1 = 0.3
        let s = PsdSystem::new(
            1,
            vec![HermitianMatrix::from_diagonal(&[0.3]), HermitianMatrix::from_diagonal(&[0.7])],
            &Tolerances::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(barrier(&s, &[2.0, 2.0], 0).unwrap(), 0.15, epsilon = 1e-14);
    }

    #[test]
    fn singular_point() {
        assert!(matches!(barrier(&diagonal_pair(), &[1.0, 0.0], 0), Err(Error::SingularPoint)));
    }

    #[test]
    fn sign_check_diagonal() {
        let cfg = Config::default();
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let r = barrier_sign_check(&diagonal_pair(), &[1.0, 1.0], i, j, 3, default_step(1.0), &cfg).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        // Φ^1 = 1/x_1: second derivative is 2/x_1^3 = 2
        let r = barrier_sign_check(&diagonal_pair(), &[1.0, 1.0], 0, 0, 2, default_step(1.0), &cfg).unwrap();
        assert_abs_diff_eq!(r.derivatives[1].exact, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.derivatives[1].finite_difference, 2.0, epsilon = 1e-5);
    }

    #[test]
    fn kmax_zero_is_positivity_only() {
        let r = barrier_sign_check(&diagonal_pair(), &[1.0, 3.0], 1, 0, 0, 1e-4, &Config::default()).unwrap();
        assert!(r.derivatives.is_empty());
        assert!(r.rays.iter().all(|ray| ray.monotone == Verdict::NotApplicable));
        assert_eq!(r.positivity, Verdict::Pass);
        assert!(r.passed());
    }

    #[test]
    fn sign_check_needs_positive_orthant() {
        let s = PsdSystem::new(2, vec![HermitianMatrix::from_diagonal(&[1.0, 0.0])], &Tolerances::default()).unwrap();
        assert!(matches!(
            barrier_sign_check(&s, &[1.0], 0, 0, 1, 1e-4, &Config::default()),
            Err(Error::PreconditionUnverifiable(_))
        ));
    }

    #[test]
    fn shift_check_diagonal() {
        let r = barrier_shift_check(&diagonal_pair(), &[4.0, 4.0], 0, 2.0, &Config::default()).unwrap();
        assert!(r.holds);
        assert_abs_diff_eq!(r.precondition, 0.75, epsilon = 1e-14);
        // p = z1 z2, (1-∂_1)p = z1 z2 - z2 = z2 (z1 - 1); at (6, 4): Φ^1 = 1/5, Φ^2 = 1/4
        assert_abs_diff_eq!(r.shifted[0], 0.2, epsilon = 1e-10);
        assert_abs_diff_eq!(r.shifted[1], 0.25, epsilon = 1e-10);
        let huge = barrier_shift_check(&diagonal_pair(), &[4.0, 4.0], 1, 1e12, &Config::default()).unwrap();
        assert!(huge.holds);
        assert!(matches!(
            barrier_shift_check(&diagonal_pair(), &[4.0, 4.0], 0, 1.2, &Config::default()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn polynomial_barrier_matches_trace_formula() {
        let s = diagonal_pair();
        let p = from_determinant(&s, 1_000_000).unwrap().restrict(0, 0.0).unwrap();
        let v = polynomial_barrier(&p, &[0.0, 2.0, 5.0], 1).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }
}
