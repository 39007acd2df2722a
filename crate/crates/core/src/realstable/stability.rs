//! One-sided search for zeros of a polynomial in the open upper half-plane
//! product `ℍ^m`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MultiPoly;

/// A root counts as lying in `ℍ` only if `Im z > margin · (1 + |z|)`.
const HALF_PLANE_MARGIN: f64 = 1e-7;
/// Leading fiber coefficients below this fraction of the largest are dropped.
const LEADING_TRIM: f64 = 1e-12;

/// Looks for a point of `ℍ^m` where `p` vanishes.
///
/// Each sample fixes all coordinates but one at random points of `ℍ`, solves
/// the resulting univariate polynomial in the free coordinate, and accepts a
/// root lying strictly inside `ℍ` if `|p|` there is at most
/// `stability_tol · Σ|c_e z^e|`. Returns the first such point. Finding none
/// proves nothing.
pub fn stability_falsifier(p: &MultiPoly, samples: usize, seed: u64, stability_tol: f64) -> Option<Vec<Complex64>> {
    let n = p.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let active: Vec<usize> = (0..n).filter(|&v| p.degree_bounds()[v] > 0).collect();
    if p.is_zero() {
        return Some(vec![Complex64::new(0.0, 1.0); n]);
    }
    if active.is_empty() {
        return None;
    }
    for s in 0..samples {
        let free = active[s % active.len()];
        let mut point: Vec<Complex64> = (0..n).map(|_| sample_upper(&mut rng)).collect();
        let fiber = fiber_coefficients(p, &point, free);
        let scale = fiber.iter().fold(0.0f64, |a, c| a.max(c.norm()));
        if scale == 0.0 {
            continue;
        }
        for root in complex_poly_roots(&fiber) {
            if root.im <= HALF_PLANE_MARGIN * (1.0 + root.norm()) {
                continue;
            }
            point[free] = root;
            let value = p.eval(&point).expect("arity matches");
            if value.norm() <= stability_tol * p.eval_abs_scale(&point) {
                return Some(point);
            }
        }
    }
    None
}

fn sample_upper(rng: &mut impl Rng) -> Complex64 {
    let re = rng.gen_range(-4.0..4.0);
    let im = (rng.gen_range((1e-2f64).ln()..(4.0f64).ln())).exp();
    Complex64::new(re, im)
}

/// Coefficients (ascending) of `p` as a polynomial in `z_free`, with the other
/// coordinates fixed at `point`.
fn fiber_coefficients(p: &MultiPoly, point: &[Complex64], free: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.degree_bounds()[free] + 1];
    for (e, c) in p.terms() {
        let mono = e
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != free)
            .fold(Complex64::new(c, 0.0), |acc, (v, &k)| acc * point[v].powu(k as u32));
        out[e[free]] += mono;
    }
    out
}

/// Roots of a complex polynomial from the eigenvalues of its companion matrix.
fn complex_poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |a, c| a.max(c.norm()));
    let mut top = coeffs.len();
    while top > 0 && coeffs[top - 1].norm() <= LEADING_TRIM * scale {
        top -= 1;
    }
    if top <= 1 {
        return Vec::new();
    }
    let c = &coeffs[..top];
    let k = top - 1;
    let lead = c[k];
    let mut companion = DMatrix::<Complex64>::zeros(k, k);
    for i in 1..k {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..k {
        companion[(i, k - 1)] = -c[i] / lead;
    }
    Schur::try_new(companion, f64::EPSILON, 100_000)
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_zero_of_non_stable_polynomial() {
        // z1 z2 + 1 vanishes on z2 = -1/z1, which maps ℍ to ℍ
        let p = MultiPoly::from_terms(2, &[(vec![1, 1], 1.0), (vec![0, 0], 1.0)]).unwrap();
        let hit = stability_falsifier(&p, 100_000, 11, 1e-9).expect("counterexample");
        assert!(hit.iter().all(|z| z.im > 0.0));
        assert!(p.eval(&hit).unwrap().norm() < 1e-8);
        let want = -Complex64::new(1.0, 0.0) / hit[0];
        assert!((hit[1] - want).norm() < 1e-8);
    }

    #[test]
    fn stable_products_have_no_counterexample() {
        // (z1 + z2)(z1 + 2 z2 + 1)
        let p = MultiPoly::from_terms(
            2,
            &[
                (vec![2, 0], 1.0),
                (vec![1, 1], 3.0),
                (vec![0, 2], 2.0),
                (vec![1, 0], 1.0),
                (vec![0, 1], 1.0),
            ],
        )
        .unwrap();
        assert_eq!(stability_falsifier(&p, 10_000, 5, 1e-9), None);
    }

    #[test]
    fn constants() {
        assert_eq!(stability_falsifier(&MultiPoly::constant(3, 1.0), 100, 0, 1e-9), None);
        assert!(stability_falsifier(&MultiPoly::constant(2, 0.0), 100, 0, 1e-9).is_some());
    }

    #[test]
    fn complex_roots_of_quadratic() {
        let mut r = complex_poly_roots(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }
}
