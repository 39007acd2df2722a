//! `q(z, z_1, …, z_m) = det(zI + Σ z_i A_i)` by tensor-product interpolation.

use nalgebra::DMatrix;

use super::{MultiPoly, PsdSystem};
use crate::error::{Error, Result};
use crate::linalg::{determinant, ComplexMatrix, C64};
use crate::par;

/// Number of determinant evaluations `from_determinant` needs.
pub fn interpolation_grid_size(system: &PsdSystem) -> u128 {
    (system.dim() as u128 + 1)
        * system
            .interpolation_degrees()
            .iter()
            .map(|&k| k as u128 + 1)
            .product::<u128>()
}

/// Coefficient tensor of `det(zI + Σ z_i A_i)`; variable 0 is `z` and
/// variable `i + 1` is the multiplier of `A_i`.
///
/// The polynomial has degree `d` in `z` and degree `rank(A_i)` in `z_i`, so it
/// is recovered exactly (up to rounding) from its values on the integer grid
/// `{0..d} × Π {0..rank(A_i)}`. Terms whose total degree is not `d` vanish
/// identically and are zeroed.
pub fn from_determinant(system: &PsdSystem, budget: u64) -> Result<MultiPoly> {
    let required = interpolation_grid_size(system);
    if required > budget as u128 {
        return Err(Error::DimensionTooLarge {
            required,
            budget: budget as u128,
        });
    }
    let d = system.dim();
    let mut degrees = vec![d];
    degrees.extend_from_slice(system.interpolation_degrees());
    let grid = MultiPoly::zero(degrees.clone());
    let n = grid.coeffs().len();

    // Each node's determinant lands in its own slot.
    let values = par::map_range(n, |k| {
        let nodes = grid.exponents_of(k);
        let mut m = DMatrix::<C64>::identity(d, d) * C64::new(nodes[0] as f64, 0.0);
        for (a, &t) in system.matrices().iter().zip(&nodes[1..]) {
            if t != 0 {
                m += a.as_matrix() * C64::new(t as f64, 0.0);
            }
        }
        determinant(&ComplexMatrix::from_matrix(m).expect("square")).re
    });

    let mut coeffs = values;
    let strides = strides(&degrees);
    for (axis, &deg) in degrees.iter().enumerate() {
        if deg == 0 {
            continue;
        }
        let inv = integer_vandermonde_inverse(deg);
        let stride = strides[axis];
        let mut fiber = vec![0.0; deg + 1];
        for base in 0..n {
            if !(base / stride).is_multiple_of(deg + 1) {
                continue;
            }
            for (e, f) in fiber.iter_mut().enumerate() {
                *f = coeffs[base + e * stride];
            }
            for row in 0..=deg {
                coeffs[base + row * stride] = (0..=deg).map(|a| inv[(row, a)] * fiber[a]).sum();
            }
        }
    }
    Ok(MultiPoly::from_tensor(degrees, coeffs)?.homogeneous_part(d))
}

fn strides(degrees: &[usize]) -> Vec<usize> {
    let mut s = vec![1; degrees.len()];
    for v in (0..degrees.len().saturating_sub(1)).rev() {
        s[v] = s[v + 1] * (degrees[v + 1] + 1);
    }
    s
}

/// Inverse of the Vandermonde matrix `V[a][k] = a^k` on nodes `0..=n`, built
/// from the Lagrange basis: column `a` holds the coefficients of
/// `Π_{b≠a} (x − b) / Π_{b≠a} (a − b)`. Numerators are exact integers.
fn integer_vandermonde_inverse(n: usize) -> DMatrix<f64> {
    let mut inv = DMatrix::zeros(n + 1, n + 1);
    for a in 0..=n {
        let mut num = vec![1.0];
        let mut denom = 1.0;
        for b in (0..=n).filter(|&b| b != a) {
            let mut next = vec![0.0; num.len() + 1];
            for (k, &c) in num.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= b as f64 * c;
            }
            num = next;
            denom *= a as f64 - b as f64;
        }
        for (k, c) in num.iter().enumerate() {
            inv[(k, a)] = c / denom;
        }
    }
    inv
}
