//! Seeded random instances: Hermitian and unitary matrices, projections,
//! rank-one decompositions of the identity, trace-bounded PSD systems and
//! zero-diagonal operators.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix, HermitianMatrix, C64};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

/// `(G + G*) / 2` with complex Gaussian `G`.
pub fn hermitian(rng: &mut impl Rng, d: usize) -> HermitianMatrix {
    let g = ComplexMatrix::from_matrix(gaussian_matrix(rng, d, d)).expect("square");
    HermitianMatrix::hermitian_part(&g)
}

/// Columns orthonormal (`rows ≥ cols`), from the QR factor of a Gaussian matrix.
pub fn isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    if cols == 0 {
        return DMatrix::zeros(rows, 0);
    }
    gaussian_matrix(rng, rows, cols).qr().q()
}

pub fn unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_matrix(isometry(rng, d, d)).expect("square")
}

/// Orthogonal projection of rank `rank` onto a random subspace.
pub fn projection(rng: &mut impl Rng, d: usize, rank: usize) -> HermitianMatrix {
    let w = isometry(rng, d, rank);
    HermitianMatrix::hermitian_part(&ComplexMatrix::from_matrix(&w * w.adjoint()).expect("square"))
}

/// PSD matrix `G G*` with `G` Gaussian `d × rank`, scaled to unit trace.
pub fn psd(rng: &mut impl Rng, d: usize, rank: usize) -> HermitianMatrix {
    let g = gaussian_matrix(rng, d, rank);
    let p = HermitianMatrix::hermitian_part(&ComplexMatrix::from_matrix(&g * g.adjoint()).expect("square"));
    let t = p.trace();
    if t > 0.0 {
        p.scale(1.0 / t)
    } else {
        p
    }
}

/// `A_i = u_i u_i*` with `u_i` the conjugated rows of a random `m × d`
/// isometry, so `Σ A_i = I_d`. Requires `m ≥ d`.
pub fn rank_one_identity(rng: &mut impl Rng, d: usize, m: usize) -> Vec<HermitianMatrix> {
    let v = isometry(rng, m, d);
    (0..m)
        .map(|i| {
            let u: Vec<C64> = (0..d).map(|c| v[(i, c)].conj()).collect();
            HermitianMatrix::outer(&u)
        })
        .collect()
}

/// PSD matrices with `Σ A_i = I_d` and `Tr A_i ≤ epsilon`:
/// `A_i = α F_i + (1 − α) I/m` for a random rank-one decomposition `F_i` and
/// the largest admissible `α`. Requires `d/m ≤ epsilon` and `m ≥ d`.
pub fn trace_bounded_identity(rng: &mut impl Rng, d: usize, m: usize, epsilon: f64) -> Vec<HermitianMatrix> {
    let floor = d as f64 / m as f64;
    assert!(floor <= epsilon + 1e-12, "Tr A_i <= epsilon needs d/m <= epsilon");
    let f = rank_one_identity(rng, d, m);
    let top = f.iter().map(|a| a.trace()).fold(0.0, f64::max);
    let alpha = if top > floor {
        ((epsilon - floor) / (top - floor)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let flat = HermitianMatrix::identity(d).scale((1.0 - alpha) / m as f64);
    f.iter().map(|a| a.scale(alpha).add(&flat)).collect()
}

/// Hermitian with zero diagonal and unit spectral norm (zero if `d ≤ 1`).
pub fn zero_diagonal_hermitian(rng: &mut impl Rng, d: usize) -> HermitianMatrix {
    let h = hermitian(rng, d);
    let data = DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(0.0, 0.0) } else { h.get(i, j) });
    let z = HermitianMatrix::hermitian_part(&ComplexMatrix::from_matrix(data).expect("square"));
    let n = linalg::hermitian_norm(&z);
    if n > 0.0 {
        z.scale(1.0 / n)
    } else {
        z
    }
}

/// General complex matrix with zero diagonal and unit spectral norm.
pub fn zero_diagonal(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, d, d);
    let z = ComplexMatrix::from_fn(d, |i, j| if i == j { C64::new(0.0, 0.0) } else { g[(i, j)] });
    let n = linalg::spectral_norm(&z);
    if n > 0.0 {
        z.scale(C64::new(1.0 / n, 0.0))
    } else {
        z
    }
}

/// Hermitian with spectral norm uniform in `(0, 1]`.
pub fn selfadjoint_contraction(rng: &mut impl Rng, d: usize) -> HermitianMatrix {
    let h = hermitian(rng, d);
    let n = linalg::hermitian_norm(&h);
    let target: f64 = 1.0 - rng.gen::<f64>();
    if n > 0.0 {
        h.scale(target / n)
    } else {
        h
    }
}
