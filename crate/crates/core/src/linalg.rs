//! Dense complex and Hermitian matrices.
//!
//! Everything here is small and dense (dimensions up to a few dozen), so the
//! heavy lifting is delegated to `nalgebra`: the Hermitian eigensolver backs
//! eigenvalues, norms, ranks, square roots and characteristic polynomials.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unipoly::RealPoly;

pub type C64 = Complex64;

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            data: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Wraps an existing `nalgebra` matrix; it must be square.
    pub fn from_matrix(data: DMatrix<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", data.nrows(), data.ncols()),
            });
        }
        Ok(Self { data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::ShapeMismatch {
                expected: format!("row of length {dim}"),
                found: format!("row {} of length {}", i + 1, row.len()),
            });
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: &self.data * s,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise gap `|M_ij − conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Restriction `Q M Q` to the coordinates in `indices` (0-based), returned
    /// as the compressed `k×k` block.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |a, b| self.data[(indices[a], indices[b])])
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data * &rhs.data,
        }
    }
}

/// A complex matrix equal to its conjugate transpose.
///
/// Construction checks the asymmetry against the tolerance and then stores the
/// exact Hermitian part `(M + M*)/2`, so downstream code may rely on exact
/// symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix, hermitian_tol: f64) -> Result<Self> {
        let deviation = m.hermitian_defect();
        if deviation > hermitian_tol * m.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(M + M*)/2`, without any check.
    pub fn hermitian_part(m: &ComplexMatrix) -> Self {
        let data = (m.as_matrix() + m.as_matrix().adjoint()) * C64::new(0.5, 0.0);
        Self(ComplexMatrix { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_fn(diag.len(), |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn from_real_rows(rows: &[Vec<f64>], hermitian_tol: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?, hermitian_tol)
    }

    /// The rank-one matrix `v v*`.
    pub fn outer(v: &[C64]) -> Self {
        Self(ComplexMatrix::from_fn(v.len(), |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        self.0.as_matrix()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(C64::new(s, 0.0)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// `U M U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::hermitian_part(&(&(u * &self.0) * &u.adjoint()))
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        Self(self.0.principal_submatrix(indices))
    }

    /// Sum of a slice of equally sized matrices; `dim` covers the empty case.
    pub fn sum<'a>(dim: usize, items: impl IntoIterator<Item = &'a HermitianMatrix>) -> Self {
        let mut acc = DMatrix::<C64>::zeros(dim, dim);
        for m in items {
            acc += m.as_matrix();
        }
        Self(ComplexMatrix { data: acc })
    }

    /// Direct sum `blocks[0] ⊕ blocks[1] ⊕ …`.
    pub fn direct_sum(blocks: &[HermitianMatrix]) -> Self {
        let total: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut data = DMatrix::<C64>::zeros(total, total);
        let mut offset = 0;
        for b in blocks {
            let d = b.dim();
            data.view_mut((offset, offset), (d, d)).copy_from(b.as_matrix());
            offset += d;
        }
        Self(ComplexMatrix { data })
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending
/// and eigenvectors (columns) permuted to match.
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

pub fn eigh(m: &HermitianMatrix) -> Eigh {
    let d = m.dim();
    if d == 0 {
        return Eigh {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(m.as_matrix().clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(d, d, |i, c| eig.eigenvectors[(i, order[c])]);
    Eigh { values, vectors }
}

/// Eigenvalues in descending order.
pub fn eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    if m.dim() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.as_matrix().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.dim() == 0 {
        return 0.0;
    }
    if m.hermitian_defect() == 0.0 {
        return hermitian_norm(&HermitianMatrix(m.clone()));
    }
    m.as_matrix()
        .clone()
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}

/// `max |λ_i|` of a Hermitian matrix.
pub fn hermitian_norm(m: &HermitianMatrix) -> f64 {
    eigenvalues(m).iter().fold(0.0f64, |acc, &l| acc.max(l.abs()))
}

/// Monic characteristic polynomial `det(zI − M)`, expanded from the eigenvalues.
pub fn char_poly(m: &HermitianMatrix) -> RealPoly {
    RealPoly::from_roots(&eigenvalues(m))
}

pub fn is_psd(m: &HermitianMatrix, tol: f64) -> bool {
    eigenvalues(m).last().is_none_or(|&l| l >= -tol)
}

/// `‖P² − P‖ ≤ tol` (spectral norm).
pub fn projection_defect(m: &HermitianMatrix) -> f64 {
    let sq = m.as_complex() * m.as_complex();
    spectral_norm(&(&sq - m.as_complex()))
}

pub fn is_projection(m: &HermitianMatrix, tol: f64) -> bool {
    projection_defect(m) <= tol
}

/// Number of eigenvalues with `|λ| > tol · max(1, ‖M‖)`.
pub fn numeric_rank(m: &HermitianMatrix, tol: f64) -> usize {
    let vals = eigenvalues(m);
    let scale = vals.iter().fold(1.0f64, |acc, &l| acc.max(l.abs()));
    vals.iter().filter(|l| l.abs() > tol * scale).count()
}

pub fn diag_vector(m: &ComplexMatrix) -> Vec<C64> {
    (0..m.dim()).map(|i| m.get(i, i)).collect()
}

/// Principal square root of a PSD matrix; eigenvalues in `[-clamp_tol, 0)`
/// are clamped to zero.
pub fn sqrt_psd(m: &HermitianMatrix, clamp_tol: f64) -> Result<HermitianMatrix> {
    let Eigh { values, vectors } = eigh(m);
    if let Some(&low) = values.last() {
        if low < -clamp_tol {
            return Err(Error::NotPsd { eigenvalue: low });
        }
    }
    let d = m.dim();
    let roots: Vec<f64> = values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let scaled = DMatrix::from_fn(d, d, |i, c| vectors[(i, c)] * roots[c]);
    let data = &scaled * vectors.adjoint();
    Ok(HermitianMatrix::hermitian_part(&ComplexMatrix { data }))
}

/// Orthonormal basis (as columns) of the eigenspace with eigenvalues above
/// `threshold`.
pub fn range_basis(m: &HermitianMatrix, threshold: f64) -> DMatrix<C64> {
    let Eigh { values, vectors } = eigh(m);
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > threshold).collect();
    DMatrix::from_fn(m.dim(), keep.len(), |i, c| vectors[(i, keep[c])])
}

/// Inverse of an invertible Hermitian matrix, or `None` if the smallest
/// eigenvalue magnitude is below `rel_tol · max(1, ‖M‖)`.
pub fn hermitian_inverse(m: &HermitianMatrix, rel_tol: f64) -> Option<HermitianMatrix> {
    let Eigh { values, vectors } = eigh(m);
    let scale = values.iter().fold(1.0f64, |acc, &l| acc.max(l.abs()));
    if values.iter().any(|l| l.abs() <= rel_tol * scale) {
        return None;
    }
    let d = m.dim();
    let scaled = DMatrix::from_fn(d, d, |i, c| vectors[(i, c)] / values[c]);
    let data = &scaled * vectors.adjoint();
    Some(HermitianMatrix::hermitian_part(&ComplexMatrix { data }))
}

/// Determinant by LU.
pub fn determinant(m: &ComplexMatrix) -> C64 {
    if m.dim() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.as_matrix().clone().lu().determinant()
}

/// JSON form `{"dim": d, "entries": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.dim),
                found: format!("{} rows", self.entries.len()),
            });
        }
        let rows: Vec<Vec<C64>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
            .collect();
        let m = ComplexMatrix::from_rows(&rows)?;
        if m.as_matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn half_ones() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]], 1e-10).unwrap()
    }

    #[test]
    fn eigenvalues_of_small_examples() {
        assert_eq!(eigenvalues(&HermitianMatrix::from_diagonal(&[1.0, 2.0])), vec![2.0, 1.0]);
        assert_eq!(eigenvalues(&HermitianMatrix::zeros(3)), vec![0.0; 3]);
        let swap = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-10).unwrap();
        let ev = eigenvalues(&swap);
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m, 1e-10), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::from_rows(&[vec![c(0.0), C64::new(0.0, 1.0)], vec![C64::new(0.0, -1.0), c(0.0)]])
            .unwrap();
        assert!(HermitianMatrix::new(m, 1e-10).is_ok());
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!(spectral_norm(&ComplexMatrix::identity(3)), 1.0, epsilon = 1e-14);
        let d = HermitianMatrix::from_diagonal(&[-2.0, 1.0]);
        assert_abs_diff_eq!(spectral_norm(d.as_complex()), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(spectral_norm(half_ones().as_complex()), 1.0, epsilon = 1e-14);
        let nilpotent = ComplexMatrix::from_real_rows(&[vec![0.0, 3.0], vec![0.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(spectral_norm(&nilpotent), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn characteristic_polynomials() {
        let p = char_poly(&HermitianMatrix::from_diagonal(&[1.0, 2.0]));
        assert_eq!(p.coeffs(), &[2.0, -3.0, 1.0]);
        let p = char_poly(&HermitianMatrix::zeros(2));
        assert_eq!(p.coeffs(), &[0.0, 0.0, 1.0]);
        let p = char_poly(&half_ones());
        assert_abs_diff_eq!(p.coeffs()[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.coeffs()[1], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.coeffs()[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn structural_predicates() {
        assert!(is_projection(&half_ones(), 1e-12));
        assert!(!is_projection(&HermitianMatrix::from_diagonal(&[2.0]), 1e-12));
        let e1 = HermitianMatrix::outer(&[c(1.0), c(0.0), c(0.0)]);
        assert_eq!(numeric_rank(&e1, 1e-10), 1);
        assert_eq!(numeric_rank(&HermitianMatrix::zeros(2), 1e-10), 0);
        assert!(is_psd(&e1, 1e-12));
        assert!(!is_psd(&HermitianMatrix::from_diagonal(&[1.0, -1e-3]), 1e-8));
        assert_eq!(diag_vector(half_ones().as_complex()), vec![c(0.5), c(0.5)]);
    }

    #[test]
    fn square_roots() {
        let s = sqrt_psd(&HermitianMatrix::from_diagonal(&[4.0, 9.0]), 1e-8).unwrap();
        assert_abs_diff_eq!(s.get(0, 0).re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(1, 1).re, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(0, 1).norm(), 0.0, epsilon = 1e-14);
        // tiny negative eigenvalue is clamped
        assert!(sqrt_psd(&HermitianMatrix::from_diagonal(&[1.0, -1e-10]), 1e-8).is_ok());
        assert!(matches!(
            sqrt_psd(&HermitianMatrix::from_diagonal(&[1.0, -1e-3]), 1e-8),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn direct_sum_and_submatrix() {
        let a = HermitianMatrix::from_diagonal(&[1.0]);
        let b = half_ones();
        let s = HermitianMatrix::direct_sum(&[a, b]);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.get(1, 2), c(0.5));
        assert_eq!(s.get(0, 1), c(0.0));
        let sub = s.principal_submatrix(&[0, 2]);
        assert_eq!(sub.get(1, 1), c(0.5));
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0), C64::new(0.0, 2.0)], vec![c(3.0), c(4.0)]]).unwrap();
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.entries[0][1], [0.0, 2.0]);
        assert_eq!(j.to_matrix().unwrap(), m);
        let bad = MatrixJson {
            dim: 2,
            entries: vec![vec![[0.0, 0.0]]],
        };
        assert!(matches!(bad.to_matrix(), Err(Error::ShapeMismatch { .. })));
    }
}
