use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::unipoly::RealPoly;

/// Dense real polynomial in `nvars` variables.
///
/// Coefficients live in a row-major tensor whose axis `v` has length
/// `degree_bounds[v] + 1`; variable 0 varies slowest. Restriction keeps the
/// restricted variable (with degree bound 0) so variable indices stay stable
/// through a chain of operations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiPoly {
    degrees: Vec<usize>,
    coeffs: Vec<f64>,
}

impl MultiPoly {
    pub fn zero(degrees: Vec<usize>) -> Self {
        let len = degrees.iter().map(|d| d + 1).product();
        Self {
            degrees,
            coeffs: vec![0.0; len],
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(vec![0; nvars]);
        p.coeffs[0] = c;
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; degree bounds
    /// are the per-variable maxima. Repeated exponents accumulate.
    pub fn from_terms(nvars: usize, terms: &[(Vec<usize>, f64)]) -> Result<Self> {
        let mut degrees = vec![0; nvars];
        for (e, _) in terms {
            if e.len() != nvars {
                return Err(Error::ShapeMismatch {
                    expected: format!("{nvars} exponents"),
                    found: format!("{} exponents", e.len()),
                });
            }
            for (d, &x) in degrees.iter_mut().zip(e) {
                *d = (*d).max(x);
            }
        }
        let mut p = Self::zero(degrees);
        for (e, c) in terms {
            let k = p.index_of(e);
            p.coeffs[k] += c;
        }
        Ok(p)
    }

    /// Wraps a raw coefficient tensor (row-major, variable 0 slowest).
    pub fn from_tensor(degrees: Vec<usize>, coeffs: Vec<f64>) -> Result<Self> {
        let len: usize = degrees.iter().map(|d| d + 1).product();
        if coeffs.len() != len {
            return Err(Error::ShapeMismatch {
                expected: format!("{len} coefficients"),
                found: format!("{} coefficients", coeffs.len()),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(Self { degrees, coeffs })
    }

    pub fn nvars(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_bounds(&self) -> &[usize] {
        &self.degrees
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Coefficient of `Π z_v^{e_v}`; zero outside the degree bounds.
    pub fn coeff(&self, exps: &[usize]) -> f64 {
        if exps.len() != self.nvars() || exps.iter().zip(&self.degrees).any(|(e, d)| e > d) {
            return 0.0;
        }
        self.coeffs[self.index_of(exps)]
    }

    /// Iterates over `(exponents, coefficient)` for nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| (self.exponents_of(k), c))
    }

    /// Largest total degree among nonzero terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> usize {
        self.terms().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    fn strides(degrees: &[usize]) -> Vec<usize> {
        let mut strides = vec![1; degrees.len()];
        for v in (0..degrees.len().saturating_sub(1)).rev() {
            strides[v] = strides[v + 1] * (degrees[v + 1] + 1);
        }
        strides
    }

    fn index_of(&self, exps: &[usize]) -> usize {
        Self::strides(&self.degrees)
            .iter()
            .zip(exps)
            .map(|(s, e)| s * e)
            .sum()
    }

    pub(crate) fn exponents_of(&self, mut k: usize) -> Vec<usize> {
        let mut exps = vec![0; self.nvars()];
        for v in (0..self.nvars()).rev() {
            let n = self.degrees[v] + 1;
            exps[v] = k % n;
            k /= n;
        }
        exps
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.nvars() {
            return Err(Error::BadIndex {
                index: var,
                nvars: self.nvars(),
            });
        }
        Ok(())
    }

    /// Value at a complex point.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} coordinates", self.nvars()),
                found: format!("{} coordinates", point.len()),
            });
        }
        let powers = power_table(&self.degrees, point);
        let mut total = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let exps = self.exponents_of(k);
            let mono = exps
                .iter()
                .enumerate()
                .fold(Complex64::new(1.0, 0.0), |acc, (v, &e)| acc * powers[v][e]);
            total += mono * c;
        }
        Ok(total)
    }

    pub fn eval_real(&self, point: &[f64]) -> Result<f64> {
        let z: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(self.eval(&z)?.re)
    }

    /// `Σ |c_e| · Π |z_v|^{e_v}`, the magnitude against which a computed
    /// value is judged to be zero.
    pub fn eval_abs_scale(&self, point: &[Complex64]) -> f64 {
        let abs: Vec<Complex64> = point.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
        let powers = power_table(&self.degrees, &abs);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| {
                let exps = self.exponents_of(k);
                c.abs()
                    * exps
                        .iter()
                        .enumerate()
                        .map(|(v, &e)| powers[v][e].re)
                        .product::<f64>()
            })
            .sum()
    }

    /// `∂p/∂z_var`.
    pub fn partial(&self, var: usize) -> Result<Self> {
        self.check_var(var)?;
        let mut degrees = self.degrees.clone();
        degrees[var] = degrees[var].saturating_sub(1);
        let mut out = Self::zero(degrees);
        for (k, &c) in self.coeffs.iter().enumerate() {
            let mut exps = self.exponents_of(k);
            if c == 0.0 || exps[var] == 0 {
                continue;
            }
            let factor = exps[var] as f64;
            exps[var] -= 1;
            let idx = out.index_of(&exps);
            out.coeffs[idx] += factor * c;
        }
        Ok(out)
    }

    /// Substitutes the real value `t` for `z_var`. The variable stays in place
    /// with degree bound 0.
    pub fn restrict(&self, var: usize, t: f64) -> Result<Self> {
        self.check_var(var)?;
        let mut degrees = self.degrees.clone();
        degrees[var] = 0;
        let mut out = Self::zero(degrees);
        let powers: Vec<f64> = (0..=self.degrees[var]).map(|e| t.powi(e as i32)).collect();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut exps = self.exponents_of(k);
            let e = exps[var];
            exps[var] = 0;
            let idx = out.index_of(&exps);
            out.coeffs[idx] += c * powers[e];
        }
        Ok(out)
    }

    /// `(1 − ∂_var) p`.
    pub fn one_minus_partial(&self, var: usize) -> Result<Self> {
        let d = self.partial(var)?;
        let mut out = self.clone();
        for (k, &c) in d.coeffs.iter().enumerate() {
            if c != 0.0 {
                let idx = out.index_of(&d.exponents_of(k));
                out.coeffs[idx] -= c;
            }
        }
        Ok(out)
    }

    /// Zeroes every coefficient whose total degree differs from `degree`.
    pub fn homogeneous_part(&self, degree: usize) -> Self {
        let mut out = self.clone();
        for k in 0..out.coeffs.len() {
            if self.exponents_of(k).iter().sum::<usize>() != degree {
                out.coeffs[k] = 0.0;
            }
        }
        out
    }

    /// The univariate polynomial in `var`, provided no other variable appears.
    pub fn to_univariate(&self, var: usize) -> Result<RealPoly> {
        self.check_var(var)?;
        let mut coeffs = vec![0.0; self.degrees[var] + 1];
        for (e, c) in self.terms() {
            if e.iter().enumerate().any(|(v, &x)| v != var && x > 0) {
                return Err(Error::InvalidInput(format!(
                    "polynomial still depends on variables other than {var}"
                )));
            }
            coeffs[e[var]] += c;
        }
        Ok(RealPoly::new(coeffs))
    }
}

fn power_table(degrees: &[usize], point: &[Complex64]) -> Vec<Vec<Complex64>> {
    degrees
        .iter()
        .zip(point)
        .map(|(&d, &z)| {
            let mut row = Vec::with_capacity(d + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=d {
                row.push(acc);
                acc *= z;
            }
            row
        })
        .collect()
}
