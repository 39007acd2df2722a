//! Univariate real polynomials, real-root extraction, and families with a
//! common interlacing ("nice" families).
//!
//! Roots are always reported largest first: `ρ_1 ≥ ρ_2 ≥ … ≥ ρ_n`.

use nalgebra::{linalg::balancing::balance_parlett_reinsch, DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 64;

/// `p(z) = Σ c_k z^k`, trailing zero coefficients trimmed. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `Π (z − r)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &r in roots {
            coeffs = mul_linear(&coeffs, r);
        }
        Self::new(coeffs)
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |acc, c| acc.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// `(z − a) · p`.
    pub fn times_linear(&self, a: f64) -> Self {
        Self::new(mul_linear(&self.coeffs, a))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_coeff_deviation(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeffs.get(k).unwrap_or(&0.0) - other.coeffs.get(k).unwrap_or(&0.0)).abs())
            .fold(0.0, f64::max)
    }

    /// Zeroes coefficients below `rel · max|c|` (floating-point residue).
    pub fn snapped(&self, rel: f64) -> Self {
        let cutoff = rel * self.max_abs_coeff();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= cutoff { 0.0 } else { c })
                .collect(),
        )
    }
}

fn mul_linear(coeffs: &[f64], a: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= a * c;
    }
    out
}

/// All complex roots, via eigenvalues of the balanced companion matrix.
/// Exact zero roots (vanishing low-order coefficients) are split off first.
pub fn complex_roots(p: &RealPoly) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    let c = p.coeffs();
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let rest = &c[zeros..];
    let k = rest.len() - 1;
    if k == 0 {
        return Ok(roots);
    }
    let lead = rest[k];
    if k == 1 {
        roots.push(Complex64::new(-rest[0] / lead, 0.0));
        return Ok(roots);
    }
    let mut companion = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        companion[(i, k - 1)] = -rest[i] / lead;
    }
    balance_parlett_reinsch(&mut companion);
    let schur = Schur::try_new(companion, f64::EPSILON, 100_000).ok_or(Error::NoConvergence)?;
    let reduced = RealPoly::new(rest.to_vec());
    let deriv = reduced.derivative();
    roots.extend(schur.complex_eigenvalues().iter().map(|&z| polish(&reduced, &deriv, z)));
    Ok(roots)
}

/// A few guarded Newton steps; a step is kept only if it shrinks `|p|`.
fn polish(p: &RealPoly, dp: &RealPoly, mut z: Complex64) -> Complex64 {
    let mut val = p.eval_complex(z).norm();
    for _ in 0..3 {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - p.eval_complex(z) / d;
        let next_val = p.eval_complex(next).norm();
        if next_val.is_nan() || next_val >= val {
            break;
        }
        z = next;
        val = next_val;
    }
    z
}

/// Roots closer than `CLUSTER_REL · (1 + |z|)` are treated as one multiple root.
const CLUSTER_REL: f64 = 1e-6;

/// Replaces each cluster of `k` nearby roots by the root of `p^{(k−1)}` nearest
/// the cluster centroid. A `k`-fold root splits by `O(δ^{1/k})` under a
/// coefficient perturbation `δ`; the centroid and that simple root of the
/// derivative do not.
fn merge_clusters(p: &RealPoly, roots: &mut [Complex64]) {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + roots[i].norm().max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= CLUSTER_REL * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    for head in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut label, i) == head).collect();
        let k = members.len();
        if k < 2 {
            continue;
        }
        let centroid = members.iter().map(|&i| roots[i]).sum::<Complex64>() / k as f64;
        let radius = members.iter().map(|&i| (roots[i] - centroid).norm()).fold(0.0, f64::max);
        let mut q = p.clone();
        for _ in 1..k {
            q = q.derivative();
        }
        let refined = polish(&q, &q.derivative(), centroid);
        let center = if (refined - centroid).norm() <= radius.max(f64::EPSILON * (1.0 + centroid.norm())) {
            refined
        } else {
            centroid
        };
        for &i in &members {
            roots[i] = center;
        }
    }
}

/// Roots in descending order. Fails if any root has
/// `|Im ρ| > tol · (1 + |ρ|)`; clusters of nearby roots are first merged into
/// one multiple root, and nearly real pairs are reported by their real parts.
pub fn real_roots(p: &RealPoly, tol: f64) -> Result<Vec<f64>> {
    let mut roots = complex_roots(p)?;
    merge_clusters(p, &mut roots);
    if let Some(bad) = roots.iter().find(|z| z.im.abs() > tol * (1.0 + z.norm())) {
        return Err(Error::NotRealRooted { root: *bad });
    }
    let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    Ok(re)
}

/// A nonempty family of polynomials sharing one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFamily {
    members: Vec<RealPoly>,
}

impl PolyFamily {
    pub fn new(members: Vec<RealPoly>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::DegreeMismatch("family is empty".into()));
        };
        let n = first.degree();
        if let Some((i, p)) = members.iter().enumerate().find(|(_, p)| p.degree() != n || p.is_zero()) {
            return Err(Error::DegreeMismatch(format!(
                "member {} has degree {}, expected {n}",
                i + 1,
                p.degree()
            )));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[RealPoly] {
        &self.members
    }

    pub fn degree(&self) -> usize {
        self.members[0].degree()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every member multiplied by `(x − a)`.
    pub fn times_linear(&self, a: f64) -> Self {
        Self {
            members: self.members.iter().map(|p| p.times_linear(a)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NiceFailure {
    NonPositiveLeading { member: usize },
    NotRealRooted { member: usize },
    /// `ρ⁺_j > ρ⁻_{j−1}`.
    Overlap { j: usize, upper: f64, lower: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NiceVerdict {
    pub nice: bool,
    pub failure: Option<NiceFailure>,
}

/// Checks positivity of leading coefficients, real-rootedness, and
/// `ρ⁺_j ≤ ρ⁻_{j−1} + interlace_tol` for `j = 2..n`. Member indices and `j`
/// in failures are 1-based.
pub fn is_nice_family(family: &PolyFamily, root_tol: f64, interlace_tol: f64) -> NiceVerdict {
    let fail = |failure| NiceVerdict {
        nice: false,
        failure: Some(failure),
    };
    let mut all_roots = Vec::with_capacity(family.len());
    for (i, p) in family.members().iter().enumerate() {
        if p.leading() <= 0.0 {
            return fail(NiceFailure::NonPositiveLeading { member: i + 1 });
        }
        match real_roots(p, root_tol) {
            Ok(r) => all_roots.push(r),
            Err(_) => return fail(NiceFailure::NotRealRooted { member: i + 1 }),
        }
    }
    let (upper, lower) = root_envelopes(&all_roots);
    for j in 1..family.degree() {
        if upper[j] > lower[j - 1] + interlace_tol {
            return fail(NiceFailure::Overlap {
                j: j + 1,
                upper: upper[j],
                lower: lower[j - 1],
            });
        }
    }
    NiceVerdict {
        nice: true,
        failure: None,
    }
}

/// `(ρ⁺_j, ρ⁻_j)` for each 0-based `j`.
fn root_envelopes(all_roots: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = all_roots.first().map_or(0, Vec::len);
    let upper = (0..n)
        .map(|j| all_roots.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let lower = (0..n)
        .map(|j| all_roots.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .collect();
    (upper, lower)
}

fn check_weights(family: &PolyFamily, weights: &[f64]) -> Result<()> {
    if weights.len() != family.len() {
        return Err(Error::BadWeights(format!(
            "{} weights for {} members",
            weights.len(),
            family.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::BadWeights(format!("negative or NaN weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::BadWeights(format!("weights sum to {total}")));
    }
    Ok(())
}

/// `Σ w_k f_k` for nonnegative weights summing to one.
pub fn convex_combo(family: &PolyFamily, weights: &[f64]) -> Result<RealPoly> {
    check_weights(family, weights)?;
    Ok(family
        .members()
        .iter()
        .zip(weights)
        .fold(RealPoly::zero(), |acc, (p, &w)| acc.add(&p.scale(w))))
}

/// Searches for a convex combination that is not real-rooted. Vertices and
/// pairwise midpoints are tried first, then `trials` uniform samples from the
/// simplex (sorted-uniform spacings, seeded).
pub fn nice_family_falsifier(
    family: &PolyFamily,
    trials: usize,
    seed: u64,
    root_tol: f64,
) -> Option<Vec<f64>> {
    let m = family.len();
    let fails = |w: &[f64]| {
        convex_combo(family, w)
            .map(|p| real_roots(&p, root_tol).is_err())
            .unwrap_or(false)
    };
    for a in 0..m {
        let mut w = vec![0.0; m];
        w[a] = 1.0;
        if fails(&w) {
            return Some(w);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let mut w = vec![0.0; m];
            w[a] = 0.5;
            w[b] = 0.5;
            if fails(&w) {
                return Some(w);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).find_map(|_| {
        let w = simplex_sample(&mut rng, m);
        fails(&w).then_some(w)
    })
}

/// Uniform point of the probability simplex from sorted uniform cut points.
pub fn simplex_sample(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..m.saturating_sub(1)).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut w = Vec::with_capacity(m);
    let mut prev = 0.0;
    for c in cuts {
        w.push(c - prev);
        prev = c;
    }
    w.push(1.0 - prev);
    // renormalize so the 1e-12 sum check never trips on rounding
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// `min_i ρ_j(f_i) ≤ ρ_j(f) ≤ max_i ρ_j(f_i)` for every `j`, with
/// `interlace_tol` slack, where `f` is the weighted combination.
pub fn root_bracket_check(
    family: &PolyFamily,
    weights: &[f64],
    root_tol: f64,
    interlace_tol: f64,
) -> Result<bool> {
    let combo = convex_combo(family, weights)?;
    let all_roots = family
        .members()
        .iter()
        .map(|p| real_roots(p, root_tol))
        .collect::<Result<Vec<_>>>()?;
    let roots = real_roots(&combo, root_tol)?;
    let (upper, lower) = root_envelopes(&all_roots);
    Ok(roots
        .iter()
        .enumerate()
        .all(|(j, &r)| r >= lower[j] - interlace_tol && r <= upper[j] + interlace_tol))
}

/// Given `a_{n+1} < … < a_1` (passed in increasing order), checks
/// `(−1)^{j−1} p(a_j) ≥ −sign_tol · max|coeff|` at all `n + 1` points.
pub fn sign_alternation_check(p: &RealPoly, points: &[f64], sign_tol: f64) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if points.len() != n + 1 {
        return Err(Error::BadPoints(format!(
            "expected {} points for degree {n}, got {}",
            n + 1,
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[0].is_nan() || w[1].is_nan() || w[0] >= w[1]) {
        return Err(Error::BadPoints("points must be strictly increasing".into()));
    }
    let slack = sign_tol * p.max_abs_coeff();
    // points[n] is a_1, points[0] is a_{n+1}
    Ok((1..=n + 1).all(|j| {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sign * p.eval(points[n + 1 - j]) >= -slack
    }))
}

/// `(−1)^k (d/dx)^k (p'/p)(x) = k! Σ_i (x − ρ_i)^{−(k+1)}` for `k = 0..=kmax`,
/// returned in order. Requires `x > ρ_1 + interlace_tol`.
pub fn log_derivative_values(
    p: &RealPoly,
    x: f64,
    kmax: usize,
    root_tol: f64,
    interlace_tol: f64,
) -> Result<Vec<f64>> {
    let roots = real_roots(p, root_tol)?;
    if let Some(&top) = roots.first() {
        if x <= top + interlace_tol {
            return Err(Error::PointNotAboveRoots { point: x, root: top });
        }
    }
    let mut factorial = 1.0;
    Ok((0..=kmax)
        .map(|k| {
            if k > 0 {
                factorial *= k as f64;
            }
            factorial * roots.iter().map(|r| (x - r).powi(-(k as i32 + 1))).sum::<f64>()
        })
        .collect())
}

/// True iff every value from [`log_derivative_values`] is positive.
pub fn log_derivative_signs(
    p: &RealPoly,
    x: f64,
    kmax: usize,
    root_tol: f64,
    interlace_tol: f64,
) -> Result<bool> {
    Ok(log_derivative_values(p, x, kmax, root_tol, interlace_tol)?
        .iter()
        .all(|&v| v > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const RT: f64 = 1e-7;
    const IT: f64 = 1e-8;

    fn fam(roots: &[&[f64]]) -> PolyFamily {
        PolyFamily::new(roots.iter().map(|r| RealPoly::from_roots(r)).collect()).unwrap()
    }

    #[test]
    fn roots_of_simple_polynomials() {
        let r = real_roots(&RealPoly::new(vec![2.0, -3.0, 1.0]), RT).unwrap();
        assert_abs_diff_eq!(r[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-12);
        assert_eq!(real_roots(&RealPoly::monomial(2), RT).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(
            real_roots(&RealPoly::new(vec![1.0, 0.0, 1.0]), RT),
            Err(Error::NotRealRooted { .. })
        ));
        assert!(matches!(real_roots(&RealPoly::zero(), RT), Err(Error::ZeroPolynomial)));
        assert!(real_roots(&RealPoly::new(vec![3.0]), RT).unwrap().is_empty());
    }

    #[test]
    fn double_roots_pass_the_tolerance() {
        let p = RealPoly::from_roots(&[1.0, 1.0, -2.0]);
        let r = real_roots(&p, RT).unwrap();
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(r[2], -2.0, epsilon = 1e-12);
    }

    #[test]
    fn degree_cap() {
        let p = RealPoly::monomial(MAX_DEGREE + 1);
        assert!(matches!(real_roots(&p, RT), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn nice_family_examples() {
        assert!(is_nice_family(&fam(&[&[1.0, 3.0], &[2.0, 4.0]]), RT, IT).nice);
        let v = is_nice_family(&fam(&[&[1.0, 2.0], &[3.0, 4.0]]), RT, IT);
        assert!(!v.nice);
        match v.failure {
            Some(NiceFailure::Overlap { j, upper, lower }) => {
                assert_eq!(j, 2);
                assert_abs_diff_eq!(upper, 3.0, epsilon = 1e-12);
                assert_abs_diff_eq!(lower, 2.0, epsilon = 1e-12);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
        let p: &[f64] = &[-1.0, 0.5, 2.0];
        assert!(is_nice_family(&fam(&[p, p]), RT, IT).nice);
    }

    #[test]
    fn nice_family_reason_codes() {
        let f = PolyFamily::new(vec![RealPoly::new(vec![1.0, -1.0])]).unwrap();
        assert_eq!(
            is_nice_family(&f, RT, IT).failure,
            Some(NiceFailure::NonPositiveLeading { member: 1 })
        );
        let f = PolyFamily::new(vec![RealPoly::from_roots(&[0.0, 1.0]), RealPoly::new(vec![1.0, 0.0, 1.0])]).unwrap();
        assert_eq!(
            is_nice_family(&f, RT, IT).failure,
            Some(NiceFailure::NotRealRooted { member: 2 })
        );
    }

    #[test]
    fn family_degree_mismatch() {
        let r = PolyFamily::new(vec![RealPoly::monomial(1), RealPoly::monomial(2)]);
        assert!(matches!(r, Err(Error::DegreeMismatch(_))));
        assert!(PolyFamily::new(vec![]).is_err());
    }

    #[test]
    fn convex_combinations() {
        let f = fam(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(convex_combo(&f, &[1.0, 0.0]).unwrap(), f.members()[0]);
        assert_eq!(convex_combo(&f, &[0.5, 0.5]).unwrap().coeffs(), &[7.0, -5.0, 1.0]);
        let p = RealPoly::from_roots(&[0.5, 2.0]);
        let same = PolyFamily::new(vec![p.clone(), p.clone()]).unwrap();
        assert_eq!(convex_combo(&same, &[0.5, 0.5]).unwrap(), p);
        assert!(matches!(convex_combo(&f, &[0.6, 0.6]), Err(Error::BadWeights(_))));
        assert!(matches!(convex_combo(&f, &[1.5, -0.5]), Err(Error::BadWeights(_))));
        assert!(matches!(convex_combo(&f, &[1.0]), Err(Error::BadWeights(_))));
    }

    #[test]
    fn falsifier_examples() {
        let bad = fam(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(nice_family_falsifier(&bad, 1000, 7, RT), Some(vec![0.5, 0.5]));
        let good = fam(&[&[1.0, 3.0], &[2.0, 4.0]]);
        assert_eq!(nice_family_falsifier(&good, 1000, 7, RT), None);
        assert_eq!(nice_family_falsifier(&fam(&[&[0.0, 5.0]]), 100, 1, RT), None);
    }

    #[test]
    fn bracket_examples() {
        let good = fam(&[&[1.0, 3.0], &[2.0, 4.0]]);
        assert!(root_bracket_check(&good, &[0.5, 0.5], RT, IT).unwrap());
        let combo = convex_combo(&good, &[0.5, 0.5]).unwrap();
        assert_eq!(combo.coeffs(), &[5.5, -5.0, 1.0]);
        let r = real_roots(&combo, RT).unwrap();
        assert_abs_diff_eq!(r[0], (5.0 + 3f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], (5.0 - 3f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert!(root_bracket_check(&fam(&[&[1.0]]), &[1.0], RT, IT).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let w = simplex_sample(&mut rng, 2);
            assert!(root_bracket_check(&good, &w, RT, IT).unwrap());
        }
    }

    #[test]
    fn sign_alternation_examples() {
        let p = RealPoly::from_roots(&[1.0, 3.0]);
        assert!(sign_alternation_check(&p, &[0.0, 2.0, 4.0], 1e-10).unwrap());
        assert!(sign_alternation_check(&RealPoly::from_roots(&[1.0]), &[0.0, 2.0], 1e-10).unwrap());
        let sq = RealPoly::from_roots(&[1.0, 1.0]);
        assert!(!sign_alternation_check(&sq, &[0.0, 0.5, 2.0], 1e-10).unwrap());
        assert!(matches!(
            sign_alternation_check(&p, &[0.0, 2.0], 1e-10),
            Err(Error::BadPoints(_))
        ));
        assert!(matches!(
            sign_alternation_check(&p, &[0.0, 4.0, 2.0], 1e-10),
            Err(Error::BadPoints(_))
        ));
    }

    #[test]
    fn log_derivative_examples() {
        let v = log_derivative_values(&RealPoly::from_roots(&[1.0]), 2.0, 3, RT, IT).unwrap();
        for (got, want) in v.iter().zip([1.0, 1.0, 2.0, 6.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        assert!(log_derivative_signs(&RealPoly::monomial(2), 1.0, 4, RT, IT).unwrap());
        assert!(matches!(
            log_derivative_signs(&RealPoly::from_roots(&[1.0, -1.0]), 1.0, 2, RT, IT),
            Err(Error::PointNotAboveRoots { .. })
        ));
    }

    #[test]
    fn log_derivative_matches_direct_ratio() {
        let p = RealPoly::from_roots(&[-1.0, 0.25, 2.0]);
        let v = log_derivative_values(&p, 3.0, 0, RT, IT).unwrap();
        assert_abs_diff_eq!(v[0], p.derivative().eval(3.0) / p.eval(3.0), epsilon = 1e-12);
    }
}
