//! The finite probability space `Ω = {1..r}^m` of block assignments, the
//! block-diagonal lift of a PSD system, and search for a partition
//! `S_1, …, S_r` with `max_j ‖Σ_{i∈S_j} A_i‖ ≤ (1/√r + √C)²`.
//!
//! Assignments are 1-based (`ω_i ∈ {1..r}`); matrix indices are 0-based.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{self, HermitianMatrix, C64};
use crate::mixedchar::mixed_char_poly;
use crate::par;
use crate::realstable::PsdSystem;
use crate::unipoly::{real_roots, RealPoly};

/// Slack on the partition bound.
pub const BOUND_SLACK: f64 = 1e-9;
/// Matrices with norm at or below this are treated as zero by the search.
const ZERO_NORM: f64 = 1e-14;
/// Assignments handed to the worker pool at once by the exhaustive search.
const CHUNK: usize = 1 << 14;

/// Local-search restarts evaluated together before checking for a
/// certificate.
const RESTART_BATCH: usize = 8;

/// Eigenvalues below this fraction of the largest are dropped when factoring
/// `A_i = V_i V_i*`.
const FACTOR_REL: f64 = 1e-13;
pub const DEFAULT_RESTARTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Assignment {
    r: usize,
    omega: Vec<usize>,
}

impl Assignment {
    pub fn new(r: usize, omega: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = omega.iter().find(|&&w| w == 0 || w > r) {
            return Err(Error::InvalidInput(format!("block label {bad} outside 1..={r}")));
        }
        Ok(Self { r, omega })
    }

    /// Every index in block 1.
    pub fn trivial(m: usize, r: usize) -> Self {
        Self { r, omega: vec![1; m] }
    }

    pub fn m(&self) -> usize {
        self.omega.len()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    /// `S_j = {i : ω_i = j}` for `j = 1..r`, as 0-based index lists.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.r];
        for (i, &w) in self.omega.iter().enumerate() {
            out[w - 1].push(i);
        }
        out
    }

    /// Same blocks with 1-based indices.
    pub fn blocks_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|i| i + 1).collect())
            .collect()
    }
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    Ok(())
}

/// `r^m`, saturating.
pub fn assignment_count(m: usize, r: usize) -> u128 {
    (0..m).fold(1u128, |acc, _| acc.saturating_mul(r as u128))
}

/// The `k`-th assignment in lexicographic order.
fn decode(mut k: u128, m: usize, r: usize) -> Vec<usize> {
    let mut omega = vec![1; m];
    for slot in omega.iter_mut().rev() {
        *slot = (k % r as u128) as usize + 1;
        k /= r as u128;
    }
    omega
}

/// All `r^m` assignments in lexicographic order.
pub fn enumerate_assignments(m: usize, r: usize, budget: u64) -> Result<impl Iterator<Item = Assignment>> {
    check_r(r)?;
    let required = assignment_count(m, r);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: budget as u128,
        });
    }
    Ok((0..required).map(move |k| Assignment {
        r,
        omega: decode(k, m, r),
    }))
}

/// A PSD system together with the number of blocks of its lift.
#[derive(Debug, Clone)]
pub struct LiftedSystem {
    base: PsdSystem,
    r: usize,
}

impl LiftedSystem {
    pub fn new(base: PsdSystem, r: usize) -> Result<Self> {
        check_r(r)?;
        Ok(Self { base, r })
    }

    pub fn base(&self) -> &PsdSystem {
        &self.base
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn lifted_dim(&self) -> usize {
        self.r * self.base.dim()
    }
}

fn block_sums(system: &PsdSystem, omega: &[usize], r: usize) -> Vec<HermitianMatrix> {
    let mut sums = vec![HermitianMatrix::zeros(system.dim()); r];
    for (a, &w) in system.matrices().iter().zip(omega) {
        sums[w - 1] = sums[w - 1].add(a);
    }
    sums
}

/// `𝐀(ω) = ⊕_j r Σ_{ω_i = j} A_i`.
pub fn lift(l: &LiftedSystem, omega: &Assignment) -> Result<HermitianMatrix> {
    if omega.m() != l.base.m() || omega.r() != l.r {
        return Err(Error::ShapeMismatch {
            expected: format!("assignment of {} indices into {} blocks", l.base.m(), l.r),
            found: format!("{} indices into {} blocks", omega.m(), omega.r()),
        });
    }
    let blocks: Vec<HermitianMatrix> = block_sums(&l.base, &omega.omega, l.r)
        .iter()
        .map(|b| b.scale(l.r as f64))
        .collect();
    Ok(HermitianMatrix::direct_sum(&blocks))
}

/// `𝔼(𝐀_i) = A_i ⊕ ⋯ ⊕ A_i` (`r` copies) for each `i`.
pub fn expected_lift(l: &LiftedSystem) -> Vec<HermitianMatrix> {
    l.base
        .matrices()
        .iter()
        .map(|a| HermitianMatrix::direct_sum(&vec![a.clone(); l.r]))
        .collect()
}

fn require_rank_one(system: &PsdSystem) -> Result<()> {
    if system.all_rank_one() {
        return Ok(());
    }
    let index = system
        .matrices()
        .iter()
        .position(|a| {
            let vals = linalg::eigenvalues(a);
            let scale = vals.first().copied().unwrap_or(0.0).max(1.0);
            vals.iter().filter(|&&v| v > 1e-8 * scale).count() > 1
        })
        .unwrap_or(0);
    Err(Error::NotRankOne { index })
}

fn require_budget(m: usize, r: usize, budget: u64) -> Result<u128> {
    let required = assignment_count(m, r);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: budget as u128,
        });
    }
    Ok(required)
}

fn expected_mu(l: &LiftedSystem, cfg: &Config) -> Result<RealPoly> {
    let lifted = PsdSystem::new(l.lifted_dim(), expected_lift(l), &cfg.tol)?;
    Ok(mixed_char_poly(&lifted, cfg)?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationCheck {
    /// `r^{−m} Σ_ω det(zI − 𝐀(ω))`.
    pub average: RealPoly,
    /// `μ[𝔼(𝐀_1), …, 𝔼(𝐀_m)]`.
    pub mu: RealPoly,
    pub deviation: f64,
}

/// Averages the characteristic polynomial of every lift and compares it with
/// the mixed characteristic polynomial of the expected lifts.
pub fn expectation_theorem_check(l: &LiftedSystem, cfg: &Config) -> Result<ExpectationCheck> {
    require_rank_one(&l.base)?;
    let (m, r) = (l.base.m(), l.r);
    let total = require_budget(m, r, cfg.budget.enumeration)?;
    let polys = par::map_range(total as usize, |k| {
        let omega = Assignment { r, omega: decode(k as u128, m, r) };
        linalg::char_poly(&lift(l, &omega).expect("shape"))
    });
    let weight = 1.0 / total as f64;
    let average = polys.iter().fold(RealPoly::zero(), |acc, p| acc.add(&p.scale(weight)));
    let mu = expected_mu(l, cfg)?;
    Ok(ExpectationCheck {
        deviation: average.max_coeff_deviation(&mu),
        average,
        mu,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    /// 1-based root index.
    pub j: usize,
    pub min_over_omega: f64,
    pub mu_root: f64,
    pub max_over_omega: f64,
    /// `min(mu_root − min, max − mu_root)`.
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    pub holds: bool,
}

/// `min_ω ρ_j(p_{𝐀(ω)}) ≤ ρ_j(μ[𝔼 𝐀_i]) ≤ max_ω ρ_j(p_{𝐀(ω)})` for the
/// 1-based root index `j`, or for every `j` when `None`.
pub fn root_sandwich_check(l: &LiftedSystem, j: Option<usize>, cfg: &Config) -> Result<SandwichReport> {
    require_rank_one(&l.base)?;
    let (m, r, n) = (l.base.m(), l.r, l.lifted_dim());
    if let Some(j) = j {
        if j == 0 || j > n {
            return Err(Error::BadIndex { index: j, nvars: n });
        }
    }
    let total = require_budget(m, r, cfg.budget.enumeration)?;
    let spectra = par::map_range(total as usize, |k| {
        let omega = Assignment { r, omega: decode(k as u128, m, r) };
        linalg::eigenvalues(&lift(l, &omega).expect("shape"))
    });
    let mu_roots = real_roots(&expected_mu(l, cfg)?, cfg.tol.root)?;
    let wanted: Vec<usize> = match j {
        Some(j) => vec![j],
        None => (1..=n).collect(),
    };
    let rows: Vec<SandwichRow> = wanted
        .into_iter()
        .map(|j| {
            let column = spectra.iter().map(|s| s[j - 1]);
            let lo = column.clone().fold(f64::INFINITY, f64::min);
            let hi = column.fold(f64::NEG_INFINITY, f64::max);
            let mid = mu_roots[j - 1];
            SandwichRow {
                j,
                min_over_omega: lo,
                mu_root: mid,
                max_over_omega: hi,
                slack: (mid - lo).min(hi - mid),
            }
        })
        .collect();
    let holds = rows.iter().all(|row| row.slack >= -cfg.tol.interlace);
    Ok(SandwichReport { rows, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Certified,
    /// Local search found nothing within the bound.
    BoundNotCertified,
    /// The exhaustive minimum exceeds the bound.
    BoundViolated,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Exhaustive: maximum canonical assignments. Local: maximum objective
    /// evaluations across all restarts.
    pub budget: u64,
    pub seed: u64,
    pub restarts: usize,
}

impl SearchOptions {
    pub fn exhaustive(budget: u64) -> Self {
        Self {
            strategy: Strategy::Exhaustive,
            budget,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
        }
    }

    pub fn local(budget: u64, seed: u64) -> Self {
        Self {
            strategy: Strategy::Local,
            budget,
            seed,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionSearchResult {
    pub best: Assignment,
    /// `max_j ‖Σ_{i∈S_j} A_i‖`.
    pub objective: f64,
    /// `(1/√r + √C)²`.
    pub bound: f64,
    /// `C = max_i ‖A_i‖`.
    pub c: f64,
    pub strategy: Strategy,
    /// Assignments (exhaustive) or objective evaluations (local) examined.
    pub iterations: u64,
    pub status: SearchStatus,
    pub block_norms: Vec<f64>,
}

/// `(1/√r + √C)²`.
pub fn partition_bound(r: usize, c: f64) -> f64 {
    (1.0 / (r as f64).sqrt() + c.sqrt()).powi(2)
}

/// Number of restricted-growth strings of length `m` using at most `r`
/// labels: `Σ_{k≤r} S(m, k)`, saturating.
pub fn canonical_count(m: usize, r: usize) -> u128 {
    // ways[k]: completions of the remaining suffix given k labels used so far
    let mut ways = vec![1u128; r + 1];
    for _ in 0..m {
        let next: Vec<u128> = (0..=r)
            .map(|k| {
                let reuse = (k as u128).saturating_mul(ways[k]);
                let fresh = if k < r { ways[k + 1] } else { 0 };
                reuse.saturating_add(fresh)
            })
            .collect();
        ways = next;
    }
    ways[0]
}

/// Lexicographic successor among restricted-growth strings with labels
/// `1..=r`, in place. Returns false after the last one.
fn next_rgs(omega: &mut [usize], r: usize) -> bool {
    let n = omega.len();
    // prefix_max[i] = max(omega[..i])
    let mut prefix_max = vec![0; n + 1];
    for i in 0..n {
        prefix_max[i + 1] = prefix_max[i].max(omega[i]);
    }
    for i in (0..n).rev() {
        if omega[i] <= prefix_max[i] && omega[i] < r {
            omega[i] += 1;
            for w in omega[i + 1..].iter_mut() {
                *w = 1;
            }
            return true;
        }
    }
    false
}

/// Block norms through the Gram matrix of PSD factors: with `A_i = V_i V_i*`
/// and `W = [V_i]_{i∈S}`, `‖Σ_S A_i‖ = ‖W*W‖`, which is a principal
/// submatrix of `G = V*V`. Blocks of total rank below `d` use `G`; larger
/// ones fall back to the `d × d` sum.
struct BlockNorms<'a> {
    system: &'a PsdSystem,
    /// Columns of `V` belonging to each `A_i`.
    columns: Vec<Vec<usize>>,
    gram: DMatrix<C64>,
}

impl<'a> BlockNorms<'a> {
    fn new(system: &'a PsdSystem) -> Self {
        let d = system.dim();
        let mut factors: Vec<Vec<C64>> = Vec::new();
        let mut columns = Vec::with_capacity(system.m());
        for a in system.matrices() {
            let eig = linalg::eigh(a);
            let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
            let mut cols = Vec::new();
            for (k, &l) in eig.values.iter().enumerate() {
                if l > FACTOR_REL * top.max(ZERO_NORM) {
                    cols.push(factors.len());
                    factors.push((0..d).map(|row| eig.vectors[(row, k)] * l.sqrt()).collect());
                }
            }
            columns.push(cols);
        }
        let n = factors.len();
        let gram = DMatrix::from_fn(n, n, |p, q| {
            factors[p].iter().zip(&factors[q]).map(|(x, y)| x.conj() * y).sum()
        });
        Self { system, columns, gram }
    }

    fn norm(&self, block: &[usize]) -> f64 {
        let idx: Vec<usize> = block.iter().flat_map(|&i| self.columns[i].iter().copied()).collect();
        match idx.len() {
            0 => 0.0,
            1 => self.gram[(idx[0], idx[0])].re,
            k if k < self.system.dim() => {
                let sub = DMatrix::from_fn(k, k, |p, q| self.gram[(idx[p], idx[q])]);
                sub.symmetric_eigenvalues().iter().fold(0.0f64, |acc, &l| acc.max(l.abs()))
            }
            _ => linalg::hermitian_norm(&HermitianMatrix::sum(
                self.system.dim(),
                block.iter().map(|&i| &self.system.matrices()[i]),
            )),
        }
    }

    fn objective(&self, omega: &[usize], r: usize) -> (f64, Vec<f64>) {
        let norms: Vec<f64> = blocks_of(omega, r).iter().map(|b| self.norm(b)).collect();
        (norms.iter().copied().fold(0.0, f64::max), norms)
    }
}

fn blocks_of(omega: &[usize], r: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![Vec::new(); r];
    for (i, &w) in omega.iter().enumerate() {
        blocks[w - 1].push(i);
    }
    blocks
}

/// Searches for the partition minimizing `max_j ‖Σ_{i∈S_j} A_i‖`.
///
/// The exhaustive strategy visits one representative per relabeling orbit
/// (the lexicographically smallest, a restricted-growth string) and returns
/// the global minimizer with the lexicographically smallest `ω`. The local
/// strategy runs seeded steepest-descent restarts over single-index moves
/// and returns the first restart (by index) meeting the bound, or the best
/// assignment seen. Matrices that are numerically zero go to block 1.
pub fn partition_search(
    system: &PsdSystem,
    r: usize,
    options: &SearchOptions,
) -> Result<PartitionSearchResult> {
    check_r(r)?;
    if !system.sum_is_identity() {
        return Err(Error::PreconditionFailed("the matrices do not sum to the identity".into()));
    }
    let c = system.norm_bound();
    let bound = partition_bound(r, c);
    let active: Vec<usize> = (0..system.m())
        .filter(|&i| linalg::hermitian_norm(&system.matrices()[i]) > ZERO_NORM)
        .collect();
    let reduced = system.permuted(&active);
    let (omega_active, iterations, status_if_over) = match options.strategy {
        Strategy::Exhaustive => {
            let (w, n) = exhaustive(&reduced, r, options.budget)?;
            (w, n, SearchStatus::BoundViolated)
        }
        Strategy::Local => {
            let (w, n) = local(&reduced, r, bound, options);
            (w, n, SearchStatus::BoundNotCertified)
        }
    };
    let mut omega = vec![1; system.m()];
    for (&i, &w) in active.iter().zip(&omega_active) {
        omega[i] = w;
    }
    let (objective, block_norms) = BlockNorms::new(system).objective(&omega, r);
    Ok(PartitionSearchResult {
        best: Assignment { r, omega },
        objective,
        bound,
        c,
        strategy: options.strategy,
        iterations,
        status: if objective <= bound + BOUND_SLACK {
            SearchStatus::Certified
        } else {
            status_if_over
        },
        block_norms,
    })
}

fn exhaustive(system: &PsdSystem, r: usize, budget: u64) -> Result<(Vec<usize>, u64)> {
    let m = system.m();
    let required = canonical_count(m, r);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: budget as u128,
        });
    }
    let norms = BlockNorms::new(system);
    let mut cursor = vec![1; m];
    let mut more = true;
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut seen = 0u64;
    while more {
        let mut chunk = Vec::with_capacity(CHUNK);
        while more && chunk.len() < CHUNK {
            chunk.push(cursor.clone());
            more = next_rgs(&mut cursor, r);
        }
        seen += chunk.len() as u64;
        let scored = par::map_range(chunk.len(), |k| norms.objective(&chunk[k], r).0);
        for (obj, omega) in scored.into_iter().zip(chunk) {
            if best.as_ref().is_none_or(|(b, w)| (obj, &omega) < (*b, w)) {
                best = Some((obj, omega));
            }
        }
    }
    Ok((best.map(|(_, w)| w).unwrap_or_default(), seen))
}

/// Incremental state for single-index moves.
struct LocalState<'a> {
    norms_of: &'a BlockNorms<'a>,
    omega: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    norms: Vec<f64>,
}

impl<'a> LocalState<'a> {
    fn new(norms_of: &'a BlockNorms<'a>, omega: Vec<usize>, r: usize) -> Self {
        let blocks = blocks_of(&omega, r);
        let norms = blocks.iter().map(|b| norms_of.norm(b)).collect();
        Self {
            norms_of,
            omega,
            blocks,
            norms,
        }
    }

    fn key(norms: &[f64]) -> (f64, f64) {
        (
            norms.iter().copied().fold(0.0, f64::max),
            norms.iter().map(|n| n * n).sum(),
        )
    }

    /// Block contents after moving index `i` to block `to`.
    fn moved(&self, i: usize, to: usize) -> (Vec<usize>, Vec<usize>) {
        let from = self.omega[i];
        let shrunk: Vec<usize> = self.blocks[from - 1].iter().copied().filter(|&k| k != i).collect();
        let mut grown = self.blocks[to - 1].clone();
        // keep blocks sorted so norms do not depend on move history
        let at = grown.partition_point(|&k| k < i);
        grown.insert(at, i);
        (shrunk, grown)
    }

    /// Norms of the two touched blocks after moving index `i` to block `to`.
    fn trial(&self, i: usize, to: usize) -> (f64, f64) {
        let (shrunk, grown) = self.moved(i, to);
        (self.norms_of.norm(&shrunk), self.norms_of.norm(&grown))
    }

    fn apply(&mut self, i: usize, to: usize, (na, nb): (f64, f64)) {
        let from = self.omega[i];
        let (shrunk, grown) = self.moved(i, to);
        self.blocks[from - 1] = shrunk;
        self.blocks[to - 1] = grown;
        self.norms[from - 1] = na;
        self.norms[to - 1] = nb;
        self.omega[i] = to;
    }
}

/// `(key, index, target block, touched norms)` of a candidate move.
type Move = ((f64, f64), usize, usize, (f64, f64));

fn descend(norms_of: &BlockNorms, r: usize, start: Vec<usize>, budget: u64) -> (Vec<usize>, f64, u64) {
    let m = start.len();
    let mut state = LocalState::new(norms_of, start, r);
    let mut used = 1u64;
    loop {
        let current = LocalState::key(&state.norms);
        let mut best: Option<Move> = None;
        'scan: for i in 0..m {
            for to in (1..=r).filter(|&b| b != state.omega[i]) {
                if used >= budget {
                    break 'scan;
                }
                used += 1;
                let pair = state.trial(i, to);
                let mut norms = state.norms.clone();
                norms[state.omega[i] - 1] = pair.0;
                norms[to - 1] = pair.1;
                let key = LocalState::key(&norms);
                if key < current && best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, i, to, pair));
                }
            }
        }
        match best {
            Some((_, i, to, pair)) => state.apply(i, to, pair),
            None => break,
        }
        if used >= budget {
            break;
        }
    }
    let obj = LocalState::key(&state.norms).0;
    (state.omega, obj, used)
}

/// Restarts run in batches of `RESTART_BATCH`; the search stops after the
/// first batch containing a certified restart. The batch size is fixed, so
/// the result does not depend on the thread count.
fn local(system: &PsdSystem, r: usize, bound: f64, options: &SearchOptions) -> (Vec<usize>, u64) {
    let m = system.m();
    let norms_of = BlockNorms::new(system);
    let restarts = options.restarts.max(1);
    let per_restart = (options.budget / restarts as u64).max(1);
    let mut used = 0;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for first in (0..restarts).step_by(RESTART_BATCH) {
        let count = RESTART_BATCH.min(restarts - first);
        let runs = par::map_range(count, |k| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream((first + k) as u64);
            let start: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=r)).collect();
            descend(&norms_of, r, start, per_restart)
        });
        used += runs.iter().map(|run| run.2).sum::<u64>();
        if let Some((w, _, _)) = runs.iter().find(|run| run.1 <= bound + BOUND_SLACK) {
            return (w.clone(), used);
        }
        for (w, obj, _) in runs {
            if best.as_ref().is_none_or(|(b, bw)| (obj, &w) < (*b, bw)) {
                best = Some((obj, w));
            }
        }
    }
    (best.map(|(_, w)| w).unwrap_or_default(), used)
}

#[derive(Debug, Clone, Serialize)]
pub struct NormCorollary {
    pub best: Assignment,
    /// `min_ω ‖𝐀(ω)‖`.
    pub min_norm: f64,
    /// `r · max_i Tr A_i`.
    pub epsilon: f64,
    /// `(1 + √ε)²`.
    pub bound: f64,
    pub holds: bool,
}

/// `min_ω ‖𝐀(ω)‖ ≤ (1 + √(r max Tr A_i))²`, with the minimum found
/// exhaustively. For rank-one PSD matrices `Tr A_i = ‖A_i‖`.
pub fn norm_corollary_check(l: &LiftedSystem, cfg: &Config) -> Result<NormCorollary> {
    require_rank_one(&l.base)?;
    let search = partition_search(&l.base, l.r, &SearchOptions::exhaustive(cfg.budget.enumeration))?;
    let min_norm = l.r as f64 * search.objective;
    let epsilon = l.r as f64 * l.base.trace_bound();
    let bound = crate::mixedchar::root_bound(epsilon);
    Ok(NormCorollary {
        best: search.best,
        min_norm,
        epsilon,
        bound,
        holds: min_norm <= bound + BOUND_SLACK,
    })
}
