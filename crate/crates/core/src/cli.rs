//! Command-line surface. Every run writes one JSON report echoing the
//! command, the raw input, the effective configuration and the seed, so that
//! `verify` can recompute the result from the report alone.
//!
//! Exit codes: 0 when every certificate passes, 1 when a bound is violated or
//! could not be certified, 2 on input or validation errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Config;
use crate::error::Error;
use crate::linalg::{HermitianMatrix, MatrixJson};
use crate::mixedchar::{mixed_char, rank_one_identity_check};
use crate::partition::{self, partition_search, SearchOptions, SearchStatus};
use crate::paving::{self, PavingResult};
use crate::realstable::{self, PsdSystem};
use crate::unipoly::{is_nice_family, nice_family_falsifier, PolyFamily, RealPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCERTIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "interlace", version, about = "Mixed characteristic polynomials, barrier checks and certified paving")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON input file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget for pave and partition-search, determinant evaluations
    /// for mixed-char and barrier.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON file with `tol` and `budget` overrides.
    #[arg(long, global = true, env = "INTERLACE_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_hermitian: Option<f64>,
    #[arg(long, global = true)]
    pub tol_psd_clamp: Option<f64>,
    #[arg(long, global = true)]
    pub tol_root: Option<f64>,
    #[arg(long, global = true)]
    pub tol_interlace: Option<f64>,
    #[arg(long, global = true)]
    pub tol_sign: Option<f64>,
    #[arg(long, global = true)]
    pub tol_fd: Option<f64>,
    #[arg(long, global = true)]
    pub tol_stability: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cross_check: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    Exhaustive,
    Local,
}

impl From<StrategyArg> for partition::Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => partition::Strategy::Exhaustive,
            StrategyArg::Local => partition::Strategy::Local,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaveMode {
    /// `selfadjoint` for Hermitian input, `general` otherwise.
    Auto,
    Projection,
    Selfadjoint,
    General,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// μ[A_1, …, A_m] of a PSD system, its roots and the (1+√ε)² bound.
    MixedChar {
        /// Also write `index,root,bound` rows here.
        #[arg(long)]
        #[serde(skip)]
        roots_csv: Option<PathBuf>,
    },
    /// Pave a matrix by diagonal projections.
    Pave {
        #[arg(long)]
        epsilon: Option<f64>,
        /// Blocks for projection paving.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = PaveMode::Auto)]
        mode: PaveMode,
    },
    /// Partition a PSD system summing to I into r blocks of small norm.
    PartitionSearch {
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
    },
    /// Barrier values and sign checks at a positive point.
    Barrier {
        /// Comma-separated coordinates, one per matrix.
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<f64>,
        /// 1-based barrier index.
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// 1-based differentiation direction.
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        /// Finite-difference step; `1e-4 (1 + |x_j|)` when absent.
        #[arg(long)]
        h: Option<f64>,
        /// Also check the shift inequality with this δ.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Check a polynomial family for a common interlacing.
    NiceFamily {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Recompute a report, or check a paving given as `--blocks`.
    Verify {
        /// Partition `{"blocks": [[1-based indices], ...]}` of the input matrix.
        #[arg(long)]
        #[serde(skip)]
        blocks: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    BoundViolated,
    BoundNotCertified,
    CheckFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified => EXIT_OK,
            _ => EXIT_UNCERTIFIED,
        }
    }
}

impl From<SearchStatus> for Status {
    fn from(s: SearchStatus) -> Self {
        match s {
            SearchStatus::Certified => Status::Certified,
            SearchStatus::BoundNotCertified => Status::BoundNotCertified,
            SearchStatus::BoundViolated => Status::BoundViolated,
        }
    }
}

/// The report written by every command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub command: Command,
    pub input: Value,
    pub config: Config,
    pub seed: u64,
    pub budget: Option<u64>,
    pub status: Status,
    pub result: Value,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            // variant name of the library error, e.g. "NotPsd"
            CliError::Lib(e) => format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect(),
            CliError::Read { .. } => "Read".into(),
            CliError::Write { .. } => "Write".into(),
            CliError::Json { .. } => "Json".into(),
            CliError::Usage(_) => "Usage".into(),
        }
    }

    /// `{"error": {"kind": …, "message": …}}`.
    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn decode<T: serde::de::DeserializeOwned>(value: &Value, what: &str) -> CliResult<T> {
    serde_json::from_value(value.clone()).map_err(|e| usage(format!("input is not a valid {what}: {e}")))
}

/// Defaults, then the config file, then `--tol-*` and `--budget` flags.
pub fn effective_config(common: &CommonArgs, command: &Command) -> CliResult<Config> {
    let mut cfg = match &common.config {
        Some(path) => {
            let v = read_json(path)?;
            serde_json::from_value(v).map_err(|source| CliError::Json {
                path: path.display().to_string(),
                source,
            })?
        }
        None => Config::default(),
    };
    let t = &mut cfg.tol;
    for (flag, slot) in [
        (common.tol_hermitian, &mut t.hermitian),
        (common.tol_psd_clamp, &mut t.psd_clamp),
        (common.tol_root, &mut t.root),
        (common.tol_interlace, &mut t.interlace),
        (common.tol_sign, &mut t.sign),
        (common.tol_fd, &mut t.fd),
        (common.tol_stability, &mut t.stability),
        (common.tol_cross_check, &mut t.cross_check),
    ] {
        if let Some(v) = flag {
            if !v.is_finite() || v < 0.0 {
                return Err(usage(format!("tolerances must be finite and nonnegative, got {v}")));
            }
            *slot = v;
        }
    }
    if let Some(b) = common.budget {
        match command {
            Command::MixedChar { .. } | Command::Barrier { .. } => cfg.budget.interpolation = b,
            _ => cfg.budget.enumeration = b,
        }
    }
    Ok(cfg)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    dim: Option<usize>,
    matrices: Vec<MatrixJson>,
}

fn parse_system(input: &Value, cfg: &Config) -> CliResult<PsdSystem> {
    let s: SystemJson = decode(input, "system {\"matrices\": [...]}")?;
    let dim = s
        .dim
        .or_else(|| s.matrices.first().map(|m| m.dim))
        .ok_or_else(|| usage("an empty system needs an explicit \"dim\""))?;
    let matrices = s
        .matrices
        .iter()
        .map(|m| Ok(HermitianMatrix::new(m.to_matrix()?, cfg.tol.hermitian)?))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PsdSystem::new(dim, matrices, &cfg.tol)?)
}

fn parse_matrix(input: &Value) -> CliResult<crate::linalg::ComplexMatrix> {
    let m: MatrixJson = decode(input, "matrix {\"dim\": d, \"entries\": [...]}")?;
    Ok(m.to_matrix()?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    polynomials: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlocksJson {
    blocks: Vec<Vec<usize>>,
}

fn zero_based(blocks: &[Vec<usize>]) -> CliResult<Vec<Vec<usize>>> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| Error::BadPartition("indices are 1-based".into()).into()))
                .collect()
        })
        .collect()
}

fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
}

/// Runs one command on a parsed input; `(status, result)`.
pub fn execute(command: &Command, input: &Value, cfg: &Config, seed: u64) -> CliResult<(Status, Value)> {
    match command {
        Command::MixedChar { .. } => run_mixed_char(input, cfg),
        Command::Pave {
            epsilon,
            r,
            strategy,
            mode,
        } => run_pave(input, cfg, seed, *epsilon, *r, *strategy, *mode),
        Command::PartitionSearch { r, strategy } => run_partition(input, cfg, seed, *r, *strategy),
        Command::Barrier {
            point,
            i,
            j,
            kmax,
            h,
            delta,
        } => run_barrier(input, cfg, point, *i, *j, *kmax, *h, *delta),
        Command::NiceFamily { trials } => run_nice_family(input, cfg, seed, *trials),
        Command::Verify { .. } => Err(usage("verify cannot be nested")),
    }
}

fn run_mixed_char(input: &Value, cfg: &Config) -> CliResult<(Status, Value)> {
    let system = parse_system(input, cfg)?;
    let res = mixed_char(&system, cfg)?;
    let largest = res.roots.first().copied();
    let margin = res.bound.zip(largest).map(|(b, l)| b - l);
    let identity = if system.all_rank_one() {
        let check = rank_one_identity_check(&system, cfg)?;
        Some(json!({
            "char_poly": check.char_poly.coeffs(),
            "deviation": check.deviation,
            "tolerance": check.tolerance,
            "holds": check.holds(),
        }))
    } else {
        None
    };
    let bound_ok = margin.is_none_or(|m| m >= -cfg.tol.interlace);
    let identity_ok = identity.as_ref().is_none_or(|v| v["holds"] == json!(true));
    let status = if bound_ok && identity_ok {
        Status::Certified
    } else {
        Status::BoundViolated
    };
    Ok((
        status,
        json!({
            "system": system.summary(),
            "mu": res.mu.coeffs(),
            "roots": res.roots,
            "method": res.method,
            "bound": res.bound,
            "largest_root": largest,
            "margin": margin,
            "cross_check_deviation": res.cross_check_deviation,
            "rank_one_identity": identity,
        }),
    ))
}

/// Empty blocks are left out of `blocks`/`norms`; `block_count` counts them.
fn paving_json(p: &PavingResult, mode: PaveMode) -> Value {
    let (blocks, norms): (Vec<Vec<usize>>, Vec<f64>) = p
        .blocks
        .iter()
        .zip(&p.norms)
        .filter(|(b, _)| !b.is_empty())
        .map(|(b, &n)| (b.clone(), n))
        .unzip();
    json!({
        "mode": mode,
        "dim": p.dim,
        "blocks": one_based(&blocks),
        "norms": norms,
        "bound": p.bound,
        "epsilon": p.epsilon,
        "r": p.r,
        "block_count": p.blocks.len(),
        "operator_norm": p.operator_norm,
        "max_norm": p.max_norm(),
        "max_ratio": p.max_ratio(),
        "margin": p.bound - p.max_norm(),
        "zero_diagonal": p.zero_diagonal,
        "strategy": p.strategy,
        "iterations": p.iterations,
        "search_status": p.status,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_pave(
    input: &Value,
    cfg: &Config,
    seed: u64,
    epsilon: Option<f64>,
    r: Option<usize>,
    strategy: StrategyArg,
    mode: PaveMode,
) -> CliResult<(Status, Value)> {
    let t = parse_matrix(input)?;
    let options = SearchOptions {
        strategy: strategy.into(),
        budget: cfg.budget.enumeration,
        seed,
        restarts: partition::DEFAULT_RESTARTS,
    };
    let mode = match mode {
        PaveMode::Auto if t.hermitian_defect() <= cfg.tol.hermitian * t.frobenius_norm().max(1.0) => PaveMode::Selfadjoint,
        PaveMode::Auto => PaveMode::General,
        other => other,
    };
    let need_eps = || epsilon.ok_or_else(|| usage("--epsilon is required for this paving mode"));
    let res = match mode {
        PaveMode::Projection => {
            let p = HermitianMatrix::new(t, cfg.tol.hermitian)?;
            paving::pave_projection(&p, r.unwrap_or(2), &options, cfg)?
        }
        PaveMode::Selfadjoint => paving::pave_selfadjoint(&t, need_eps()?, &options, cfg)?,
        PaveMode::General | PaveMode::Auto => paving::pave_general(&t, need_eps()?, &options, cfg)?,
    };
    Ok((res.status.into(), paving_json(&res, mode)))
}

fn run_partition(input: &Value, cfg: &Config, seed: u64, r: usize, strategy: StrategyArg) -> CliResult<(Status, Value)> {
    let system = parse_system(input, cfg)?;
    let options = SearchOptions {
        strategy: strategy.into(),
        budget: cfg.budget.enumeration,
        seed,
        restarts: partition::DEFAULT_RESTARTS,
    };
    let res = partition_search(&system, r, &options)?;
    Ok((
        res.status.into(),
        json!({
            "system": system.summary(),
            "r": r,
            "omega": res.best.omega(),
            "blocks": res.best.blocks_one_based(),
            "objective": res.objective,
            "bound": res.bound,
            "c": res.c,
            "margin": res.bound - res.objective,
            "block_norms": res.block_norms,
            "strategy": res.strategy,
            "iterations": res.iterations,
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
fn run_barrier(
    input: &Value,
    cfg: &Config,
    point: &[f64],
    i: usize,
    j: usize,
    kmax: usize,
    h: Option<f64>,
    delta: Option<f64>,
) -> CliResult<(Status, Value)> {
    let system = parse_system(input, cfg)?;
    let m = system.m();
    let (i0, j0) = match (i.checked_sub(1), j.checked_sub(1)) {
        (Some(a), Some(b)) if a < m && b < m => (a, b),
        _ => return Err(usage(format!("--i and --j must lie in 1..={m}"))),
    };
    if point.len() != m || point.iter().any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(usage(format!("--point needs {m} positive coordinates")));
    }
    let step = h.unwrap_or_else(|| realstable::default_step(point[j0]));
    let report = realstable::barrier_sign_check(&system, point, i0, j0, kmax, step, cfg)?;
    let mut report_json = serde_json::to_value(&report).expect("serializable");
    report_json["i"] = json!(i);
    report_json["j"] = json!(j);
    if let Some(rays) = report_json["rays"].as_array_mut() {
        for ray in rays {
            let c = ray["coordinate"].as_u64().unwrap_or(0);
            ray["coordinate"] = json!(c + 1);
        }
    }
    let polynomial = realstable::from_determinant(&system, cfg.budget.interpolation)
        .and_then(|q| q.restrict(0, 0.0))
        .and_then(|p| realstable::polynomial_barrier(&p, &[&[0.0][..], point].concat(), i0 + 1))?;
    let jacobi_deviation = (polynomial - report.value).abs();
    let jacobi_ok = jacobi_deviation <= cfg.tol.cross_check * report.value.abs().max(1.0);
    let shift = delta
        .map(|d| realstable::barrier_shift_check(&system, point, j0, d, cfg))
        .transpose()?;
    let shift_ok = shift.as_ref().is_none_or(|s| s.holds);
    let status = if report.passed() && jacobi_ok && shift_ok {
        Status::Certified
    } else {
        Status::CheckFailed
    };
    Ok((
        status,
        json!({
            "system": system.summary(),
            "report": report_json,
            "polynomial_barrier": polynomial,
            "jacobi_deviation": jacobi_deviation,
            "shift": shift,
        }),
    ))
}

fn run_nice_family(input: &Value, cfg: &Config, seed: u64, trials: usize) -> CliResult<(Status, Value)> {
    let f: FamilyJson = decode(input, "family {\"polynomials\": [[c0, c1, ...], ...]}")?;
    let family = PolyFamily::new(f.polynomials.into_iter().map(RealPoly::new).collect())?;
    let verdict = is_nice_family(&family, cfg.tol.root, cfg.tol.interlace);
    let counterexample = nice_family_falsifier(&family, trials, seed, cfg.tol.root);
    let status = if verdict.nice && counterexample.is_none() {
        Status::Certified
    } else {
        Status::CheckFailed
    };
    Ok((
        status,
        json!({
            "degree": family.degree(),
            "members": family.len(),
            "nice": verdict.nice,
            "failure": verdict.failure,
            "trials": trials,
            "non_real_rooted_weights": counterexample,
        }),
    ))
}

/// Largest numeric disagreement between two results and the paths where
/// they differ beyond `tol · max(1, |a|, |b|)` or structurally.
fn compare(a: &Value, b: &Value, tol: f64, path: &str, out: &mut Vec<String>, worst: &mut f64) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            let dev = (x - y).abs();
            *worst = worst.max(dev);
            if dev.is_nan() || dev > tol * x.abs().max(y.abs()).max(1.0) {
                out.push(path.to_string());
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (k, (u, v)) in x.iter().zip(y).enumerate() {
                compare(u, v, tol, &format!("{path}[{k}]"), out, worst);
            }
        }
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => {
            for (k, u) in x {
                match y.get(k) {
                    Some(v) => compare(u, v, tol, &format!("{path}.{k}"), out, worst),
                    None => out.push(format!("{path}.{k}")),
                }
            }
        }
        _ if a == b => {}
        _ => out.push(path.to_string()),
    }
}

fn run_verify(input: &Value, blocks: Option<&Path>, epsilon: Option<f64>) -> CliResult<(Status, Value)> {
    if let Some(path) = blocks {
        let t = parse_matrix(input)?;
        let b: BlocksJson = decode(&read_json(path)?, "partition {\"blocks\": [...]}")?;
        let rep = paving::verify_paving(&t, &zero_based(&b.blocks)?, epsilon)?;
        let status = if rep.holds == Some(false) {
            Status::BoundViolated
        } else {
            Status::Certified
        };
        return Ok((status, json!({ "blocks": b.blocks, "paving": rep })));
    }
    let claimed: Report = decode(input, "report")?;
    let (status, result) = execute(&claimed.command, &claimed.input, &claimed.config, claimed.seed)?;
    let mut mismatches = Vec::new();
    let mut max_deviation = 0.0;
    compare(
        &claimed.result,
        &result,
        claimed.config.tol.cross_check,
        "result",
        &mut mismatches,
        &mut max_deviation,
    );
    if status != claimed.status {
        mismatches.push("status".into());
    }
    let paving_audit = match &claimed.command {
        Command::Pave { .. } => {
            let t = parse_matrix(&claimed.input)?;
            let blocks: Vec<Vec<usize>> = decode(&claimed.result["blocks"], "block list")?;
            let eps = claimed.result["epsilon"].as_f64();
            let rep = paving::verify_paving(&t, &zero_based(&blocks)?, eps)?;
            let norms: Vec<f64> = decode(&claimed.result["norms"], "norm list")?;
            for (k, (&a, &b)) in norms.iter().zip(&rep.norms).enumerate() {
                if (a - b).abs() > claimed.config.tol.cross_check * a.abs().max(1.0) {
                    mismatches.push(format!("paving.norms[{k}]"));
                }
            }
            Some(rep)
        }
        _ => None,
    };
    let consistent = mismatches.is_empty();
    let verdict = if !consistent {
        Status::CheckFailed
    } else {
        status
    };
    Ok((
        verdict,
        json!({
            "audited_command": claimed.command,
            "consistent": consistent,
            "mismatches": mismatches,
            "max_deviation": max_deviation,
            "recomputed_status": status,
            "paving_audit": paving_audit,
        }),
    ))
}

/// CSV `index,root,bound` with 1-based indices; an empty bound column when
/// no bound applies.
pub fn emit_roots_csv(roots: &[f64], bound: Option<f64>, path: &Path) -> std::io::Result<()> {
    let mut out = String::from("index,root,bound\n");
    for (k, r) in roots.iter().enumerate() {
        let b = bound.map(|b| b.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{}\n", k + 1, r, b));
    }
    fs::write(path, out)
}

fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    {
        // a second call in one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the parsed command and returns `(exit code, report JSON)`.
pub fn run(cli: &Cli) -> CliResult<(i32, Value)> {
    configure_threads(cli.common.threads)?;
    let cfg = effective_config(&cli.common, &cli.command)?;
    let path = cli.common.input.as_deref().ok_or_else(|| usage("--input is required"))?;
    let input = read_json(path)?;
    let (status, result) = match &cli.command {
        Command::Verify { blocks, epsilon } => run_verify(&input, blocks.as_deref(), *epsilon)?,
        other => execute(other, &input, &cfg, cli.common.seed)?,
    };
    if let Command::MixedChar { roots_csv: Some(csv) } = &cli.command {
        let roots: Vec<f64> = decode(&result["roots"], "root list")?;
        emit_roots_csv(&roots, result["bound"].as_f64(), csv).map_err(|source| CliError::Write {
            path: csv.display().to_string(),
            source,
        })?;
    }
    let report = Report {
        tool: format!("interlace {}", env!("CARGO_PKG_VERSION")),
        command: cli.command.clone(),
        input,
        config: cfg,
        seed: cli.common.seed,
        budget: cli.common.budget,
        status,
        result,
    };
    Ok((status.exit_code(), serde_json::to_value(&report).expect("serializable")))
}

fn write_out(value: &Value, output: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            // a closed pipe is not worth a panic
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cli).and_then(|(code, report)| write_out(&report, cli.common.output.as_deref()).map(|_| code));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            use std::io::Write;
            let text = serde_json::to_string_pretty(&e.to_json()).expect("serializable") + "\n";
            let _ = std::io::stdout().write_all(text.as_bytes());
            EXIT_INPUT
        }
    }
}
