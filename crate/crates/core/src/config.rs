//! Numerical tolerances and search budgets shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Max entrywise asymmetry, relative to `max(1, ‖M‖_F)`.
    pub hermitian: f64,
    /// Eigenvalues in `[-psd_clamp, 0)` are treated as zero.
    pub psd_clamp: f64,
    /// Max relative imaginary part accepted for a "real" root.
    pub root: f64,
    /// Absolute slack on root comparisons (interlacing, bracketing, sandwiches).
    pub interlace: f64,
    /// Sign checks accept values down to `-sign * max|coeff|`.
    pub sign: f64,
    /// Slack for finite-difference and barrier inequalities.
    pub fd: f64,
    /// Relative residual below which a sampled point counts as a zero.
    pub stability: f64,
    /// Agreement required between independent computations of one quantity.
    pub cross_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            psd_clamp: 1e-8,
            root: 1e-7,
            interlace: 1e-8,
            sign: 1e-10,
            fd: 1e-5,
            stability: 1e-9,
            cross_check: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Determinant evaluations allowed for one interpolation grid.
    pub interpolation: u64,
    /// Subsets allowed for the rank-one inclusion–exclusion formula.
    pub subsets: u64,
    /// Assignments allowed for exhaustive enumeration.
    pub enumeration: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            interpolation: 1_000_000,
            subsets: 4096,
            enumeration: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub tol: Tolerances,
    pub budget: Budgets,
}
