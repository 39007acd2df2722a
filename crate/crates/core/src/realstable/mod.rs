//! Real stable polynomials built from PSD matrix systems, their barrier
//! functions, and a one-sided stability falsifier.

mod barrier;
mod determinantal;
mod multipoly;
mod stability;
mod system;

pub use barrier::{
    barrier, barrier_derivative_exact, barrier_shift_check, barrier_sign_check, default_step,
    orthant_positivity_scan, polynomial_barrier, BarrierReport, DerivativeCheck, RayCheck, ShiftReport, Verdict,
};
pub use determinantal::{from_determinant, interpolation_grid_size};
pub use multipoly::MultiPoly;
pub use stability::stability_falsifier;
pub use system::{PsdSystem, SystemSummary, IDENTITY_TOL};
