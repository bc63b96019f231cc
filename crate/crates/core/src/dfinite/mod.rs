//! Certified summation of D-finite power series.
//!
//! Given `P = p_r ∂^r + ... + p_0` with `p_r(0) != 0`, initial balls for the
//! first `r` Taylor coefficients of a solution, a point `ζ` inside the disk
//! free of singularities and a truncation order `N`, [`evaluate`] returns a
//! ball containing `Σ_{n<N} u_n ζ^n` for every compatible exact solution.
//!
//! The coefficients are unrolled from the recurrence of [`to_recurrence`] on
//! the squashed midpoints only; the discarded radii feed a majorant-series
//! bound on the accumulated error that is added to the final radius.

mod majorant;
mod operator;
mod poly;
mod roots;
mod sum;

pub use majorant::{
    ahat_coeff, exp_upper, final_bound, final_bound_abs, ghat_exact, ghat_prefix, initial_bounds,
    majorant_params, round_up_dyadic, FinalBound, MajorantParams,
};
pub use operator::{to_recurrence, DiffOperator, RecOperator};
pub use poly::Poly;
pub use roots::{root_modulus_lower_bound, RootBound};
pub use sum::{dfsum_loop, evaluate, DfsumOptions, DfsumResult, LoopResult};
