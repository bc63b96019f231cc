//! Rigorous rounding-error analysis for linear recurrences.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: exact rationals and a software binary float with
//!   round-to-nearest-even at any precision;
//! * [`series`]: truncated power series and the majorant-series calculus
//!   (the `≪` relation, θ̂ error series, linear and differential majorant
//!   solvers);
//! * [`ball`]: midpoint-radius complex balls over software floats;
//! * [`dfinite`]: certified summation of D-finite series with midpoint
//!   squashing and a global error bound;
//! * [`casestudies`]: simulations of concrete recurrences against exact
//!   oracles and their a priori error bounds.

pub mod ball;
pub mod casestudies;
pub mod dfinite;
pub mod error;
pub mod exactnum;
pub mod series;

pub use ball::Ball;
pub use error::{Error, Result};
pub use exactnum::{BinFloat, ComplexRational, FloatContext, Rational};
pub use series::{NonnegSeries, TruncSeries};
