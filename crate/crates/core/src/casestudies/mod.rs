//! Worked examples: each recurrence is run in emulated low-precision or
//! perturbed arithmetic next to an exact rational oracle, and the observed
//! errors are compared with closed-form global error bounds.

pub mod bernoulli;
mod consts;
pub mod legendre;
pub mod policy;
pub mod report;
pub mod toy;
pub mod wave;

pub use bernoulli::{bernoulli_exact, bernoulli_exact_checks, bernoulli_float, bernoulli_run};
pub use consts::{pi_bracket, sine_samples};
pub use legendre::{legendre_exact, legendre_run};
pub use policy::ErrorPolicy;
pub use report::{Record, SimulationReport, Summary};
pub use toy::{
    toy_fixed_run, toy_float_run, toy_float_tightness, toy_float_tightness_detail,
    toy_float_tightness_run,
};
pub use wave::{
    wave_extension_check, wave_identity_check, wave_lambda, wave_lambda_report,
    wave_lambda_violations, wave_report, wave_run, wave_simulate, CyclicPolySeries, WaveSimulation,
};
