//! `c_{n+1} = 2 c_n - c_{n-1}`, `c_{-1} = 0`, whose exact solution is
//! `c_n = c_0 (n + 1)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::policy::{ErrorPolicy, Injector};
use super::report::{Record, SimulationReport};
use crate::dfinite::round_up_dyadic;
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{int, sqrt_lower, sqrt_upper, to_decimal, BinFloat, FloatContext, Rational};
use crate::series::TruncSeries;

/// Rows up to this index carry the naive forward bound as an extra column.
pub const NAIVE_COLUMN_LIMIT: usize = 64;

const ALPHA_BITS: u64 = 128;

/// `λ₊α₊ⁿ + λ₋α₋ⁿ` with `α± = 1 ± √2`, `λ± = 4 ± 3√2`: an integer, obtained
/// from `x_0 = 8`, `x_1 = 20`, `x_{n+1} = 2 x_n + x_{n-1}`.
pub fn naive_growth(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(8), BigInt::from(20));
    for _ in 0..n {
        let c = &b * 2 + &a;
        a = b;
        b = c;
    }
    a
}

/// Naive forward bound `(λ₊α₊ⁿ + λ₋α₋ⁿ - 4) u`, exact.
pub fn naive_bound(n: usize, u: &Rational) -> Rational {
    (Rational::from_integer(naive_growth(n)) - int(4)) * u
}

/// Rational upper bound on the naive forward bound computed from a bracket
/// of `√2` (an independent check of [`naive_bound`]).
pub fn naive_bound_bracketed(n: usize, u: &Rational, guard_bits: u32) -> Rational {
    let hi = sqrt_upper(&int(2), guard_bits);
    let lo = sqrt_lower(&int(2), guard_bits);
    let plus = (int(4) + int(3) * &hi) * num_traits::pow(int(1) + &hi, n);
    // λ₋α₋ⁿ = (-1)^{n+1} (3√2 - 4)(√2 - 1)ⁿ, increasing in √2 in magnitude
    let minus = if n % 2 == 1 {
        (int(3) * &hi - int(4)) * num_traits::pow(&hi - int(1), n)
    } else {
        -(int(3) * &lo - int(4)) * num_traits::pow(&lo - int(1), n)
    };
    (plus + minus - int(4)) * u
}

fn grid_scaled(bound: &Rational, k: &BigInt) -> Rational {
    Injector::scale(bound, k)
}

/// Fixed-point model: `c̃_{n+1} = 2 c̃_n - c̃_{n-1} + ε_n`, `|ε_n| <= 2u`,
/// `|δ_0| <= u`, simulated exactly with injected errors and checked against
/// `|δ_n| <= (n+1)(n+2) u`.
pub fn toy_fixed_run(
    c0: &Rational,
    u: &Rational,
    steps: usize,
    policy: ErrorPolicy,
) -> Result<SimulationReport> {
    if u.is_negative() {
        return Err(Error::Precondition("u must be nonnegative".into()));
    }
    let mut rep = SimulationReport::new("toy-fixed");
    rep.param("c0", rational_to_string(c0));
    rep.param("u", rational_to_string(u));
    rep.param("steps", steps);
    rep.param("policy", policy);
    let two_u = u * int(2);
    let mut inj = Injector::new(policy);
    let mut d_prev = Rational::zero();
    let mut d = match policy {
        ErrorPolicy::Random(_) => grid_scaled(u, &inj.next(true)),
        _ => u.clone(),
    };
    let mut naive_at_30 = None;
    for n in 0..steps {
        let exact = c0 * int(n as i64 + 1);
        let bound = u * int((n as i64 + 1) * (n as i64 + 2));
        let mut rec = Record::new(n, &exact + &d, exact, d.abs(), bound.clone());
        if n <= NAIVE_COLUMN_LIMIT {
            let nb = naive_bound(n, u);
            if n == 30 {
                naive_at_30 = Some((nb.clone(), bound));
            }
            rec = rec.with("naive_bound", nb);
        }
        rep.push(rec);
        let trend = &d * int(2) - &d_prev;
        let eps = grid_scaled(&two_u, &inj.next(!trend.is_negative()));
        let next = trend + eps;
        d_prev = std::mem::replace(&mut d, next);
    }
    if let Some((nb, sharp)) = naive_at_30 {
        if sharp.is_positive() {
            let factor = nb / sharp;
            rep.param("naive_over_sharp_at_30", to_decimal(&factor, 6));
            rep.check("naive_factor_at_30_ge_1e6", factor >= int(1_000_000));
        }
    }
    Ok(rep)
}

/// Upper bound on the larger root `α = 1 + u + √(u(1+u))` of
/// `z² - 2(1+u)z + (1+u)`, as a 128-bit dyadic.
pub fn toy_alpha_upper(u: &Rational) -> Rational {
    let one_u = Rational::one() + u;
    let root = sqrt_upper(&(u * &one_u), 96);
    round_up_dyadic(&(one_u + root), ALPHA_BITS)
}

/// Lower bound companion of [`toy_alpha_upper`].
pub fn toy_alpha_lower(u: &Rational) -> Rational {
    let one_u = Rational::one() + u;
    one_u + sqrt_lower(&(u * (Rational::one() + u)), 96)
}

/// Checks `αⁿ <= 3` for every `n <= u^{-1/2}` using the upper bound on `α`.
pub fn toy_alpha_power_bounded(u: &Rational) -> bool {
    let alpha = toy_alpha_upper(u);
    let mut pw = Rational::one();
    let mut n: i64 = 0;
    while int((n + 1) * (n + 1)) * u <= Rational::one() {
        pw = round_up_dyadic(&(&pw * &alpha), ALPHA_BITS);
        n += 1;
        if pw > int(3) {
            return false;
        }
    }
    true
}

/// Floating-point model: `c̃_{n+1} = fl(2 c̃_n - c̃_{n-1})` with one rounding
/// per step (doubling is exact), checked against
/// `|δ_n| <= |c_0| (n+1)(n+2)(n+3)/6 · αⁿ u`.
pub fn toy_float_run(c0: &BinFloat, ctx: FloatContext, steps: usize) -> Result<SimulationReport> {
    let c0q = c0.to_rational();
    if ctx.round(&c0q).to_rational() != c0q {
        return Err(Error::Precondition(
            "c0 is not representable at the working precision".into(),
        ));
    }
    let u = ctx.unit_roundoff();
    let alpha = toy_alpha_upper(&u);
    let mut rep = SimulationReport::new("toy-float");
    rep.param("c0", rational_to_string(&c0q));
    rep.param("precision", ctx.precision());
    rep.param("steps", steps);
    rep.param("alpha_upper", to_decimal(&alpha, 20));
    let mut prev = BinFloat::zero(ctx.precision());
    let mut cur = ctx.round(&c0q);
    let mut pw = Rational::one();
    let mut pow_ok = true;
    let small_u = u <= crate::exactnum::pow2(-7);
    for n in 0..steps {
        let nn = n as i64;
        let exact = &c0q * int(nn + 1);
        let computed = cur.to_rational();
        let err = (&computed - &exact).abs();
        let bound = c0q.abs() * int((nn + 1) * (nn + 2) * (nn + 3)) / int(6) * &pw * &u;
        rep.push(Record::new(n, computed, exact, err, bound).with("alpha_pow", pw.clone()));
        if small_u && int(nn * nn) * &u <= Rational::one() && pw > int(3) {
            pow_ok = false;
        }
        let next = ctx.sub(&cur.mul_pow2(1), &prev);
        prev = std::mem::replace(&mut cur, next);
        pw = round_up_dyadic(&(&pw * &alpha), ALPHA_BITS);
    }
    if small_u {
        rep.check("alpha_pow_le_3_below_u_pow_minus_half", pow_ok);
    }
    Ok(rep)
}

/// Both sides of the tightness identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tightness {
    /// Simulated `δ_n` with every relative error equal to `u`.
    pub delta: Vec<Rational>,
    /// Coefficients of `|c_0| u / ((1-z)²(1 - 2(1+u)z + (1+u)z²))`.
    pub delta_hat: Vec<Rational>,
    pub first_mismatch: Option<usize>,
}

/// Runs `c̃_{n+1} = (2 c̃_n - c̃_{n-1})(1 + u)` exactly and compares with the
/// expansion of the majorant. With `initial_error`, the starting value also
/// carries the factor `1 + u` (`c̃_0 = c_0 (1 + u)`), which is the setting
/// where the majorant is attained; without it `c̃_0 = c_0`.
pub fn toy_float_tightness_detail(
    c0: &Rational,
    u: &Rational,
    steps: usize,
    initial_error: bool,
) -> Result<Tightness> {
    if c0.is_negative() || u.is_negative() {
        return Err(Error::Precondition(
            "tightness needs c0 >= 0 and u >= 0".into(),
        ));
    }
    let one_u = Rational::one() + u;
    let mut delta = Vec::with_capacity(steps);
    let mut prev = Rational::zero();
    let mut cur = if initial_error {
        c0 * &one_u
    } else {
        c0.clone()
    };
    for n in 0..steps {
        delta.push(&cur - c0 * int(n as i64 + 1));
        let next = (&cur * int(2) - &prev) * &one_u;
        prev = std::mem::replace(&mut cur, next);
    }
    let den = TruncSeries::new(vec![int(1), int(-2), int(1)])
        .truncate(steps.max(1))
        .mul(
            &TruncSeries::new(vec![int(1), int(-2) * &one_u, one_u.clone()]).truncate(steps.max(1)),
        );
    let inv = den.inverse()?;
    let scale = c0.abs() * u;
    let delta_hat: Vec<Rational> = inv
        .coeffs()
        .iter()
        .take(steps)
        .map(|c| c * &scale)
        .collect();
    let first_mismatch = delta.iter().zip(&delta_hat).position(|(a, b)| a != b);
    Ok(Tightness {
        delta,
        delta_hat,
        first_mismatch,
    })
}

/// Exact equality `δ_n = δ̂_n` for `n < steps`.
pub fn toy_float_tightness(c0: &Rational, u: &Rational, steps: usize) -> Result<bool> {
    Ok(toy_float_tightness_detail(c0, u, steps, true)?
        .first_mismatch
        .is_none())
}

/// Report form of the tightness experiment: error `|δ_n|` against the
/// majorant coefficient `δ̂_n`, plus the exact-equality check.
pub fn toy_float_tightness_run(
    c0: &Rational,
    u: &Rational,
    steps: usize,
) -> Result<SimulationReport> {
    let t = toy_float_tightness_detail(c0, u, steps, true)?;
    let mut rep = SimulationReport::new("toy-tight");
    rep.param("c0", rational_to_string(c0));
    rep.param("u", rational_to_string(u));
    rep.param("steps", steps);
    for (n, (d, dh)) in t.delta.iter().zip(&t.delta_hat).enumerate() {
        let exact = c0 * int(n as i64 + 1);
        rep.push(Record::new(n, &exact + d, exact, d.abs(), dh.clone()));
    }
    rep.param(
        "first_mismatch",
        t.first_mismatch
            .map_or("none".to_string(), |n| n.to_string()),
    );
    rep.check("exact_equality", t.first_mismatch.is_none());
    Ok(rep)
}
