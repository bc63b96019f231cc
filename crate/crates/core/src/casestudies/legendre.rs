//! Legendre polynomials `p_n = P_n(x)` by the three-term recurrence
//! `(n+1) p_{n+1} = (2n+1) x p_n - n p_{n-1}` with injected absolute errors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::policy::{ErrorPolicy, Injector};
use super::report::{Record, SimulationReport};
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{int, reduced, Rational};

/// Exact `P_0(x), ..., P_{count-1}(x)`.
pub fn legendre_exact(x: &Rational, count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let (mut prev, mut cur) = (Rational::zero(), Rational::one());
    for n in 0..count {
        out.push(cur.clone());
        let nn = n as i64;
        let next = (int(2 * nn + 1) * x * &cur - int(nn) * &prev) / int(nn + 1);
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

/// Simulates `p̃_{n+1} = ((2n+1) x p̃_n - n p̃_{n-1})/(n+1) + ε_n`,
/// `|ε_n| <= ε̄`, `p̃_0 = 1`, and checks `|p̃_n - p_n| <= (n+1)(n+2) ε̄ / 4`.
///
/// With `x = a/b` and `ε_n = ε̄ k_n / G`, the scaled quantities
/// `P_n = n! bⁿ p_n` and `D_n = n! bⁿ G (p̃_n - p_n) / ε̄` are integers obeying
/// `X_{n+1} = (2n+1) a X_n - n² b² X_{n-1} (+ (n+1)! b^{n+1} k_n)`, so the
/// whole simulation runs in integer arithmetic.
pub fn legendre_run(
    x: &Rational,
    eps_bar: &Rational,
    steps: usize,
    policy: ErrorPolicy,
) -> Result<SimulationReport> {
    if x.abs() > Rational::one() {
        return Err(Error::Precondition("|x| must not exceed 1".into()));
    }
    if eps_bar.is_negative() {
        return Err(Error::Precondition("eps_bar must be nonnegative".into()));
    }
    let mut rep = SimulationReport::new("legendre");
    rep.param("x", rational_to_string(x));
    rep.param("eps_bar", rational_to_string(eps_bar));
    rep.param("steps", steps);
    rep.param("policy", policy);
    let a = x.numer().clone();
    let b = x.denom().clone();
    let b2 = &b * &b;
    let g = Injector::grid();
    let mut inj = Injector::new(policy);
    let mut scale = BigInt::one();
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut d_prev, mut d_cur) = (BigInt::zero(), BigInt::zero());
    for n in 0..steps {
        let nn = n as i64;
        let m = (nn + 1) * (nn + 2);
        let sg = &scale * &g;
        let den = &sg * eps_bar.denom();
        let dn = &d_cur * eps_bar.numer();
        let bound = eps_bar * int(m) / int(4);
        let exact = reduced(p_cur.clone(), scale.clone());
        let err = reduced(dn.abs(), den.clone());
        let computed = reduced(&p_cur * &g * eps_bar.denom() + dn, den);
        let ratio = reduced(d_cur.abs() * 4, &sg * m);
        let ratio = if eps_bar.is_zero() {
            Rational::zero()
        } else {
            ratio
        };
        rep.push(Record::with_ratio(
            n,
            computed,
            exact,
            err,
            bound,
            Some(ratio),
        ));
        let c1 = &a * (2 * nn + 1);
        let c2 = &b2 * (nn * nn);
        let p_next = &c1 * &p_cur - &c2 * &p_prev;
        let trend = &c1 * &d_cur - &c2 * &d_prev;
        scale *= &b * (nn + 1);
        let k = inj.next(!trend.is_negative());
        let d_next = trend + &scale * k;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        d_prev = std::mem::replace(&mut d_cur, d_next);
    }
    Ok(rep)
}
