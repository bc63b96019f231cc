//! Scaled Bernoulli numbers `b_k = B_{2k}/(2k)!` by the recurrence
//! `b_k = 1/((2k)! 4^k) - Σ_{j<k} b_j / ((2k+1-2j)! 4^{k-j})`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::consts::{pi_bracket, pow_exact};
use super::report::{Record, SimulationReport};
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, BinFloat, FloatContext, Rational};

fn factorials(m: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::one()];
    for i in 1..=m {
        let next = &f[i - 1] * i;
        f.push(next);
    }
    f
}

/// Exact `b_0, ..., b_{count-1}`.
pub fn bernoulli_exact(count: usize) -> Result<Vec<Rational>> {
    if count == 0 {
        return Err(Error::Precondition("need at least one term".into()));
    }
    let f = factorials(2 * count + 1);
    let mut b: Vec<Rational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut v = Rational::new(BigInt::one(), &f[2 * k] << (2 * k));
        for (j, bj) in b.iter().enumerate() {
            v -= bj / Rational::from_integer(&f[2 * k + 1 - 2 * j] << (2 * (k - j)));
        }
        b.push(v);
    }
    Ok(b)
}

/// Bits of the π bracket used to certify the magnitude enclosure up to
/// index `count - 1`: the relative slack `ζ(2k) - 1 ≈ 4^{-k}` must exceed
/// the bracket error amplified by the power `2k`.
pub fn magnitude_bracket_bits(count: usize) -> u32 {
    64u32.max(4 * count as u32 + 64)
}

/// Checks `(-1)^{k+1} b_k > 0` and `2(2π)^{-2k} <= |b_k| <= 4(2π)^{-2k}` for
/// `1 <= k < b.len()`, with `π` replaced by the bracket endpoint that makes
/// each inequality harder.
pub fn bernoulli_exact_checks(b: &[Rational]) -> (bool, bool) {
    let signs = b.iter().enumerate().skip(1).all(|(k, v)| {
        if k % 2 == 1 {
            v.is_positive()
        } else {
            v.is_negative()
        }
    });
    let (lo, hi) = pi_bracket(magnitude_bracket_bits(b.len()));
    let two_lo = &lo * int(2);
    let two_hi = &hi * int(2);
    let mut mag = true;
    let mut plo = Rational::one();
    let mut phi = Rational::one();
    for v in b.iter().skip(1) {
        plo *= &two_lo * &two_lo;
        phi *= &two_hi * &two_hi;
        let a = v.abs();
        // 2/(2π)^{2k} <= 2/(2π_lo)^{2k} <= |b_k| <= 4/(2π_hi)^{2k} <= 4/(2π)^{2k}
        mag &= int(2) <= &a * &plo && &a * &phi <= int(4);
    }
    (signs, mag)
}

/// Floating-point realization: chain-product factorials recomputed for
/// each term, exact scaling by powers of four, one rounding per division,
/// left-to-right summation and a final rounded subtraction.
pub fn bernoulli_float(ctx: FloatContext, count: usize) -> Vec<BinFloat> {
    let t = ctx.precision();
    let one = ctx.round(&Rational::one());
    let fact = |m: usize| -> BinFloat {
        let mut acc = one.clone();
        for i in 2..=m {
            acc = ctx.mul(&acc, &ctx.round(&int(i as i64)));
        }
        acc
    };
    let mut b: Vec<BinFloat> = Vec::with_capacity(count);
    for k in 0..count {
        if k == 0 {
            b.push(one.clone());
            continue;
        }
        let ak = ctx
            .div(&one, &fact(2 * k).mul_pow2(2 * k as i64))
            .expect("nonzero");
        let mut s = BinFloat::zero(t);
        for (j, bj) in b.iter().enumerate() {
            let den = fact(2 * k + 1 - 2 * j).mul_pow2(2 * (k - j) as i64);
            let term = ctx.div(bj, &den).expect("nonzero");
            s = if j == 0 { term } else { ctx.add(&s, &term) };
        }
        b.push(ctx.sub(&ak, &s));
    }
    b
}

/// `(1 + 21.2u)^k (1.1k + 446) u`.
pub fn bernoulli_main_bound(u: &Rational, k: usize) -> Rational {
    let base = Rational::one() + rat(106, 5) * u;
    pow_exact(&base, k as u64) * (rat(11, 10) * int(k as i64) + int(446)) * u
}

/// `(3k + 1213) u`, valid where `43 k u <= 1`.
pub fn bernoulli_corollary_bound(u: &Rational, k: usize) -> Rational {
    int(3 * k as i64 + 1213) * u
}

/// Computes `b̃_k` at precision `t` and checks the relative error against
/// the main bound for `1 <= k < count` (plus `k = 0`, which is exact), and
/// against the simplified bound wherever `43ku <= 1`.
pub fn bernoulli_run(ctx: FloatContext, count: usize) -> Result<SimulationReport> {
    let t = ctx.precision();
    if t < 16 {
        return Err(Error::Precondition(
            "unit roundoff must not exceed 2^-16".into(),
        ));
    }
    if count == 0 {
        return Err(Error::Precondition("need at least one term".into()));
    }
    let need = (usize::BITS - (2 * count - 1).leading_zeros()) as u32;
    if t < need {
        return Err(Error::Precondition(format!(
            "precision {t} below ceil(log2(2K)) = {need}"
        )));
    }
    let u = ctx.unit_roundoff();
    let exact = bernoulli_exact(count)?;
    let approx = bernoulli_float(ctx, count);
    let mut rep = SimulationReport::new("bernoulli");
    rep.param("precision", t);
    rep.param("count", count);
    let mut corollary_ok = true;
    let mut corollary_range = 0usize;
    for k in 0..count {
        let computed = approx[k].to_rational();
        let rel = ((&computed - &exact[k]) / &exact[k]).abs();
        let mut rec = Record::new(
            k,
            computed,
            exact[k].clone(),
            rel.clone(),
            bernoulli_main_bound(&u, k),
        );
        if int(43 * k as i64) * &u <= Rational::one() {
            let cb = bernoulli_corollary_bound(&u, k);
            corollary_ok &= rel <= cb;
            corollary_range = k;
            rec = rec.with("corollary_bound", cb);
        }
        rep.push(rec);
    }
    let (signs, mag) = bernoulli_exact_checks(&exact);
    rep.param("corollary_max_k", corollary_range);
    rep.param("pi_bracket_bits", magnitude_bracket_bits(count));
    rep.check("b0_exact", approx[0].to_rational() == Rational::one());
    rep.check("corollary_bound", corollary_ok);
    rep.check("exact_sign_alternation", signs);
    rep.check("exact_magnitude_enclosure", mag);
    Ok(rep)
}
