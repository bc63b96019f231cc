use num_traits::{One, Zero};

use crate::dfinite::round_up_dyadic;
use crate::exactnum::{int, pow2, BinFloat, FloatContext, Rational};

fn round_down_dyadic(q: &Rational, bits: u64) -> Rational {
    -round_up_dyadic(&-q, bits)
}

/// Bracket `[lo, hi]` of `atan(1/m)` from consecutive alternating partial
/// sums, stopping once a term drops below `2^-bits`.
fn atan_inv_bracket(m: i64, bits: u32) -> (Rational, Rational) {
    let x = Rational::new(1.into(), m.into());
    let x2 = &x * &x;
    let eps = pow2(-(bits as i64));
    let mut pw = x.clone();
    let mut sum = Rational::zero();
    let mut j = 0i64;
    loop {
        let term = &pw / int(2 * j + 1);
        let prev = sum.clone();
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < eps {
            return if prev < sum { (prev, sum) } else { (sum, prev) };
        }
        pw *= &x2;
        j += 1;
    }
}

/// Dyadic rationals `lo < π < hi` with `hi - lo <= 2^(4 - bits)`, from
/// Machin's formula `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_bracket(bits: u32) -> (Rational, Rational) {
    let (a_lo, a_hi) = atan_inv_bracket(5, bits + 8);
    let (b_lo, b_hi) = atan_inv_bracket(239, bits + 8);
    let lo = int(16) * a_lo - int(4) * b_hi;
    let hi = int(16) * a_hi - int(4) * b_lo;
    let mbits = bits as u64 + 4;
    (round_down_dyadic(&lo, mbits), round_up_dyadic(&hi, mbits))
}

/// `sin(x)` to within about `2^-bits` for `|x| <= 4`, by Taylor summation.
fn sin_approx(x: &Rational, bits: u32) -> Rational {
    let eps = pow2(-(bits as i64));
    let x2 = x * x;
    let mut term = x.clone();
    let mut sum = Rational::zero();
    let mut k = 1i64;
    loop {
        sum += &term;
        if term.clone() * term.clone() < &eps * &eps {
            return sum;
        }
        term = -term * &x2 / int((k + 1) * (k + 2));
        k += 2;
    }
}

/// Samples `sin(π i / n)`, `i = 1..n-1`, rounded to the format of `ctx`:
/// smooth initial data that is exactly representable.
pub fn sine_samples(n: usize, ctx: FloatContext) -> Vec<BinFloat> {
    let bits = ctx.precision() + 32;
    let (lo, hi) = pi_bracket(bits);
    let pi = (lo + hi) / int(2);
    (1..n)
        .map(|i| {
            let x = &pi * Rational::new((i as i64).into(), (n as i64).into());
            ctx.round(&sin_approx(&x, bits))
        })
        .collect()
}

/// `q^k` for a bracket endpoint `q > 0`, kept exact.
pub fn pow_exact(q: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}
