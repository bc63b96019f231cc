//! Exact scalars: arbitrary-precision rationals, complex rationals, and a
//! software binary floating-point type with round-to-nearest-even.
//!
//! Rationals are the ground truth for every oracle in the crate. The
//! [`BinFloat`] type emulates `t`-bit binary arithmetic with an unbounded
//! exponent range, so that `fl(x op y) = (x op y)(1 + d)` with `|d| <= 2^-t`
//! holds for every operation and can be checked exactly.

mod binfloat;
pub mod serde_exact;

pub use binfloat::{fp_op, round_nearest, BinFloat, FloatContext, FpOp};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexRational = Complex<BigRational>;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms, with a subquadratic gcd for large operands.
/// Panics if `den == 0`.
pub fn reduced(num: BigInt, den: BigInt) -> Rational {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return Rational::zero();
    }
    let (num, den) = if den.is_negative() {
        (-num, -den)
    } else {
        (num, den)
    };
    let to_ubig = |x: &BigInt| dashu_int::UBig::from_le_bytes(&x.magnitude().to_bytes_le());
    let g = dashu_int::ops::Gcd::gcd(&to_ubig(&num), &to_ubig(&den));
    let g = BigInt::from(BigUint::from_bytes_le(&g.to_le_bytes()));
    if g.is_one() {
        Rational::new_raw(num, den)
    } else {
        Rational::new_raw(num / &g, den / g)
    }
}

/// `2^e` for any integer `e`.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new_raw(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn complex(re: Rational, im: Rational) -> ComplexRational {
    Complex::new(re, im)
}

pub fn real(re: Rational) -> ComplexRational {
    Complex::new(re, Rational::zero())
}

/// Squared modulus, exact.
pub fn norm_sqr(z: &ComplexRational) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

/// Rational bracket `lo <= sqrt(q) <= hi` with `hi / lo - 1 <= 2^-guard_bits`.
///
/// Uses an integer square root of `num * den * 4^guard_bits`; perfect
/// squares come out exact.
pub fn sqrt_bounds(q: &Rational, guard_bits: u32) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    if q.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let num = to_biguint(q.numer());
    let den = to_biguint(q.denom());
    let scaled: BigUint = (&num * &den) << (2 * guard_bits as usize);
    let s = scaled.sqrt();
    let exact = &s * &s == scaled;
    let scale = BigInt::from(den) << guard_bits as usize;
    let lo = Rational::new(BigInt::from(s.clone()), scale.clone());
    let hi = if exact {
        lo.clone()
    } else {
        Rational::new(BigInt::from(s + 1u32), scale)
    };
    (lo, hi)
}

pub fn sqrt_upper(q: &Rational, guard_bits: u32) -> Rational {
    sqrt_bounds(q, guard_bits).1
}

pub fn sqrt_lower(q: &Rational, guard_bits: u32) -> Rational {
    sqrt_bounds(q, guard_bits).0
}

/// Upper bound on `|z|`, within a relative gap of `2^-guard_bits`.
pub fn abs_upper(z: &ComplexRational, guard_bits: u32) -> Rational {
    assert!(guard_bits >= 1);
    if z.im.is_zero() {
        return z.re.abs();
    }
    if z.re.is_zero() {
        return z.im.abs();
    }
    sqrt_upper(&norm_sqr(z), guard_bits)
}

/// Lower bound on `|z|`, within a relative gap of `2^-guard_bits`.
pub fn abs_lower(z: &ComplexRational, guard_bits: u32) -> Rational {
    assert!(guard_bits >= 1);
    if z.im.is_zero() {
        return z.re.abs();
    }
    if z.re.is_zero() {
        return z.im.abs();
    }
    sqrt_lower(&norm_sqr(z), guard_bits)
}

/// Parses `"p/q"`, integers, and decimal literals such as `-1.25e-3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| err())?
    };
    let e10 = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if e10 >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, e10 as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-e10) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Parses `"re,im"` (or a lone real) into a complex rational.
pub fn parse_complex(s: &str) -> Result<ComplexRational> {
    match s.split_once(',') {
        Some((re, im)) => Ok(complex(parse_rational(re)?, parse_rational(im)?)),
        None => Ok(real(parse_rational(s)?)),
    }
}

/// Scientific-notation rendering with `digits` significant digits, rounded
/// to nearest. Intended for display only; exact values travel as `p/q`.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let p = q.numer().abs();
    let d = q.denom().clone();
    let ten = BigInt::from(10u32);
    // first guess for the decimal exponent of the leading digit
    let mut e = ((p.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let lower = num_traits::pow(ten.clone(), digits - 1);
    let upper = num_traits::pow(ten.clone(), digits);
    let scaled = |e: i64| -> (BigInt, BigInt) {
        let shift = digits as i64 - 1 - e;
        if shift >= 0 {
            (&p * num_traits::pow(ten.clone(), shift as usize), d.clone())
        } else {
            (
                p.clone(),
                &d * num_traits::pow(ten.clone(), (-shift) as usize),
            )
        }
    };
    let (mut m, mut rem, mut den);
    loop {
        let (n, dd) = scaled(e);
        m = &n / &dd;
        rem = &n % &dd;
        den = dd;
        if m >= upper {
            e += 1;
        } else if m < lower {
            e -= 1;
        } else {
            break;
        }
    }
    if BigInt::from(2u32) * &rem >= den {
        m += 1u32;
        if m >= upper {
            m /= 10u32;
            e += 1;
        }
    }
    let ds = m.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&ds[..1]);
    if ds.len() > 1 {
        out.push('.');
        out.push_str(&ds[1..]);
    }
    out.push_str(&format!("e{e}"));
    out
}

pub fn complex_to_decimal(z: &ComplexRational, digits: usize) -> String {
    if z.im.is_zero() {
        return to_decimal(&z.re, digits);
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!(
        "{} {} {}i",
        to_decimal(&z.re, digits),
        sign,
        to_decimal(&z.im.abs(), digits)
    )
}

/// Positive integer power with exact arithmetic.
pub fn rpow(q: &Rational, n: u64) -> Rational {
    num_traits::pow(q.clone(), n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagorean_modulus_is_exact() {
        let z = complex(int(3), int(4));
        assert_eq!(abs_upper(&z, 10), int(5));
        assert_eq!(abs_lower(&z, 10), int(5));
    }

    #[test]
    fn zero_modulus() {
        let z = complex(int(0), int(0));
        assert!(abs_upper(&z, 4).is_zero());
        assert!(abs_lower(&z, 4).is_zero());
    }

    #[test]
    fn sqrt2_bracket_gap() {
        let z = complex(int(1), int(1));
        let lo = abs_lower(&z, 10);
        let hi = abs_upper(&z, 10);
        assert!(&lo * &lo <= int(2));
        assert!(&hi * &hi >= int(2));
        assert!(&hi - &lo <= &lo * pow2(-10));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-1.25e-1").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("2e3").unwrap(), int(2000));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(
            parse_complex("0.5,-2").unwrap(),
            complex(rat(1, 2), int(-2))
        );
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(to_decimal(&int(-1000), 3), "-1.00e3");
        assert_eq!(to_decimal(&rat(2, 3), 3), "6.67e-1");
        assert_eq!(to_decimal(&rat(9999, 1000), 2), "1.0e1");
    }
}
