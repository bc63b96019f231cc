use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{pow2, Rational};
use crate::error::{Error, Result};

/// Precision of a software binary floating-point format.
///
/// Exponents are unbounded: there is no overflow and no underflow, so the
/// unit roundoff `u = 2^-t` bounds the relative error of every rounded
/// operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FloatContext {
    precision: u32,
}

impl FloatContext {
    pub fn new(precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::Precondition("precision must be positive".into()));
        }
        Ok(FloatContext { precision })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `u = 2^-t`.
    pub fn unit_roundoff(&self) -> Rational {
        pow2(-(self.precision as i64))
    }

    pub fn round(&self, x: &Rational) -> BinFloat {
        round_nearest(x, *self)
    }

    pub fn add(&self, x: &BinFloat, y: &BinFloat) -> BinFloat {
        self.round(&(x.to_rational() + y.to_rational()))
    }

    pub fn sub(&self, x: &BinFloat, y: &BinFloat) -> BinFloat {
        self.round(&(x.to_rational() - y.to_rational()))
    }

    pub fn mul(&self, x: &BinFloat, y: &BinFloat) -> BinFloat {
        self.round(&(x.to_rational() * y.to_rational()))
    }

    pub fn div(&self, x: &BinFloat, y: &BinFloat) -> Result<BinFloat> {
        fp_op(*self, FpOp::Div, x, y)
    }
}

/// `mantissa * 2^exponent` with `2^(t-1) <= |mantissa| < 2^t`, or zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

impl BinFloat {
    pub fn zero(precision: u32) -> Self {
        BinFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision,
        }
    }

    /// Builds a float from raw parts, checking normalization.
    pub fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Result<Self> {
        if mantissa.is_zero() {
            return Ok(BinFloat::zero(precision));
        }
        let bits = mantissa.bits();
        if bits != precision as u64 {
            return Err(Error::Precondition(format!(
                "mantissa has {bits} bits, expected {precision}"
            )));
        }
        Ok(BinFloat {
            mantissa,
            exponent,
            precision,
        })
    }

    /// Exact import of a finite binary64 value, rounded if `t < 53`.
    pub fn from_f64(x: f64, ctx: FloatContext) -> Result<Self> {
        let q = Rational::from_float(x)
            .ok_or_else(|| Error::Precondition(format!("{x} is not finite")))?;
        Ok(round_nearest(&q, ctx))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.mantissa.clone()) * pow2(self.exponent)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn neg(&self) -> Self {
        BinFloat {
            mantissa: -&self.mantissa,
            ..self.clone()
        }
    }

    pub fn abs(&self) -> Self {
        BinFloat {
            mantissa: self.mantissa.abs(),
            ..self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BinFloat {
            exponent: self.exponent + k,
            ..self.clone()
        }
    }
}

impl fmt::Display for BinFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl PartialOrd for BinFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational().cmp(&other.to_rational()))
    }
}

/// Rounds `x` to the nearest `t`-bit binary float, ties to even mantissa.
pub fn round_nearest(x: &Rational, ctx: FloatContext) -> BinFloat {
    let t = ctx.precision;
    if x.is_zero() {
        return BinFloat::zero(t);
    }
    let negative = x.is_negative();
    let p = x.numer().abs();
    let q = x.denom().clone();
    // p/q lies in (2^(pb-qb-1), 2^(pb-qb+1)), so this exponent puts the
    // scaled quotient in (2^(t-1), 2^(t+1)).
    let mut e = p.bits() as i64 - q.bits() as i64 - t as i64;
    let top = BigInt::one() << t as usize;
    let (mut m, mut rem, mut den);
    loop {
        let (num, d) = if e <= 0 {
            (&p << ((-e) as usize), q.clone())
        } else {
            (p.clone(), &q << (e as usize))
        };
        let (quo, r) = num.div_rem(&d);
        m = quo;
        rem = r;
        den = d;
        if m >= top {
            e += 1;
        } else if m < (&top >> 1usize) {
            e -= 1;
        } else {
            break;
        }
    }
    let twice = &rem << 1usize;
    let round_up = match twice.cmp(&den) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => m.is_odd(),
    };
    if round_up {
        m += 1u32;
        if m == top {
            m = &top >> 1usize;
            e += 1;
        }
    }
    let mantissa = if negative { -m } else { m };
    debug_assert_ne!(mantissa.sign(), Sign::NoSign);
    BinFloat {
        mantissa,
        exponent: e,
        precision: t,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Correctly rounded `x op y` at the precision of `ctx`.
pub fn fp_op(ctx: FloatContext, op: FpOp, x: &BinFloat, y: &BinFloat) -> Result<BinFloat> {
    let (a, b) = (x.to_rational(), y.to_rational());
    let exact = match op {
        FpOp::Add => a + b,
        FpOp::Sub => a - b,
        FpOp::Mul => a * b,
        FpOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    };
    Ok(round_nearest(&exact, ctx))
}
