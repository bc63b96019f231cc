//! Midpoint-radius complex balls over software floats.
//!
//! The midpoint is a pair of [`BinFloat`]s at the context precision; the
//! radius is an exact rational. Every operation computes the exact midpoint
//! result, rounds it, and adds the exact rounding slack (bounded above by
//! the modulus of the componentwise rounding error) to the radius.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational;
use crate::exactnum::{
    abs_lower, abs_upper, complex, norm_sqr, BinFloat, ComplexRational, FloatContext, Rational,
};

/// Guard bits for rational bounds on complex moduli.
pub const BALL_GUARD_BITS: u32 = 64;

/// Complex number with [`BinFloat`] parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFloat {
    pub re: BinFloat,
    pub im: BinFloat,
}

impl ComplexFloat {
    pub fn to_complex(&self) -> ComplexRational {
        complex(self.re.to_rational(), self.im.to_rational())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Rounds each part; returns the float and an upper bound on `|fl(z) - z|`.
    pub fn round(z: &ComplexRational, ctx: FloatContext) -> (Self, Rational) {
        let re = ctx.round(&z.re);
        let im = ctx.round(&z.im);
        let err = complex(re.to_rational() - &z.re, im.to_rational() - &z.im);
        (ComplexFloat { re, im }, abs_upper(&err, BALL_GUARD_BITS))
    }
}

/// The closed disk `{z : |z - mid| <= rad}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    mid: ComplexFloat,
    #[serde(with = "rational")]
    rad: Rational,
}

impl Ball {
    /// Ball from a float midpoint and a radius.
    pub fn new(mid: ComplexFloat, rad: Rational) -> Result<Self> {
        if rad.is_negative() {
            return Err(Error::Precondition("negative radius".into()));
        }
        Ok(Ball { mid, rad })
    }

    pub fn zero(ctx: FloatContext) -> Self {
        let z = BinFloat::zero(ctx.precision());
        Ball {
            mid: ComplexFloat {
                re: z.clone(),
                im: z,
            },
            rad: Rational::zero(),
        }
    }

    /// Smallest ball with a `t`-bit midpoint around an exact value.
    pub fn from_exact(z: &ComplexRational, ctx: FloatContext) -> Self {
        let (mid, rad) = ComplexFloat::round(z, ctx);
        Ball { mid, rad }
    }

    /// Ball centred on the rounding of `z`, enclosing every point within `r` of `z`.
    pub fn around(z: &ComplexRational, r: &Rational, ctx: FloatContext) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Precondition("negative radius".into()));
        }
        let mut b = Self::from_exact(z, ctx);
        b.rad += r;
        Ok(b)
    }

    pub fn from_rational(q: &Rational, ctx: FloatContext) -> Self {
        Self::from_exact(&complex(q.clone(), Rational::zero()), ctx)
    }

    pub fn mid(&self) -> &ComplexFloat {
        &self.mid
    }

    pub fn mid_exact(&self) -> ComplexRational {
        self.mid.to_complex()
    }

    pub fn rad(&self) -> &Rational {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.mid.re.precision()
    }

    fn ctx(&self) -> FloatContext {
        FloatContext::new(self.precision()).expect("positive precision")
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_upper(&self) -> Rational {
        abs_upper(&self.mid_exact(), BALL_GUARD_BITS)
    }

    /// Lower bound on `|mid|`.
    pub fn mid_abs_lower(&self) -> Rational {
        abs_lower(&self.mid_exact(), BALL_GUARD_BITS)
    }

    /// Upper bound on `|z|` over the ball.
    pub fn abs_upper(&self) -> Rational {
        self.mid_abs_upper() + &self.rad
    }

    /// Widens the radius by `e >= 0`.
    pub fn add_error(&self, e: &Rational) -> Self {
        debug_assert!(!e.is_negative());
        Ball {
            mid: self.mid.clone(),
            rad: &self.rad + e,
        }
    }

    fn rounded(exact: &ComplexRational, ctx: FloatContext, rad: Rational) -> Self {
        let (mid, slack) = ComplexFloat::round(exact, ctx);
        Ball {
            mid,
            rad: rad + slack,
        }
    }

    pub fn add(&self, y: &Ball) -> Ball {
        let exact = self.mid_exact() + y.mid_exact();
        Self::rounded(&exact, self.ctx(), &self.rad + &y.rad)
    }

    pub fn sub(&self, y: &Ball) -> Ball {
        let exact = self.mid_exact() - y.mid_exact();
        Self::rounded(&exact, self.ctx(), &self.rad + &y.rad)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: ComplexFloat {
                re: self.mid.re.neg(),
                im: self.mid.im.neg(),
            },
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, y: &Ball) -> Ball {
        let exact = self.mid_exact() * y.mid_exact();
        let rad =
            self.mid_abs_upper() * &y.rad + y.mid_abs_upper() * &self.rad + &self.rad * &y.rad;
        Self::rounded(&exact, self.ctx(), rad)
    }

    /// Quotient; the divisor ball must exclude zero.
    pub fn div(&self, y: &Ball) -> Result<Ball> {
        let ym_low = y.mid_abs_lower();
        if ym_low <= y.rad || ym_low.is_zero() {
            return Err(Error::BallContainsZero);
        }
        let exact = self.mid_exact() / y.mid_exact();
        let gap = &ym_low - &y.rad;
        let rad = &self.rad / &gap + self.mid_abs_upper() * &y.rad / (&ym_low * &gap);
        Ok(Self::rounded(&exact, self.ctx(), rad))
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, q: &Rational) -> Ball {
        let m = self.mid_exact();
        let exact = complex(&m.re * q, &m.im * q);
        Self::rounded(&exact, self.ctx(), &self.rad * q.abs())
    }

    /// Multiplication by an exact complex rational.
    pub fn scale_complex(&self, q: &ComplexRational) -> Ball {
        let exact = self.mid_exact() * q;
        Self::rounded(
            &exact,
            self.ctx(),
            &self.rad * abs_upper(q, BALL_GUARD_BITS),
        )
    }

    /// Exact membership test via squared moduli.
    pub fn contains(&self, z: &ComplexRational) -> bool {
        let d = z - self.mid_exact();
        norm_sqr(&d) <= &self.rad * &self.rad
    }

    /// `true` if the ball may contain zero.
    pub fn contains_zero(&self) -> bool {
        self.contains(&complex(Rational::zero(), Rational::zero()))
    }

    /// `true` if every point of `other` lies in `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        if other.rad > self.rad {
            return false;
        }
        let d = other.mid_exact() - self.mid_exact();
        let slack = &self.rad - &other.rad;
        norm_sqr(&d) <= &slack * &slack
    }

    /// Splits the ball into its midpoint and the discarded radius.
    pub fn squash(&self) -> (ComplexFloat, Rational) {
        (self.mid.clone(), self.rad.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, pow2, rat, real};

    fn ctx(t: u32) -> FloatContext {
        FloatContext::new(t).unwrap()
    }

    fn ball(m: Rational, r: Rational) -> Ball {
        Ball::around(&real(m), &r, ctx(53)).unwrap()
    }

    #[test]
    fn product_radius() {
        let x = ball(int(1), rat(1, 10));
        let y = ball(int(2), rat(1, 10));
        let p = x.mul(&y);
        assert_eq!(p.mid_exact(), real(int(2)));
        assert!(p.rad() >= &rat(31, 100));
        assert!(p.contains(&real(rat(9, 10) * rat(19, 10))));
        assert!(p.contains(&real(rat(11, 10) * rat(21, 10))));
    }

    #[test]
    fn x_minus_x_contains_zero() {
        let x = ball(rat(1, 3), pow2(-30));
        assert!(x.add(&x.neg()).contains_zero());
    }

    #[test]
    fn division_needs_zero_free_divisor() {
        let x = ball(int(1), int(0));
        assert_eq!(x.div(&ball(int(1), int(2))), Err(Error::BallContainsZero));
        assert_eq!(x.div(&Ball::zero(ctx(53))), Err(Error::BallContainsZero));
        let q = x.div(&ball(int(4), int(0))).unwrap();
        assert_eq!(q.rad(), &int(0));
        assert_eq!(q.mid_exact(), real(rat(1, 4)));
    }

    #[test]
    fn exact_ops_keep_zero_radius() {
        let x = ball(rat(3, 8), int(0));
        let y = ball(rat(5, 8), int(0));
        assert!(x.add(&y).rad().is_zero());
        assert!(x.scale(&pow2(-7)).rad().is_zero());
        assert!(x
            .mul(&Ball::from_rational(&pow2(12), ctx(53)))
            .rad()
            .is_zero());
    }

    #[test]
    fn squash_keeps_midpoint() {
        let x = ball(rat(1, 3), pow2(-20));
        let (m, r) = x.squash();
        assert!(x.contains(&m.to_complex()));
        let back = Ball::new(m, r).unwrap();
        assert!(back.contains_ball(&x) && x.contains_ball(&back));
        let (_, r0) = ball(int(1), int(0)).squash();
        assert!(r0.is_zero());
    }

    #[test]
    fn serialization_shape() {
        let x = Ball::from_exact(&real(rat(1, 2)), ctx(3));
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v["rad"], "0");
        assert_eq!(v["mid"]["re"]["mantissa"], "4");
        let back: Ball = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
    }
}
