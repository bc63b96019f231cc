use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactnum::{abs_lower, abs_upper, pow2, rpow, ComplexRational, Rational};

const GUARD: u32 = 64;
const MAX_GRAEFFE_STEPS: usize = 8;
const BISECTION_STEPS: usize = 48;

/// Certified lower bound on the smallest root modulus of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootBound {
    /// The polynomial is a nonzero constant.
    Infinite,
    Finite(Rational),
}

impl RootBound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            RootBound::Infinite => None,
            RootBound::Finite(l) => Some(l),
        }
    }
}

/// Upper bound on the unique positive root of `a x^d - Σ_{k<d} b_k x^k`
/// (the Cauchy bound on the root moduli of a polynomial with leading
/// modulus `a` and lower moduli `b_k`).
fn cauchy_upper(a: &Rational, b: &[Rational]) -> Rational {
    let d = b.len();
    let f = |x: &Rational| -> bool {
        // true iff a x^d > Σ b_k x^k, i.e. x exceeds the positive root
        let mut rhs = Rational::zero();
        let mut p = Rational::one();
        for bk in b {
            rhs += bk * &p;
            p *= x;
        }
        a * &p > rhs
    };
    if b.iter().all(Zero::is_zero) {
        return Rational::zero();
    }
    let bound = Rational::one() + b.iter().map(|bk| bk / a).max().expect("d >= 1");
    let mut e = 0i64;
    while pow2(e) < bound {
        e += 1;
    }
    let mut hi = pow2(e);
    let mut lo = Rational::zero();
    debug_assert!(f(&hi) || d == 0);
    for _ in 0..BISECTION_STEPS {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if f(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Largest dyadic `x` found by bisection with `x^k <= v`.
fn root_lower(v: &Rational, k: u64) -> Rational {
    if k == 1 {
        return v.clone();
    }
    let mut lo = Rational::zero();
    let mut hi = if v > &Rational::one() {
        v.clone()
    } else {
        Rational::one()
    };
    for _ in 0..BISECTION_STEPS {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if &rpow(&mid, k) <= v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Lower bound on `min |ξ|` over roots of `q` from the Cauchy bound of the
/// reversed polynomial `rev` (whose roots are the `1/ξ`).
fn level_bound(rev: &[ComplexRational]) -> Rational {
    let d = rev.len() - 1;
    let a = abs_lower(&rev[d], GUARD);
    let b: Vec<Rational> = rev[..d].iter().map(|c| abs_upper(c, GUARD)).collect();
    let r = cauchy_upper(&a, &b);
    if r.is_zero() {
        // rev = a z^d: every root of q sits at infinity
        return Rational::zero();
    }
    r.recip()
}

/// One Graeffe step: the roots of the result are the squares of those of `q`.
fn graeffe(q: &[ComplexRational]) -> Vec<ComplexRational> {
    let neg: Vec<ComplexRational> = q
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
        .collect();
    let prod = Poly::new(q.to_vec()).mul(&Poly::new(neg));
    let d = q.len() - 1;
    (0..=d).map(|j| prod.coeff(2 * j)).collect()
}

/// Rational `L` with `L <= |ξ|` for every root `ξ` of `p`.
///
/// Applies the Cauchy bound to the reversed polynomial, sharpened by up to
/// eight Graeffe root-squaring steps (taking the best level). Fails when
/// the bound does not exceed `need`.
pub fn root_modulus_lower_bound(p: &Poly, need: &Rational) -> Result<RootBound> {
    let d = match p.degree() {
        None => return Err(Error::Precondition("zero polynomial".into())),
        Some(0) => return Ok(RootBound::Infinite),
        Some(d) => d,
    };
    if p.coeff(0).is_zero() {
        return Err(Error::Precondition("p(0) = 0".into()));
    }
    let mut rev: Vec<ComplexRational> = (0..=d).map(|k| p.coeff(d - k)).collect();
    let mut best = level_bound(&rev);
    for s in 1..=MAX_GRAEFFE_STEPS {
        rev = graeffe(&rev);
        let lb = root_lower(&level_bound(&rev), 1u64 << s);
        if lb > best {
            best = lb;
        }
    }
    if best.is_negative() || &best <= need {
        return Err(Error::Certification(format!(
            "root-modulus lower bound {} does not exceed |ζ| bound {}",
            crate::exactnum::to_decimal(&best, 6),
            crate::exactnum::to_decimal(need, 6)
        )));
    }
    Ok(RootBound::Finite(best))
}
