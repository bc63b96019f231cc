//! Truncated power series and the majorant-series calculus.
//!
//! A [`TruncSeries`] of order `N` stores the coefficients of `z^0..z^{N-1}`;
//! coefficients at negative indices read as zero. [`NonnegSeries`] wraps a
//! rational series whose coefficients are all `>= 0` and is the carrier for
//! majorants: `f ≪ f̂` means `|f_n| <= f̂_n` for every stored index.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{
    abs_upper, complex, int, norm_sqr, parse_rational, rpow, ComplexRational, FloatContext,
    Rational,
};

/// Default guard bits used when a complex modulus must be bounded above.
pub const DEFAULT_GUARD_BITS: u32 = 64;

/// Coefficient domain of a [`TruncSeries`].
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: Rational) -> Self;
    fn mul_rational(&self, q: &Rational) -> Self;
    /// Exact `|x|^2`.
    fn modulus_sqr(&self) -> Rational;
    /// Rational upper bound on `|x|`, exact for real values.
    fn modulus_upper(&self, guard_bits: u32) -> Rational;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn mul_rational(&self, q: &Rational) -> Self {
        self * q
    }
    fn modulus_sqr(&self) -> Rational {
        self * self
    }
    fn modulus_upper(&self, _guard_bits: u32) -> Rational {
        self.abs()
    }
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

impl Scalar for ComplexRational {
    fn from_rational(q: Rational) -> Self {
        complex(q, Rational::zero())
    }
    fn mul_rational(&self, q: &Rational) -> Self {
        complex(&self.re * q, &self.im * q)
    }
    fn modulus_sqr(&self) -> Rational {
        norm_sqr(self)
    }
    fn modulus_upper(&self, guard_bits: u32) -> Rational {
        abs_upper(self, guard_bits)
    }
    fn to_json(&self) -> Value {
        json!({"re": rational_to_string(&self.re), "im": rational_to_string(&self.im)})
    }
    fn from_json(v: &Value) -> Result<Self> {
        let part = |k: &str| -> Result<Rational> {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(v.to_string()))
                .and_then(parse_rational)
        };
        Ok(complex(part("re")?, part("im")?))
    }
}

/// Power series truncated at order `N` (coefficients of `z^0..z^{N-1}`).
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<D> {
    coeffs: Vec<D>,
}

impl<D: Scalar> TruncSeries<D> {
    pub fn new(coeffs: Vec<D>) -> Self {
        TruncSeries { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![D::zero(); order],
        }
    }

    /// Prefix of `1/(1-z)`.
    pub fn geometric(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![D::one(); order],
        }
    }

    /// `c·z^k` truncated at `order`.
    pub fn monomial(c: D, k: usize, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if k < order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Polynomial with the given ascending coefficients, padded or truncated.
    pub fn from_poly(poly: &[D], order: usize) -> Self {
        let mut s = Self::zeros(order);
        for (c, p) in s.coeffs.iter_mut().zip(poly) {
            *c = p.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[D] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<D> {
        self.coeffs
    }

    /// Coefficient at any integer index: zero outside `0..N`.
    pub fn coeff(&self, n: i64) -> D {
        if n < 0 {
            return D::zero();
        }
        self.coeffs.get(n as usize).cloned().unwrap_or_else(D::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_poly(&self.coeffs, order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..n)
                .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..n)
                .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, gamma: &D) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * gamma.clone())
                .collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.mul_rational(q)).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![D::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncSeries { coeffs: out }
    }

    /// `f'`, of order `N - 1`.
    pub fn derive(&self) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.mul_rational(&int(n as i64)))
                .collect(),
        }
    }

    /// `∫_0^z f`, of order `N + 1`.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(D::zero());
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.mul_rational(&Rational::new(1.into(), (n as i64 + 1).into())));
        }
        TruncSeries { coeffs }
    }

    /// `f_{N0:}(z) = Σ_{n >= N0} f_n z^n`.
    pub fn tail_from(&self, n0: usize) -> Self {
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n < n0 { D::zero() } else { c.clone() })
                .collect(),
        }
    }

    /// Coefficientwise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..n)
                .map(|i| self.coeffs[i].clone() * other.coeffs[i].clone())
                .collect(),
        }
    }

    /// `z^k f(z)`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![D::zero(); n];
        for i in k..n {
            out[i] = self.coeffs[i - k].clone();
        }
        TruncSeries { coeffs: out }
    }

    /// `f(c z)`.
    pub fn scale_argument(&self, c: &D) -> Self {
        let mut p = D::one();
        let mut out = Vec::with_capacity(self.order());
        for f in &self.coeffs {
            out.push(f.clone() * p.clone());
            p = p * c.clone();
        }
        TruncSeries { coeffs: out }
    }

    /// `Σ_{n<N} f_n x^n`.
    pub fn partial_sum(&self, x: &D) -> D {
        let mut acc = D::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coefficients": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(v.to_string());
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let cs = v
            .get("coefficients")
            .and_then(Value::as_array)
            .ok_or_else(bad)?;
        if cs.len() != order {
            return Err(bad());
        }
        Ok(TruncSeries {
            coeffs: cs.iter().map(D::from_json).collect::<Result<_>>()?,
        })
    }
}

impl TruncSeries<Rational> {
    /// `1/f` truncated at the same order.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let f0 = self.coeff(0);
        if f0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv0 = f0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = Rational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out.push(-s * &inv0);
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `exp(f)` for `f(0) = 0`, via `n g_n = Σ_k k f_k g_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm("exponent"));
        }
        let n = self.order();
        let mut g: Vec<Rational> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                g.push(Rational::one());
                continue;
            }
            let mut s = Rational::zero();
            for i in 1..=k {
                s += int(i as i64) * &self.coeffs[i] * &g[k - i];
            }
            g.push(s / int(k as i64));
        }
        Ok(TruncSeries { coeffs: g })
    }
}

impl<D: Scalar> Serialize for TruncSeries<D> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, D: Scalar> Deserialize<'de> for TruncSeries<D> {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Rational series with all coefficients `>= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegSeries(TruncSeries<Rational>);

impl NonnegSeries {
    /// Rejects any negative coefficient.
    pub fn new(s: TruncSeries<Rational>) -> Result<Self> {
        if let Some(index) = s.coeffs().iter().position(|c| c.is_negative()) {
            return Err(Error::NegativeCoefficient { index });
        }
        Ok(NonnegSeries(s))
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        Self::new(TruncSeries::new(coeffs))
    }

    pub fn zeros(order: usize) -> Self {
        NonnegSeries(TruncSeries::zeros(order))
    }

    pub fn geometric(order: usize) -> Self {
        NonnegSeries(TruncSeries::geometric(order))
    }

    pub fn series(&self) -> &TruncSeries<Rational> {
        &self.0
    }

    pub fn into_series(self) -> TruncSeries<Rational> {
        self.0
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn coeff(&self, n: i64) -> Rational {
        self.0.coeff(n)
    }

    pub fn coeffs(&self) -> &[Rational] {
        self.0.coeffs()
    }

    pub fn add(&self, o: &Self) -> Self {
        NonnegSeries(self.0.add(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        NonnegSeries(self.0.mul(&o.0))
    }

    pub fn hadamard(&self, o: &Self) -> Self {
        NonnegSeries(self.0.hadamard(&o.0))
    }

    pub fn derive(&self) -> Self {
        NonnegSeries(self.0.derive())
    }

    pub fn integrate(&self) -> Self {
        NonnegSeries(self.0.integrate())
    }

    pub fn tail_from(&self, n0: usize) -> Self {
        NonnegSeries(self.0.tail_from(n0))
    }

    pub fn truncate(&self, order: usize) -> Self {
        NonnegSeries(self.0.truncate(order))
    }

    pub fn shift(&self, k: usize) -> Self {
        NonnegSeries(self.0.shift(k))
    }

    /// Scaling by `|gamma|`.
    pub fn scale_abs(&self, gamma: &Rational) -> Self {
        NonnegSeries(self.0.scale_rational(&gamma.abs()))
    }

    /// `f̂ - ĝ`, failing if the difference has a negative coefficient.
    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        Self::new(self.0.sub(&o.0))
    }

    /// `true` iff every coefficient of `self` is `<=` the matching one of `o`.
    pub fn le(&self, o: &Self) -> bool {
        self.order() <= o.order() && self.coeffs().iter().zip(o.coeffs()).all(|(a, b)| a <= b)
    }
}

impl Serialize for NonnegSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NonnegSeries {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        let s = TruncSeries::<Rational>::deserialize(d)?;
        NonnegSeries::new(s).map_err(serde::de::Error::custom)
    }
}

/// `Σ |f_n| z^n`, using rational upper bounds for complex moduli.
pub fn minmaj<D: Scalar>(f: &TruncSeries<D>, guard_bits: u32) -> NonnegSeries {
    NonnegSeries(TruncSeries::new(
        f.coeffs()
            .iter()
            .map(|c| c.modulus_upper(guard_bits))
            .collect(),
    ))
}

/// `f ≪ f̂`: `|f_n| <= f̂_n` for all `n < N`, compared through squares.
pub fn majorizes<D: Scalar>(fhat: &NonnegSeries, f: &TruncSeries<D>) -> bool {
    fhat.order() == f.order()
        && fhat
            .coeffs()
            .iter()
            .zip(f.coeffs())
            .all(|(h, c)| c.modulus_sqr() <= h * h)
}

/// Like [`majorizes`], but compares only the first `min` orders.
pub fn majorizes_prefix<D: Scalar>(fhat: &NonnegSeries, f: &TruncSeries<D>) -> bool {
    fhat.coeffs()
        .iter()
        .zip(f.coeffs())
        .all(|(h, c)| c.modulus_sqr() <= h * h)
}

/// `|f_n| <= f̂_n` for every stored index of `f`, reading missing `f̂_n` as 0.
fn dominates_all<D: Scalar>(fhat: &NonnegSeries, f: &TruncSeries<D>) -> bool {
    f.coeffs().iter().enumerate().all(|(n, c)| {
        let h = fhat.coeff(n as i64);
        c.modulus_sqr() <= &h * &h
    })
}

/// `θ̂_k = (1+u)^k - 1`, zero for `k < 0`.
pub fn theta_hat(u: &Rational, k: i64) -> Rational {
    if k <= 0 {
        return Rational::zero();
    }
    rpow(&(Rational::one() + u), k as u64) - Rational::one()
}

/// `θ̂^{(p,q)}(z) = Σ_n θ̂_{pn+q} z^n` with `u` taken from `ctx`.
pub fn theta_hat_series(ctx: FloatContext, p: u64, q: i64, order: usize) -> NonnegSeries {
    theta_hat_series_u(&ctx.unit_roundoff(), p, q, order)
}

pub fn theta_hat_series_u(u: &Rational, p: u64, q: i64, order: usize) -> NonnegSeries {
    assert!(!u.is_negative(), "unit roundoff must be nonnegative");
    let coeffs = (0..order)
        .map(|n| theta_hat(u, p as i64 * n as i64 + q))
        .collect();
    NonnegSeries(TruncSeries::new(coeffs))
}

/// `θ̂^{(p,q)} ⊙ f̂` through `(1+u)^q f̂((1+u)^p z) - f̂(z)`.
pub fn hadamard_theta_closed(
    fhat: &NonnegSeries,
    ctx: FloatContext,
    p: u64,
    q: u64,
) -> NonnegSeries {
    hadamard_theta_closed_u(fhat, &ctx.unit_roundoff(), p, q)
}

pub fn hadamard_theta_closed_u(fhat: &NonnegSeries, u: &Rational, p: u64, q: u64) -> NonnegSeries {
    assert!(!u.is_negative(), "unit roundoff must be nonnegative");
    let one_u = Rational::one() + u;
    let substituted = fhat.series().scale_argument(&rpow(&one_u, p));
    let scaled = substituted.scale_rational(&rpow(&one_u, q));
    NonnegSeries(scaled.sub(fhat.series()))
}

/// Expansion of `b̂/(1 - â)` to order `N`, through
/// `ŷ_n = Σ_{i=1}^n â_i ŷ_{n-i} + b̂_n`.
pub fn solve_linear_majorant(
    ahat: &NonnegSeries,
    bhat: &NonnegSeries,
    order: usize,
) -> Result<NonnegSeries> {
    if !ahat.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm("â"));
    }
    let mut y: Vec<Rational> = Vec::with_capacity(order);
    for n in 0..order {
        let mut acc = bhat.coeff(n as i64);
        for i in 1..=n {
            let a = ahat.coeff(i as i64);
            if !a.is_zero() {
                acc += a * &y[n - i];
            }
        }
        y.push(acc);
    }
    Ok(NonnegSeries(TruncSeries::new(y)))
}

/// `x^{\underline k} = x(x-1)...(x-k+1)`.
pub fn falling(x: i64, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc *= int(x - i);
    }
    acc
}

/// Coefficients of the solution of `y^{(r)} = Σ_k a_k y^{(k)} + b` with the
/// given initial coefficients `y_0..y_{r-1}`, up to order `N`.
pub fn solve_deq<D: Scalar>(
    a: &[TruncSeries<D>],
    b: &TruncSeries<D>,
    y_init: &[D],
    order: usize,
) -> Result<TruncSeries<D>> {
    let r = a.len();
    if r == 0 || y_init.len() != r {
        return Err(Error::Precondition(
            "need r >= 1 coefficients and r initial values".into(),
        ));
    }
    let mut y: Vec<D> = y_init.iter().take(order).cloned().collect();
    for m in r..order {
        let n = (m - r) as i64;
        let mut acc = b.coeff(n);
        for (k, ak) in a.iter().enumerate() {
            for j in 0..=n + k as i64 {
                let idx = n - j + k as i64;
                if idx < 0 {
                    continue;
                }
                let akj = ak.coeff(j);
                if akj.is_zero() {
                    continue;
                }
                acc = acc + (akj * y[idx as usize].clone()).mul_rational(&falling(idx, k));
            }
        }
        y.push(acc.mul_rational(&falling(m as i64, r).recip()));
    }
    Ok(TruncSeries::new(y))
}

/// Outcome of a majorant-transfer check for a linear differential equation.
#[derive(Clone, Debug, PartialEq)]
pub struct MajTransfer<D> {
    pub y: TruncSeries<D>,
    pub yhat: NonnegSeries,
    pub holds: bool,
}

/// Solves `y^{(r)} = Σ a_k y^{(k)} + b` and its majorant equation with
/// `â_k`, `b̂`, then reports whether `y ≪ ŷ` up to order `N`.
///
/// Inputs that are not themselves in the `≪` relation are reported as
/// [`Error::HypothesisViolation`], distinct from a failing conclusion.
pub fn check_maj_transfer_ode<D: Scalar>(
    a: &[TruncSeries<D>],
    ahat: &[NonnegSeries],
    b: &TruncSeries<D>,
    bhat: &NonnegSeries,
    y_init: &[D],
    yhat_init: &[Rational],
    order: usize,
) -> Result<MajTransfer<D>> {
    if a.len() != ahat.len() || y_init.len() != a.len() || yhat_init.len() != a.len() {
        return Err(Error::Precondition("mismatched equation orders".into()));
    }
    for (k, (ak, hk)) in a.iter().zip(ahat).enumerate() {
        if !dominates_all(hk, ak) {
            return Err(Error::HypothesisViolation(format!(
                "a_{k} is not majorized by â_{k}"
            )));
        }
    }
    if !dominates_all(bhat, b) {
        return Err(Error::HypothesisViolation("b is not majorized by b̂".into()));
    }
    for (n, (y, h)) in y_init.iter().zip(yhat_init).enumerate() {
        if h.is_negative() || y.modulus_sqr() > h * h {
            return Err(Error::HypothesisViolation(format!("|y_{n}| exceeds ŷ_{n}")));
        }
    }
    let y = solve_deq(a, b, y_init, order)?;
    let ahat_s: Vec<TruncSeries<Rational>> = ahat.iter().map(|s| s.series().clone()).collect();
    let yhat = NonnegSeries::new(solve_deq(&ahat_s, bhat.series(), yhat_init, order)?)?;
    let holds = majorizes(&yhat, &y);
    Ok(MajTransfer { y, yhat, holds })
}

/// Unique solution of `ŷ' = â_1 ŷ' + â_0 ŷ + b̂` with `ŷ(0) = y0`, via
/// `(n+1)ŷ_{n+1} = Σ_{j>=1} â_{1,j}(n-j+1)ŷ_{n-j+1} + Σ_j â_{0,j}ŷ_{n-j} + b̂_n`.
pub fn solve_first_order_maj_ineq(
    ahat1: &NonnegSeries,
    ahat0: &NonnegSeries,
    bhat: &NonnegSeries,
    y0: &Rational,
    order: usize,
) -> Result<NonnegSeries> {
    if !ahat1.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm("â₁"));
    }
    if y0.is_negative() {
        return Err(Error::Precondition("ŷ(0) must be nonnegative".into()));
    }
    if order == 0 {
        return Ok(NonnegSeries::zeros(0));
    }
    let mut y = vec![y0.clone()];
    for n in 0..order - 1 {
        let mut acc = bhat.coeff(n as i64);
        for j in 1..=n {
            let a = ahat1.coeff(j as i64);
            if !a.is_zero() {
                acc += a * int((n - j + 1) as i64) * &y[n - j + 1];
            }
        }
        for j in 0..=n {
            let a = ahat0.coeff(j as i64);
            if !a.is_zero() {
                acc += a * &y[n - j];
            }
        }
        y.push(acc / int(n as i64 + 1));
    }
    NonnegSeries::from_coeffs(y)
}

/// Checks `∫(f̂ĝ) ≪ f̂·∫ĝ` and `∫f̂ ≪ z·f̂` up to order `N`.
pub fn ipp_bound_check(fhat: &NonnegSeries, ghat: &NonnegSeries, order: usize) -> bool {
    let f = fhat.truncate(order);
    let g = ghat.truncate(order);
    let lhs = f.mul(&g).integrate().truncate(order);
    let rhs = f.mul(&g.integrate().truncate(order));
    let int_f = f.integrate().truncate(order);
    let zf = f.shift(1);
    majorizes(&rhs, lhs.series()) && majorizes(&zf, int_f.series())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{pow2, rat};

    fn q(v: &[i64]) -> TruncSeries<Rational> {
        TruncSeries::new(v.iter().map(|&x| int(x)).collect())
    }

    fn nn(v: &[Rational]) -> NonnegSeries {
        NonnegSeries::from_coeffs(v.to_vec()).unwrap()
    }

    #[test]
    fn basic_ops() {
        let g = TruncSeries::<Rational>::geometric(4);
        assert_eq!(g.mul(&g), q(&[1, 2, 3, 4]));
        assert_eq!(
            q(&[1, 1, 1]).integrate().coeffs(),
            &[int(0), int(1), rat(1, 2), rat(1, 3)]
        );
        assert_eq!(q(&[1, 1, 1, 1]).derive(), q(&[1, 2, 3]));
        assert_eq!(q(&[1, 2, 3]).hadamard(&q(&[0, 1, 0])), q(&[0, 2, 0]));
        assert_eq!(q(&[1, 2, 3]).tail_from(2), q(&[0, 0, 3]));
        assert_eq!(q(&[5, 7]).coeff(-1), int(0));
    }

    #[test]
    fn minmaj_and_majorizes() {
        assert_eq!(minmaj(&q(&[1, -2, 3]), 8).series(), &q(&[1, 2, 3]));
        let z = TruncSeries::new(vec![complex(int(0), int(1)), complex(int(1), int(1))]);
        let m = minmaj(&z, 20);
        assert_eq!(m.coeff(0), int(1));
        let s = m.coeff(1);
        assert!(&s * &s >= int(2));
        assert!(s <= rat(3, 2));
        assert!(majorizes(&m, &z));
        assert!(!majorizes(&nn(&[int(1), int(1)]), &q(&[1, -2])));
    }

    #[test]
    fn negative_rejected() {
        assert_eq!(
            NonnegSeries::from_coeffs(vec![int(1), int(-1)]),
            Err(Error::NegativeCoefficient { index: 1 })
        );
    }

    #[test]
    fn theta_hat_values() {
        let u = pow2(-10);
        let th = theta_hat_series_u(&u, 1, 0, 4);
        assert_eq!(th.coeff(0), int(0));
        assert_eq!(th.coeff(2), int(2) * &u + &u * &u);
        let shifted = theta_hat_series_u(&u, 1, -2, 4);
        assert_eq!(shifted.coeff(0), int(0));
        assert_eq!(shifted.coeff(1), int(0));
        assert_eq!(shifted.coeff(3), th.coeff(1));
        let g = NonnegSeries::geometric(6);
        assert_eq!(
            hadamard_theta_closed_u(&g, &u, 1, 0),
            theta_hat_series_u(&u, 1, 0, 6)
        );
        assert_eq!(
            hadamard_theta_closed_u(&g, &int(0), 2, 3),
            NonnegSeries::zeros(6)
        );
    }

    #[test]
    fn linear_majorant_examples() {
        let z = nn(&[int(0), int(1), int(0), int(0), int(0)]);
        let one = nn(&[int(1), int(0), int(0), int(0), int(0)]);
        assert_eq!(
            solve_linear_majorant(&z, &one, 5).unwrap(),
            NonnegSeries::geometric(5)
        );
        let b = nn(&[int(3), int(1), int(4), int(1), int(5)]);
        assert_eq!(
            solve_linear_majorant(&NonnegSeries::zeros(5), &b, 5).unwrap(),
            b
        );
        assert!(solve_linear_majorant(&one, &b, 5).is_err());
    }

    #[test]
    fn exp_majorizes_exp_minus() {
        let n = 12;
        let a = vec![TruncSeries::from_poly(&[int(-1)], n)];
        let ah = vec![nn(&[int(1)]).truncate(n)];
        let r = check_maj_transfer_ode(
            &a,
            &ah,
            &TruncSeries::zeros(n),
            &NonnegSeries::zeros(n),
            &[int(1)],
            &[int(1)],
            n,
        )
        .unwrap();
        assert!(r.holds);
        let mut fact = int(1);
        for k in 0..n {
            if k > 0 {
                fact *= int(k as i64);
            }
            assert_eq!(r.yhat.coeff(k as i64), fact.recip());
            assert_eq!(r.y.coeff(k as i64).abs(), fact.recip());
        }
    }

    #[test]
    fn transfer_hypothesis_violation() {
        let n = 5;
        let a = vec![TruncSeries::from_poly(&[int(2)], n)];
        let ah = vec![nn(&[int(1)]).truncate(n)];
        let r = check_maj_transfer_ode(
            &a,
            &ah,
            &TruncSeries::zeros(n),
            &NonnegSeries::zeros(n),
            &[int(1)],
            &[int(1)],
            n,
        );
        assert!(matches!(r, Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn first_order_examples() {
        let n = 6;
        let zero = NonnegSeries::zeros(n);
        let one = nn(&[int(1)]).truncate(n);
        let e = solve_first_order_maj_ineq(&zero, &one, &zero, &int(1), n).unwrap();
        let expected = TruncSeries::<Rational>::from_poly(&[int(0), int(1)], n)
            .exp()
            .unwrap();
        assert_eq!(e.series(), &expected);
        let lin = solve_first_order_maj_ineq(&zero, &zero, &one, &int(0), n).unwrap();
        assert_eq!(lin.series(), &q(&[0, 1, 0, 0, 0, 0]));
    }

    #[test]
    fn ipp_geometric() {
        let g = NonnegSeries::geometric(4);
        let lhs = g.mul(&g).integrate().truncate(4);
        let rhs = g.mul(&g.integrate().truncate(4));
        assert_eq!(lhs.coeffs(), &[int(0), int(1), int(1), int(1)]);
        assert_eq!(rhs.coeffs(), &[int(0), int(1), rat(3, 2), rat(11, 6)]);
        assert!(ipp_bound_check(&g, &g, 4));
        let c = nn(&[int(1)]).truncate(5);
        assert!(ipp_bound_check(&c, &c, 5));
    }

    #[test]
    fn inverse_and_exp() {
        let p = q(&[1, -1, 0, 0, 0]);
        assert_eq!(p.inverse().unwrap(), TruncSeries::geometric(5));
        let e = q(&[0, 1, 0, 0]).exp().unwrap();
        assert_eq!(e.coeffs(), &[int(1), int(1), rat(1, 2), rat(1, 6)]);
    }

    #[test]
    fn json_round_trip() {
        let s = TruncSeries::new(vec![rat(1, 2), int(-3)]);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v, json!({"order": 2, "coefficients": ["1/2", "-3"]}));
        let back: TruncSeries<Rational> = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
