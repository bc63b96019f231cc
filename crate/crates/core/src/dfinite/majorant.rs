use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::operator::DiffOperator;
use super::roots::{root_modulus_lower_bound, RootBound};
use crate::ball::Ball;
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::{option_rational, rational};
use crate::exactnum::{
    abs_lower, abs_upper, int, pow2, rat, rpow, ComplexRational, FloatContext, Rational,
};

const GUARD: u32 = 64;
/// Mantissa width used when rounding intermediate upper bounds to dyadics.
const DYADIC_BITS: u64 = 96;

/// Parameters of the first-order majorant equation `ŷ' = â ŷ` with
/// `â(z) = (M/c) α (1 - α z)^{-m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MajorantParams {
    /// Inverse-radius parameter, strictly above the inverse root-modulus bound.
    #[serde(with = "rational")]
    pub alpha: Rational,
    /// Lower bound on `|p_r(0)|`.
    #[serde(with = "rational")]
    pub c: Rational,
    #[serde(with = "rational")]
    pub big_m: Rational,
    /// `max(1, deg p_r)`.
    pub m: usize,
    /// `deg p_r`.
    pub lead_degree: usize,
    /// Certified lower bound on the root moduli of `p_r` (absent if constant).
    #[serde(with = "option_rational")]
    pub rho_lower: Option<Rational>,
}

/// Chooses `α`, `c`, `M`, `m` for the operator and evaluation point.
///
/// `M` bounds `Σ_j |p_{i,j}| α^{i-r-j}` for every `i < r`: the coefficient of
/// `∂^i` in `p_r^{-1} P` is majorized by `(M/c) α^{r-i} (1-αz)^{-m}`, which
/// in turn is majorized by the coefficient of `∂^i` in `∂^{r-1}(∂ - â)`.
pub fn majorant_params(p: &DiffOperator, zeta: &ComplexRational) -> Result<MajorantParams> {
    let r = p.order();
    let zabs = abs_upper(zeta, GUARD);
    let lead = p.leading();
    let lead_degree = lead.degree().expect("nonzero leading coefficient");
    let bound = root_modulus_lower_bound(lead, &zabs)?;
    let alpha = match &bound {
        RootBound::Infinite => {
            if zabs.is_zero() {
                Rational::one()
            } else {
                (int(2) * &zabs).recip()
            }
        }
        RootBound::Finite(l) => {
            let a = rat(16, 15) / l;
            if &a * &zabs < Rational::one() {
                a
            } else {
                (l.recip() + zabs.recip()) / int(2)
            }
        }
    };
    if &alpha * &zabs >= Rational::one() || !alpha.is_positive() {
        return Err(Error::Certification("no admissible α with α|ζ| < 1".into()));
    }
    let c = abs_lower(&lead.coeff(0), GUARD);
    if !c.is_positive() {
        return Err(Error::Precondition("p_r(0) = 0".into()));
    }
    let mut big_m = Rational::zero();
    for i in 0..r {
        let mut acc = Rational::zero();
        for (j, pij) in p.polys()[i].coeffs().iter().enumerate() {
            if pij.is_zero() {
                continue;
            }
            let e = i as i64 - r as i64 - j as i64;
            acc += abs_upper(pij, GUARD) * rpow(&alpha.recip(), (-e) as u64);
        }
        if acc > big_m {
            big_m = acc;
        }
    }
    if big_m.is_zero() {
        // any positive M is admissible; keeps every ĝ_n positive
        big_m = pow2(-10);
    }
    Ok(MajorantParams {
        alpha,
        c,
        big_m,
        m: lead_degree.max(1),
        lead_degree,
        rho_lower: bound.finite().cloned(),
    })
}

fn binomial(n: u64, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int((n - i) as i64) / int((i + 1) as i64);
    }
    acc
}

/// Coefficient `â_k = (M/c) α^{k+1} C(k+m-1, m-1)`.
pub fn ahat_coeff(params: &MajorantParams, k: usize) -> Rational {
    let m = params.m as u64;
    &params.big_m / &params.c
        * rpow(&params.alpha, k as u64 + 1)
        * binomial(k as u64 + m - 1, m - 1)
}

/// Positive lower bounds on `ĝ_0..ĝ_{r-1}` where `ĝ = exp ∫ â`.
///
/// Runs `(n+1) ĝ_{n+1} = Σ_k â_k ĝ_{n-k}` in real ball arithmetic and keeps
/// lower endpoints; the precision is doubled if an endpoint is not positive.
pub fn ghat_prefix(params: &MajorantParams, r: usize, ctx: FloatContext) -> Result<Vec<Rational>> {
    let mut prec = ctx.precision().max(8);
    for _ in 0..8 {
        let c = FloatContext::new(prec)?;
        let mut g: Vec<Ball> = vec![Ball::from_rational(&Rational::one(), c)];
        for n in 0..r.saturating_sub(1) {
            let mut acc = Ball::zero(c);
            for k in 0..=n {
                let a = Ball::from_rational(&ahat_coeff(params, k), c);
                acc = acc.add(&a.mul(&g[n - k]));
            }
            g.push(acc.scale(&rat(1, n as i64 + 1)));
        }
        let lower: Vec<Rational> = g.iter().map(|b| b.mid_exact().re - b.rad()).collect();
        if lower.iter().all(Signed::is_positive) {
            return Ok(lower);
        }
        prec *= 2;
    }
    Err(Error::PrecisionFailure(
        "cannot separate ĝ_n from zero".into(),
    ))
}

/// `(û_0, δ̂_0)` with `û_0 >= |u_n|/ĝ_n` and `δ̂_0 >= rad(u_n)/ĝ_n` for `n < r`.
pub fn initial_bounds(inits: &[Ball], ghat_lower: &[Rational]) -> Result<(Rational, Rational)> {
    if inits.len() != ghat_lower.len() {
        return Err(Error::Precondition(
            "need one ĝ bound per initial value".into(),
        ));
    }
    let mut u0 = Rational::zero();
    let mut d0 = Rational::zero();
    for (b, g) in inits.iter().zip(ghat_lower) {
        if !g.is_positive() {
            return Err(Error::Precondition(
                "ĝ lower bounds must be positive".into(),
            ));
        }
        let u = b.abs_upper() / g;
        let d = b.rad() / g;
        if u > u0 {
            u0 = u;
        }
        if d > d0 {
            d0 = d;
        }
    }
    Ok((u0, d0))
}

/// Smallest dyadic with a `bits`-bit mantissa that is `>= q`.
pub fn round_up_dyadic(q: &Rational, bits: u64) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let e = a.numer().bits() as i64 - a.denom().bits() as i64 - bits as i64;
    let scaled = &a * pow2(-e);
    let m = if neg { scaled.floor() } else { scaled.ceil() };
    let out = m * pow2(e);
    if neg {
        -out
    } else {
        out
    }
}

/// Rational upper bound on `exp(x)` for `x >= 0`.
///
/// Halves `x` until it is at most 1/2, sums 32 Taylor terms plus the tail
/// bound `x^32/32! · 1/(1 - x/33)`, then squares back, rounding upward to a
/// dyadic after every step.
pub fn exp_upper(x: &Rational) -> Rational {
    assert!(!x.is_negative(), "exp_upper expects x >= 0");
    let mut y = x.clone();
    let mut halvings = 0u32;
    while y > rat(1, 2) {
        y /= int(2);
        halvings += 1;
    }
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for k in 0..32 {
        sum += &term;
        term = term * &y / int(k + 1);
    }
    // term = y^32/32!
    sum += term / (Rational::one() - &y / int(33));
    let mut acc = round_up_dyadic(&sum, DYADIC_BITS);
    for _ in 0..halvings {
        acc = round_up_dyadic(&(&acc * &acc), DYADIC_BITS);
    }
    acc
}

/// Constants of the final error bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalBound {
    #[serde(with = "rational")]
    pub sigma: Rational,
    #[serde(rename = "A", with = "rational")]
    pub a: Rational,
    #[serde(with = "rational")]
    pub delta_n: Rational,
}

/// Bound `Δ_N` on `|Σ_{n<N} (ũ_n - u_n) ζ^n|`.
///
/// With `κ = σ η̄`, `σ >= (|ζ| + ... + |ζ|^s)(1 - α|ζ|)^{-deg p_r}` and
/// `A >= (M/c) α|ζ| (1 - α|ζ|)^{-m}`:
/// `Δ_N = (δ̂_0 + û_0 κ (1 + A)/(1 - κ)) / (1 - κ) · exp(A/(1 - κ))`.
pub fn final_bound(
    params: &MajorantParams,
    zeta: &ComplexRational,
    s: usize,
    eta_bar: &Rational,
    u0_hat: &Rational,
    delta0_hat: &Rational,
) -> Result<FinalBound> {
    let zabs = abs_upper(zeta, GUARD);
    final_bound_abs(params, &zabs, s, eta_bar, u0_hat, delta0_hat)
}

/// [`final_bound`] for a given upper bound `|ζ| <= zabs`.
pub fn final_bound_abs(
    params: &MajorantParams,
    zabs: &Rational,
    s: usize,
    eta_bar: &Rational,
    u0_hat: &Rational,
    delta0_hat: &Rational,
) -> Result<FinalBound> {
    let one = Rational::one();
    let az = &params.alpha * zabs;
    if az >= one {
        return Err(Error::Certification("α|ζ| >= 1".into()));
    }
    let gap = &one - &az;
    let mut phi = Rational::zero();
    let mut p = one.clone();
    for _ in 0..s {
        p *= zabs;
        phi += &p;
    }
    let sigma = round_up_dyadic(&(phi / rpow(&gap, params.lead_degree as u64)), DYADIC_BITS);
    let a = round_up_dyadic(
        &(&params.big_m / &params.c * &az / rpow(&gap, params.m as u64)),
        DYADIC_BITS,
    );
    let kappa = &sigma * eta_bar;
    if kappa >= one {
        return Err(Error::PrecisionFailure(format!(
            "σ·η̄ = {} >= 1; increase the working precision",
            crate::exactnum::to_decimal(&kappa, 6)
        )));
    }
    let k1 = &one - &kappa;
    let numer = delta0_hat + u0_hat * &kappa * (&one + &a) / &k1;
    let e = exp_upper(&round_up_dyadic(&(&a / &k1), DYADIC_BITS));
    let delta_n = round_up_dyadic(&(numer / &k1 * e), DYADIC_BITS);
    Ok(FinalBound { sigma, a, delta_n })
}

/// Exact prefix of `ĝ` for testing: `exp` of `∫ â` in rational series arithmetic.
pub fn ghat_exact(params: &MajorantParams, order: usize) -> Vec<Rational> {
    use crate::series::TruncSeries;
    let ahat = TruncSeries::new((0..order).map(|k| ahat_coeff(params, k)).collect());
    let integral = ahat.integrate().truncate(order);
    integral.exp().expect("zero constant term").into_coeffs()
}
