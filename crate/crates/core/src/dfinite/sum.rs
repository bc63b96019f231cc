use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::majorant::{final_bound, ghat_prefix, initial_bounds, majorant_params, MajorantParams};
use super::operator::{to_recurrence, DiffOperator, RecOperator};
use crate::ball::{Ball, ComplexFloat, BALL_GUARD_BITS};
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{abs_lower, to_decimal, ComplexRational, FloatContext, Rational};

/// Switches for the summation loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DfsumOptions {
    /// Replace `ũ_n` by zero whenever the ball `u_n` contains zero.
    pub force_zero_midpoints: bool,
    /// Record every `η_n`.
    pub trace: bool,
}

/// Output of the summation loop before the global error is added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopResult {
    /// Ball enclosing `Σ_{n<N} ũ_n ζ^n`.
    pub partial_sum: Ball,
    pub eta_bar: Rational,
    /// `(n, η_n)` for every step with `μ != 0`, when tracing.
    pub eta_trace: Vec<(usize, Rational)>,
    /// Squashed coefficients `ũ_0..ũ_{N-1}`.
    pub coefficients: Vec<ComplexFloat>,
}

/// Steps 4 to 6: recurrence unrolling with midpoint squashing, local error
/// ratios `η_n = rad(u_n)/(|ũ_{n-1}| + ... + |ũ_{n-s}|)`, and ball summation.
pub fn dfsum_loop(
    rec: &RecOperator,
    init_mids: &[ComplexFloat],
    zeta: &ComplexRational,
    order: usize,
    ctx: FloatContext,
    opts: DfsumOptions,
) -> Result<LoopResult> {
    let r = init_mids.len();
    let s = rec.order();
    let mut u: Vec<ComplexFloat> = init_mids.to_vec();
    let mut abs_low: Vec<Rational> = u
        .iter()
        .map(|x| abs_lower(&x.to_complex(), BALL_GUARD_BITS))
        .collect();
    let zeta_ball = Ball::from_exact(zeta, ctx);
    let mut t = Ball::from_rational(&Rational::one(), ctx);
    let mut sum = Ball::zero(ctx);
    let mut eta_bar = Rational::zero();
    let mut trace = Vec::new();
    for n in 1..=order {
        if n >= r && n < order {
            let mut acc = Ball::zero(ctx);
            let mut mu = Rational::zero();
            for i in 1..=s.min(n) {
                let prev = &u[n - i];
                mu += &abs_low[n - i];
                let bi = rec.b(i).eval_int(n as i64);
                if bi.is_zero() || prev.is_zero() {
                    continue;
                }
                let term =
                    Ball::from_exact(&bi, ctx).mul(&Ball::new(prev.clone(), Rational::zero())?);
                acc = acc.add(&term);
            }
            let b0 = rec.b(0).eval_int(n as i64);
            if b0.is_zero() {
                return Err(Error::Precondition(format!("b_0({n}) = 0")));
            }
            let un = acc.div(&Ball::from_exact(&b0, ctx))?;
            let (mut mid, mut rad) = un.squash();
            if opts.force_zero_midpoints && !mid.is_zero() && un.contains_zero() {
                rad = un.abs_upper();
                mid = Ball::zero(ctx).squash().0;
            }
            if mu.is_positive() {
                let eta = &rad / &mu;
                if opts.trace {
                    trace.push((n, eta.clone()));
                }
                if eta > eta_bar {
                    eta_bar = eta;
                }
            } else if rad.is_positive() {
                return Err(Error::PrecisionFailure(format!(
                    "step {n}: zero predecessors but positive local radius"
                )));
            }
            abs_low.push(abs_lower(&mid.to_complex(), BALL_GUARD_BITS));
            u.push(mid);
        }
        if n - 1 < u.len() {
            let term = Ball::new(u[n - 1].clone(), Rational::zero())?.mul(&t);
            sum = sum.add(&term);
        }
        t = zeta_ball.mul(&t);
    }
    u.truncate(order);
    Ok(LoopResult {
        partial_sum: sum,
        eta_bar,
        eta_trace: trace,
        coefficients: u,
    })
}

/// Certified enclosure of a partial sum together with the quantities of
/// its error analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfsumResult {
    /// `s_N` widened by `Δ_N`.
    pub enclosure: Ball,
    /// `s_N` as computed by the loop.
    pub partial_sum: Ball,
    pub eta_bar: Rational,
    pub u0_hat: Rational,
    pub delta0_hat: Rational,
    pub sigma: Rational,
    pub a: Rational,
    pub delta_n: Rational,
    pub params: MajorantParams,
    pub ghat_lower: Vec<Rational>,
    pub recurrence: RecOperator,
    pub eta_trace: Vec<(usize, Rational)>,
    pub precision: u32,
    pub order: usize,
}

fn qv(q: &Rational) -> Value {
    json!({"exact": rational_to_string(q), "approx": to_decimal(q, 8)})
}

impl DfsumResult {
    /// Total radius `rad(s_N) + Δ_N`.
    pub fn total_radius(&self) -> &Rational {
        self.enclosure.rad()
    }

    pub fn contains(&self, z: &ComplexRational) -> bool {
        self.enclosure.contains(z)
    }

    /// Deterministic JSON report with exact and decimal renderings.
    pub fn to_json(&self) -> Value {
        let mid = self.enclosure.mid_exact();
        json!({
            "enclosure": {
                "mid": {"re": qv(&mid.re), "im": qv(&mid.im)},
                "rad": qv(self.enclosure.rad()),
            },
            "partial_sum_rad": qv(self.partial_sum.rad()),
            "eta_bar": qv(&self.eta_bar),
            "Delta_N": qv(&self.delta_n),
            "sigma": qv(&self.sigma),
            "A": qv(&self.a),
            "u0_hat": qv(&self.u0_hat),
            "delta0_hat": qv(&self.delta0_hat),
            "alpha": qv(&self.params.alpha),
            "c": qv(&self.params.c),
            "M": qv(&self.params.big_m),
            "m": self.params.m,
            "rho_lower": self.params.rho_lower.as_ref().map(qv),
            "ghat_lower": self.ghat_lower.iter().map(qv).collect::<Vec<_>>(),
            "recurrence_order": self.recurrence.order(),
            "precision": self.precision,
            "order": self.order,
            "eta_trace": self.eta_trace.iter().map(|(n, e)| json!([n, rational_to_string(e)])).collect::<Vec<_>>(),
        })
    }
}

/// Encloses `Σ_{n<N} u_n ζ^n` for every solution of `P u = 0` whose first
/// `r` Taylor coefficients lie in `inits`.
pub fn evaluate(
    p: &DiffOperator,
    inits: &[Ball],
    zeta: &ComplexRational,
    order: usize,
    ctx: FloatContext,
    opts: DfsumOptions,
) -> Result<DfsumResult> {
    let r = p.order();
    if inits.len() != r {
        return Err(Error::Precondition(format!(
            "expected {r} initial values, got {}",
            inits.len()
        )));
    }
    if order == 0 {
        return Err(Error::Precondition(
            "truncation order must be positive".into(),
        ));
    }
    let inits: Vec<Ball> = inits
        .iter()
        .map(|b| {
            if b.precision() == ctx.precision() {
                Ok(b.clone())
            } else {
                Ball::around(&b.mid_exact(), b.rad(), ctx)
            }
        })
        .collect::<Result<_>>()?;
    let rec = to_recurrence(p);
    let params = majorant_params(p, zeta)?;
    let ghat_lower = ghat_prefix(&params, r, ctx)?;
    let (u0_hat, delta0_hat) = initial_bounds(&inits, &ghat_lower)?;
    let mids: Vec<ComplexFloat> = inits.iter().map(|b| b.mid().clone()).collect();
    let lp = dfsum_loop(&rec, &mids, zeta, order, ctx, opts)?;
    let fb = final_bound(
        &params,
        zeta,
        rec.order(),
        &lp.eta_bar,
        &u0_hat,
        &delta0_hat,
    )?;
    Ok(DfsumResult {
        enclosure: lp.partial_sum.add_error(&fb.delta_n),
        partial_sum: lp.partial_sum,
        eta_bar: lp.eta_bar,
        u0_hat,
        delta0_hat,
        sigma: fb.sigma,
        a: fb.a,
        delta_n: fb.delta_n,
        params,
        ghat_lower,
        recurrence: rec,
        eta_trace: lp.eta_trace,
        precision: ctx.precision(),
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, pow2, rat, real};

    fn ctx(t: u32) -> FloatContext {
        FloatContext::new(t).unwrap()
    }

    fn exp_partial(x: &Rational, n: usize) -> Rational {
        let mut s = Rational::zero();
        let mut term = Rational::one();
        for k in 0..n {
            s += &term;
            term = term * x / int(k as i64 + 1);
        }
        s
    }

    #[test]
    fn exp_half() {
        let p = DiffOperator::from_ints(&[&[-1], &[1]]).unwrap();
        let inits = [Ball::from_rational(&int(1), ctx(53))];
        let res = evaluate(
            &p,
            &inits,
            &real(rat(1, 2)),
            30,
            ctx(53),
            DfsumOptions::default(),
        )
        .unwrap();
        assert!(res.contains(&real(exp_partial(&rat(1, 2), 30))));
        assert!(res.total_radius() < &pow2(-40));
    }

    #[test]
    fn geometric_quarter() {
        let p = DiffOperator::from_ints(&[&[-1], &[1, -1]]).unwrap();
        let inits = [Ball::from_rational(&int(1), ctx(53))];
        let z = rat(1, 4);
        let res = evaluate(
            &p,
            &inits,
            &real(z.clone()),
            40,
            ctx(53),
            DfsumOptions::default(),
        )
        .unwrap();
        let exact = (Rational::one() - crate::exactnum::rpow(&z, 40)) / rat(3, 4);
        assert!(res.contains(&real(exact)));
        // power-of-two point, every step exact
        assert!(res.eta_bar.is_zero());
    }

    #[test]
    fn loop_with_n_equal_r() {
        let p = DiffOperator::from_ints(&[&[1], &[0], &[1]]).unwrap();
        let rec = to_recurrence(&p);
        let c = ctx(53);
        let mids = [
            Ball::from_rational(&int(2), c).mid().clone(),
            Ball::from_rational(&int(3), c).mid().clone(),
        ];
        let lp = dfsum_loop(&rec, &mids, &real(rat(1, 2)), 2, c, DfsumOptions::default()).unwrap();
        assert!(lp.eta_bar.is_zero());
        assert!(lp.partial_sum.contains(&real(rat(7, 2))));
    }

    #[test]
    fn widened_initial_value() {
        let p = DiffOperator::from_ints(&[&[-1], &[1]]).unwrap();
        let c = ctx(53);
        let e = pow2(-20);
        let wide = [Ball::around(&real(int(1)), &e, c).unwrap()];
        let res = evaluate(&p, &wide, &real(rat(1, 2)), 25, c, DfsumOptions::default()).unwrap();
        let s = exp_partial(&rat(1, 2), 25);
        assert!(res.contains(&real(s.clone())));
        assert!(res.contains(&real(s * (int(1) + e))));
    }
}
