//! Explicit finite-difference scheme for the one-dimensional wave equation
//! on `0 <= i <= n` with zero boundary values:
//! `p^1 = p^0 + (a/2) L p^0`, `p^{k+1} = 2p^k - p^{k-1} + a L p^k`,
//! `L p_i = p_{i+1} - 2p_i + p_{i-1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::report::{Record, SimulationReport};
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{int, pow2, to_decimal, BinFloat, FloatContext, Rational};

/// Truncated series in `t` over `Ω = ℚ[x]/(x^{2n} - 1)`: coefficient
/// `f_i^k` of `x^i t^k` for `k < order` and `i` taken modulo `2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPolySeries {
    n: usize,
    coeffs: Vec<Vec<Rational>>,
}

/// Product in `Ω` of two coefficient vectors of length `2n`.
pub fn omega_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let m = a.len();
    let mut out = vec![Rational::zero(); m];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[(i + j) % m] += x * y;
            }
        }
    }
    out
}

/// `φ(x) = 2 + a(x^{-1} - 2 + x)` as an element of `Ω`.
pub fn phi(n: usize, a: &Rational) -> Vec<Rational> {
    let m = 2 * n;
    let mut v = vec![Rational::zero(); m];
    v[0] += int(2) - a * int(2);
    v[1 % m] += a;
    v[(m - 1) % m] += a;
    v
}

/// Extends values `v_0..v_n` (with `v_0 = v_n = 0`) to the odd,
/// `2n`-periodic sequence, returned as the coefficient vector in `Ω`.
pub fn odd_extension(v: &[Rational]) -> Vec<Rational> {
    let n = v.len() - 1;
    let m = 2 * n;
    let mut out = vec![Rational::zero(); m];
    for i in 1..n {
        out[i] = v[i].clone();
        out[m - i] = -&v[i];
    }
    out
}

/// Common-denominator integer form `(numerators, D)` of a rational slice.
fn to_integers(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    (v.iter().map(|q| q.numer() * (&d / q.denom())).collect(), d)
}

impl CyclicPolySeries {
    pub fn zeros(n: usize, order: usize) -> Self {
        CyclicPolySeries {
            n,
            coeffs: vec![vec![Rational::zero(); 2 * n]; order],
        }
    }

    /// From time slices, each a coefficient vector of length `2n`.
    pub fn from_slices(n: usize, slices: Vec<Vec<Rational>>) -> Result<Self> {
        if n == 0 || slices.iter().any(|s| s.len() != 2 * n) {
            return Err(Error::Precondition(
                "every slice must have length 2n with n >= 1".into(),
            ));
        }
        Ok(CyclicPolySeries { n, coeffs: slices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        2 * self.n
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    fn idx(&self, i: i64) -> usize {
        i.rem_euclid(2 * self.n as i64) as usize
    }

    /// `f_i^k`; zero beyond the truncation order.
    pub fn coeff(&self, i: i64, k: usize) -> Rational {
        self.coeffs
            .get(k)
            .map_or_else(Rational::zero, |s| s[self.idx(i)].clone())
    }

    pub fn set(&mut self, i: i64, k: usize, v: Rational) {
        let j = self.idx(i);
        self.coeffs[k][j] = v;
    }

    /// Coefficient vector of `t^k`, indexed by `i mod 2n`.
    pub fn slice(&self, k: usize) -> &[Rational] {
        &self.coeffs[k]
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.n, o.n, "period mismatch");
        let order = self.order().min(o.order());
        let coeffs = (0..order)
            .map(|k| {
                self.coeffs[k]
                    .iter()
                    .zip(&o.coeffs[k])
                    .map(|(a, b)| f(a, b))
                    .collect()
            })
            .collect();
        CyclicPolySeries { n: self.n, coeffs }
    }

    /// Multiplication by `t`, truncated to the same order.
    pub fn times_t(&self) -> Self {
        let mut coeffs = vec![vec![Rational::zero(); 2 * self.n]];
        coeffs.extend(
            self.coeffs
                .iter()
                .take(self.order().saturating_sub(1))
                .cloned(),
        );
        coeffs.truncate(self.order());
        CyclicPolySeries { n: self.n, coeffs }
    }

    /// Multiplication by an element of `Ω` (constant in `t`).
    pub fn mul_omega(&self, w: &[Rational]) -> Self {
        CyclicPolySeries {
            n: self.n,
            coeffs: self.coeffs.iter().map(|s| omega_mul(s, w)).collect(),
        }
    }

    /// Product in `Ω[[t]]`, truncated to the smaller order. Runs in integer
    /// arithmetic over a common denominator.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "period mismatch");
        let m = 2 * self.n;
        let order = self.order().min(o.order());
        let flat_a: Vec<Rational> = self.coeffs.iter().take(order).flatten().cloned().collect();
        let flat_b: Vec<Rational> = o.coeffs.iter().take(order).flatten().cloned().collect();
        let (ia, da) = to_integers(&flat_a);
        let (ib, db) = to_integers(&flat_b);
        let nz = |v: &[BigInt], k: usize| -> Vec<(usize, BigInt)> {
            (0..m)
                .filter(|&i| !v[k * m + i].is_zero())
                .map(|i| (i, v[k * m + i].clone()))
                .collect()
        };
        let sa: Vec<_> = (0..order).map(|k| nz(&ia, k)).collect();
        let sb: Vec<_> = (0..order).map(|k| nz(&ib, k)).collect();
        let den = Rational::from_integer(da * db);
        let mut coeffs = Vec::with_capacity(order);
        for k in 0..order {
            let mut acc = vec![BigInt::zero(); m];
            for j in 0..=k {
                for (i1, x) in &sa[j] {
                    for (i2, y) in &sb[k - j] {
                        acc[(i1 + i2) % m] += x * y;
                    }
                }
            }
            coeffs.push(
                acc.into_iter()
                    .map(|v| Rational::from_integer(v) / &den)
                    .collect(),
            );
        }
        CyclicPolySeries { n: self.n, coeffs }
    }

    pub fn min_coeff(&self) -> Option<Rational> {
        self.coeffs.iter().flatten().min().cloned()
    }

    /// Number of negative coefficients.
    pub fn negative_count(&self) -> usize {
        self.coeffs
            .iter()
            .flatten()
            .filter(|q| q.is_negative())
            .count()
    }

    /// `{n, order, coefficients: [[f_{-n}^k, ..., f_{n-1}^k], ...]}`.
    pub fn to_json(&self) -> Value {
        let n = self.n as i64;
        json!({
            "n": self.n,
            "order": self.order(),
            "index_range": [-n, n - 1],
            "coefficients": (0..self.order())
                .map(|k| (-n..n).map(|i| rational_to_string(&self.coeff(i, k))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

fn check_a(a: &Rational) -> Result<()> {
    if !a.is_positive() || a > &Rational::one() {
        return Err(Error::Precondition("the scheme needs 0 < a <= 1".into()));
    }
    Ok(())
}

/// `λ = 1/(1 - φ(x) t + t²)` in `Ω[[t]]` to order `order`, via
/// `λ^0 = 1`, `λ^1 = φ`, `λ^k = φ λ^{k-1} - λ^{k-2}`.
pub fn wave_lambda(n: usize, a: &Rational, order: usize) -> Result<CyclicPolySeries> {
    check_a(a)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let m = 2 * n;
    let f = phi(n, a);
    let mut coeffs: Vec<Vec<Rational>> = Vec::with_capacity(order);
    for k in 0..order {
        let next = match k {
            0 => {
                let mut v = vec![Rational::zero(); m];
                v[0] = Rational::one();
                v
            }
            1 => f.clone(),
            _ => omega_mul(&f, &coeffs[k - 1])
                .iter()
                .zip(&coeffs[k - 2])
                .map(|(x, y)| x - y)
                .collect(),
        };
        coeffs.push(next);
    }
    Ok(CyclicPolySeries { n, coeffs })
}

/// Exact and floating-point trajectories of the scheme with the measured
/// local and global errors. Rows are time levels `k`, columns `i = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveSimulation {
    pub n: usize,
    pub a: Rational,
    pub precision: u32,
    pub exact: Vec<Vec<Rational>>,
    pub computed: Vec<Vec<Rational>>,
    /// `δ_i^k` from one exact step applied to the computed state.
    pub local: Vec<Vec<Rational>>,
    /// `Δ_i^k = p̃_i^k - p_i^k`.
    pub global: Vec<Vec<Rational>>,
}

fn lap(v: &[Rational], i: usize) -> Rational {
    &v[i + 1] - &v[i] * int(2) + &v[i - 1]
}

fn fl_lap(ctx: FloatContext, v: &[BinFloat], i: usize) -> BinFloat {
    ctx.add(&ctx.sub(&v[i + 1], &v[i].mul_pow2(1)), &v[i - 1])
}

/// Runs the exact scheme and its floating-point evaluation side by side for
/// `levels` time levels. `init` holds `p_1^0..p_{n-1}^0`.
pub fn wave_simulate(
    n: usize,
    a: &Rational,
    init: &[Rational],
    ctx: FloatContext,
    levels: usize,
) -> Result<WaveSimulation> {
    check_a(a)?;
    if n < 2 {
        return Err(Error::Precondition("need n >= 2 grid intervals".into()));
    }
    if init.len() != n - 1 {
        return Err(Error::Precondition(format!(
            "expected {} interior initial values, got {}",
            n - 1,
            init.len()
        )));
    }
    if levels == 0 {
        return Err(Error::Precondition("need at least one time level".into()));
    }
    let t = ctx.precision();
    let half_a = a / int(2);
    let fa = ctx.round(a);
    let fha = ctx.round(&half_a);
    let zero_f = BinFloat::zero(t);

    let mut p0 = vec![Rational::zero(); n + 1];
    p0[1..n].clone_from_slice(init);
    let mut exact = vec![p0];
    let mut fl: Vec<Vec<BinFloat>> = vec![std::iter::once(zero_f.clone())
        .chain(init.iter().map(|q| ctx.round(q)))
        .chain(std::iter::once(zero_f.clone()))
        .collect()];
    let mut computed: Vec<Vec<Rational>> = vec![fl[0].iter().map(BinFloat::to_rational).collect()];
    let mut local = vec![computed[0]
        .iter()
        .zip(&exact[0])
        .map(|(c, e)| c - e)
        .collect::<Vec<_>>()];

    for k in 0..levels.saturating_sub(1) {
        let mut ex = vec![Rational::zero(); n + 1];
        let mut fv = vec![zero_f.clone(); n + 1];
        for i in 1..n {
            if k == 0 {
                ex[i] = &exact[0][i] + &half_a * lap(&exact[0], i);
                fv[i] = ctx.add(&fl[0][i], &ctx.mul(&fha, &fl_lap(ctx, &fl[0], i)));
            } else {
                ex[i] = &exact[k][i] * int(2) - &exact[k - 1][i] + a * lap(&exact[k], i);
                let base = ctx.sub(&fl[k][i].mul_pow2(1), &fl[k - 1][i]);
                fv[i] = ctx.add(&base, &ctx.mul(&fa, &fl_lap(ctx, &fl[k], i)));
            }
        }
        let cv: Vec<Rational> = fv.iter().map(BinFloat::to_rational).collect();
        let mut dl = vec![Rational::zero(); n + 1];
        for i in 1..n {
            dl[i] = if k == 0 {
                let d0 = &local[0];
                &cv[i] - &computed[0][i] - &half_a * lap(&computed[0], i)
                    + &d0[i]
                    + &half_a * lap(d0, i)
            } else {
                &cv[i] - (&computed[k][i] * int(2) - &computed[k - 1][i] + a * lap(&computed[k], i))
            };
        }
        exact.push(ex);
        fl.push(fv);
        computed.push(cv);
        local.push(dl);
    }
    let global = computed
        .iter()
        .zip(&exact)
        .map(|(c, e)| c.iter().zip(e).map(|(x, y)| x - y).collect())
        .collect();
    Ok(WaveSimulation {
        n,
        a: a.clone(),
        precision: t,
        exact,
        computed,
        local,
        global,
    })
}

/// Maxima `(δ̄⁰, δ̄¹, δ̄)` of the measured local errors.
pub fn local_error_maxima(sim: &WaveSimulation) -> (Rational, Rational, Rational) {
    let max_abs = |rows: &[Vec<Rational>]| {
        rows.iter()
            .flatten()
            .map(|q| q.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    };
    let d0 = max_abs(&sim.local[..1]);
    let d1 = max_abs(&sim.local[1.min(sim.local.len())..2.min(sim.local.len())]);
    let d = if sim.local.len() > 2 {
        max_abs(&sim.local[2..])
    } else {
        Rational::zero()
    };
    (d0, d1, d)
}

/// Coefficients `B_k`, `k < levels`, of
/// `(δ̄⁰ + (δ̄¹ + 2δ̄⁰) t + δ̄ t²/(1-t)) / (1-t)²`.
pub fn wave_uniform_bound(
    d0: &Rational,
    d1: &Rational,
    d: &Rational,
    levels: usize,
) -> Vec<Rational> {
    let eta = |j: usize| -> Rational {
        match j {
            0 => d0.clone(),
            1 => d1 + d0 * int(2),
            _ => d.clone(),
        }
    };
    let mut s0 = Rational::zero();
    let mut s1 = Rational::zero();
    (0..levels)
        .map(|k| {
            let e = eta(k);
            s1 += &e * int(k as i64);
            s0 += e;
            &s0 * int(k as i64 + 1) - &s1
        })
        .collect()
}

/// Published local error constants for binary64 with data of moderate size:
/// `(14·2^-52, 81·2^-53, 78·2^-52)`.
pub fn published_local_constants() -> (Rational, Rational, Rational) {
    (
        int(14) * pow2(-52),
        int(81) * pow2(-53),
        int(78) * pow2(-52),
    )
}

/// Simulates the scheme and checks the uniform bound, its simplified form
/// `½ δ̄_max (k+1)(k+2)` and the root-mean-square bound, all with measured
/// local error maxima. One record per time level, at the worst index.
pub fn wave_run(
    n: usize,
    a: &Rational,
    init: &[Rational],
    ctx: FloatContext,
    levels: usize,
) -> Result<SimulationReport> {
    let sim = wave_simulate(n, a, init, ctx, levels)?;
    Ok(wave_report(&sim))
}

pub fn wave_report(sim: &WaveSimulation) -> SimulationReport {
    let n = sim.n;
    let levels = sim.global.len();
    let (d0, d1, d) = local_error_maxima(sim);
    let dmax = [d0.clone(), &d1 + &d0 * int(2), d.clone()]
        .into_iter()
        .max()
        .expect("nonempty");
    let bounds = wave_uniform_bound(&d0, &d1, &d, levels);
    let (p0, p1, p) = published_local_constants();
    let published_applicable = d0 <= p0 && d1 <= p1 && d <= p;
    let pub_bounds = wave_uniform_bound(&p0, &p1, &p, levels);

    let mut rep = SimulationReport::new("wave");
    rep.param("n", n);
    rep.param("a", rational_to_string(&sim.a));
    rep.param("precision", sim.precision);
    rep.param("levels", levels);
    rep.param("delta_bar0", to_decimal(&d0, 6));
    rep.param("delta_bar1", to_decimal(&d1, 6));
    rep.param("delta_bar", to_decimal(&d, 6));
    rep.param("delta_bar_max", to_decimal(&dmax, 6));
    rep.param("published_constants_applicable", published_applicable);

    let mut simplified_ok = true;
    let mut rms_ok = true;
    let mut published_ok = true;
    for k in 0..levels {
        let row = &sim.global[k];
        let (iw, worst) = row
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().cmp(&y.1.abs()))
            .expect("n >= 2");
        let err = worst.abs();
        let kk = k as i64;
        let simple = &dmax * int((kk + 1) * (kk + 2)) / int(2);
        simplified_ok &= err <= simple;
        let rms_sq = row[..n]
            .iter()
            .map(|q| q * q)
            .fold(Rational::zero(), |s, x| s + x)
            / int(n as i64);
        rms_ok &= rms_sq <= &simple * &simple;
        if published_applicable {
            published_ok &= err <= pub_bounds[k];
        }
        rep.push(
            Record::new(
                k,
                sim.computed[k][iw].clone(),
                sim.exact[k][iw].clone(),
                err,
                bounds[k].clone(),
            )
            .at(iw as i64)
            .with("simplified_bound", simple)
            .with("rms_sq", rms_sq),
        );
    }
    let init_identity =
        sim.global[0] == sim.local[0] && (levels < 2 || sim.global[1] == sim.local[1]);
    rep.check("global_equals_local_at_levels_0_1", init_identity);
    rep.check("simplified_uniform_bound", simplified_ok);
    rep.check("rms_bound", rms_ok);
    if published_applicable {
        rep.check("published_constants_bound", published_ok);
    }
    rep
}

/// `Δ = λ η` with `η = δ - φ t δ^0`, all series built from the odd periodic
/// extensions of the simulated errors; exact equality up to the simulated
/// order.
pub fn wave_identity_check(sim: &WaveSimulation) -> Result<bool> {
    let n = sim.n;
    let levels = sim.global.len();
    let delta =
        CyclicPolySeries::from_slices(n, sim.local.iter().map(|r| odd_extension(r)).collect())?;
    let big_delta =
        CyclicPolySeries::from_slices(n, sim.global.iter().map(|r| odd_extension(r)).collect())?;
    let mut d0 = CyclicPolySeries::zeros(n, levels);
    d0.coeffs[0] = delta.slice(0).to_vec();
    let eta = delta.sub(&d0.mul_omega(&phi(n, &sim.a)).times_t());
    let lambda = wave_lambda(n, &sim.a, levels)?;
    Ok(lambda.mul(&eta) == big_delta)
}

/// The exact scheme run directly in `Ω` as `p^{k+1} = φ p^k - p^{k-1}`
/// (with the half step at `k = 0`) reproduces the odd periodic extension of
/// the bounded-domain solution.
pub fn wave_extension_check(sim: &WaveSimulation) -> bool {
    let n = sim.n;
    let f = phi(n, &sim.a);
    let two = int(2);
    let mut prev: Vec<Rational> = Vec::new();
    let mut cur = odd_extension(&sim.exact[0]);
    for k in 0..sim.exact.len() {
        if odd_extension(&sim.exact[k]) != cur {
            return false;
        }
        let fc = omega_mul(&f, &cur);
        let next: Vec<Rational> = if k == 0 {
            // p + (a/2)(x^{-1} - 2 + x) p = φ p / 2
            fc.iter().map(|x| x / &two).collect()
        } else {
            fc.iter().zip(&prev).map(|(x, y)| x - y).collect()
        };
        prev = std::mem::replace(&mut cur, next);
    }
    true
}

/// Checks `λ_i^k >= 0` and returns the number of violations.
pub fn wave_lambda_violations(n: usize, a: &Rational, order: usize) -> Result<usize> {
    Ok(wave_lambda(n, a, order)?.negative_count())
}

/// Positivity report: one row per power `t^k`, with the most negative
/// coefficient as error and a zero bound, so a row passes iff every
/// coefficient of `λ^k` is nonnegative.
pub fn wave_lambda_report(n: usize, a: &Rational, order: usize) -> Result<SimulationReport> {
    let lambda = wave_lambda(n, a, order)?;
    let mut rep = SimulationReport::new("wave-lambda");
    rep.param("n", n);
    rep.param("a", rational_to_string(a));
    rep.param("order", order);
    for k in 0..order {
        let (i, min) = lambda
            .slice(k)
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.cmp(y.1))
            .map(|(i, v)| (i as i64, v.clone()))
            .unwrap_or((0, Rational::zero()));
        let err = if min.is_negative() {
            -&min
        } else {
            Rational::zero()
        };
        rep.push(Record::new(k, min.clone(), min, err, Rational::zero()).at(i));
    }
    rep.param("negative_coefficients", lambda.negative_count());
    Ok(rep)
}
