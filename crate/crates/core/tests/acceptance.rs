//! End-to-end acceptance suite. Every criterion prints one `PASS`/`FAIL`
//! line with its measurements and elapsed time.

mod common;

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recur_bound::ball::Ball;
use recur_bound::casestudies::{
    bernoulli_run, legendre_run, sine_samples, toy_fixed_run, toy_float_run, toy_float_tightness,
    wave_extension_check, wave_identity_check, wave_lambda_violations, wave_report, wave_simulate,
    ErrorPolicy,
};
use recur_bound::dfinite::{
    evaluate, root_modulus_lower_bound, DfsumOptions, DiffOperator, RootBound,
};
use recur_bound::exactnum::{
    complex, int, pow2, rat, real, to_decimal, BinFloat, ComplexRational, FloatContext, Rational,
};
use recur_bound::series::{
    check_maj_transfer_ode, hadamard_theta_closed_u, ipp_bound_check, majorizes, minmaj,
    solve_first_order_maj_ineq, solve_linear_majorant, theta_hat, theta_hat_series_u, NonnegSeries,
    TruncSeries,
};

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit_s: u64, detail: &str) -> bool {
    let in_time = elapsed <= Duration::from_secs(limit_s);
    let pass = ok && in_time;
    println!(
        "{} criterion {id} ({name}): {detail}; {:.2}s (target < {limit_s}s{})",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if in_time { "" } else { ", exceeded" }
    );
    pass
}

fn ctx(t: u32) -> FloatContext {
    FloatContext::new(t).unwrap()
}

// ---------------------------------------------------------------- 1

fn random_point(rng: &mut ChaCha8Rng, op: &DiffOperator) -> ComplexRational {
    let cap = match root_modulus_lower_bound(op.leading(), &Rational::zero()).unwrap() {
        RootBound::Infinite => int(2),
        RootBound::Finite(l) => l / int(2),
    };
    // |ζ| = cap·k/16 rounded down to a multiple of 2^-10
    let k = rng.gen_range(1..=16);
    let rho = (cap * rat(k, 16) * pow2(10)).floor() * pow2(-10);
    match rng.gen_range(0..3) {
        0 => real(rho),
        1 => real(-rho),
        _ => complex(&rho * rat(3, 5), &rho * rat(4, 5)),
    }
}

fn criterion_1_containment_fuzz() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut contained = 0;
    let mut failures = Vec::new();
    let (mut oracle_time, mut eval_time) = (Duration::ZERO, Duration::ZERO);
    let precisions = [12u32, 24, 53];
    for case in 0..100 {
        let op = random_operator_checked(&mut rng);
        let zeta = random_point(&mut rng, &op);
        let r = op.order();
        let inits: Vec<ComplexRational> =
            (0..r).map(|_| real(int(rng.gen_range(-5..=5)))).collect();
        let order = rng.gen_range(1..=200usize);
        let t = precisions[case % 3];
        let c = ctx(t);
        let balls: Vec<Ball> = inits.iter().map(|z| Ball::from_exact(z, c)).collect();
        let t0 = Instant::now();
        let exact = common::partial_sum(&common::ode_taylor(&op, &inits, order), &zeta);
        oracle_time += t0.elapsed();
        let t0 = Instant::now();
        let res = evaluate(&op, &balls, &zeta, order, c, DfsumOptions::default());
        eval_time += t0.elapsed();
        match res {
            Ok(res) if res.contains(&exact) => contained += 1,
            Ok(res) => failures.push(format!(
                "case {case}: not contained (rad {})",
                to_decimal(res.total_radius(), 3)
            )),
            Err(e) => failures.push(format!("case {case} (t={t}, N={order}, r={r}): {e}")),
        }
    }
    for f in &failures {
        println!("    {f}");
    }
    let detail = format!(
        "{contained}/100 contained (oracle {:.2}s, evaluate {:.2}s)",
        oracle_time.as_secs_f64(),
        eval_time.as_secs_f64()
    );
    let ok = report(
        1,
        "containment fuzz",
        contained == 100,
        start.elapsed(),
        60,
        &detail,
    );
    ok
}

fn random_operator_checked(rng: &mut ChaCha8Rng) -> DiffOperator {
    common::random_operator(rng, 3, 3)
}

// ---------------------------------------------------------------- 2

fn criterion_2_precision_scaling() -> bool {
    let start = Instant::now();
    let p = DiffOperator::from_ints(&[&[-1], &[1]]).unwrap();
    let zeta = real(rat(1, 2));
    let rad = |t: u32| {
        let c = ctx(t);
        evaluate(
            &p,
            &[Ball::from_rational(&int(1), c)],
            &zeta,
            60,
            c,
            DfsumOptions::default(),
        )
        .unwrap()
        .total_radius()
        .clone()
    };
    let r64 = rad(64);
    let r128 = rad(128);
    let factor = &r64 / &r128;
    let ok = r64 <= pow2(-40) && factor >= pow2(40) && factor <= pow2(80);
    let ok = report(
        2,
        "precision scaling",
        ok,
        start.elapsed(),
        60,
        &format!(
            "rad(t=64) = {}, rad(t=128) = {}, factor = {}",
            to_decimal(&r64, 4),
            to_decimal(&r128, 4),
            to_decimal(&factor, 4)
        ),
    );
    ok
}

// ---------------------------------------------------------------- 3

fn criterion_3_toy_fixed() -> bool {
    let start = Instant::now();
    let rep = toy_fixed_run(&int(1), &pow2(-30), 10_000, ErrorPolicy::WorstCase).unwrap();
    let max = rep.max_ratio().cloned().unwrap_or_else(|| int(-1));
    let naive = rep
        .summary
        .checks
        .get("naive_factor_at_30_ge_1e6")
        .copied()
        .unwrap_or(false);
    let ok = rep.all_ok() && max >= rat(2, 5) && naive;
    let detail = format!(
        "all_ok = {}, max ratio = {}, naive/sharp at n=30 = {}",
        rep.all_ok(),
        to_decimal(&max, 4),
        rep.summary
            .params
            .get("naive_over_sharp_at_30")
            .cloned()
            .unwrap_or_default()
    );
    let ok = report(3, "toy fixed-point", ok, start.elapsed(), 5, &detail);
    ok
}

// ---------------------------------------------------------------- 4

fn criterion_4_toy_float() -> bool {
    let start = Instant::now();
    let c = ctx(24);
    let rep = toy_float_run(&c.round(&int(1)), c, 1000).unwrap();
    // c0 = 1 is propagated exactly; a non-representable start exercises the bound
    let third = toy_float_run(&c.round(&rat(1, 3)), c, 1000).unwrap();
    let tight24 = toy_float_tightness(&int(1), &c.unit_roundoff(), 50).unwrap();
    let tight10 = toy_float_tightness(&int(1), &pow2(-10), 50).unwrap();
    let ok = rep.passed() && third.passed() && tight24 && tight10;
    let ratio = |r: &recur_bound::casestudies::SimulationReport| {
        r.max_ratio().map_or("inf".into(), |q| to_decimal(q, 4))
    };
    let detail = format!(
        "bound holds = {} (c0=1/3: {}), max ratio = {} (c0=1/3: {}), tightness (u=2^-24, 2^-10) = ({tight24}, {tight10})",
        rep.all_ok(),
        third.all_ok(),
        ratio(&rep),
        ratio(&third)
    );
    let ok = report(4, "toy floating-point", ok, start.elapsed(), 5, &detail);
    ok
}

// ---------------------------------------------------------------- 5

fn criterion_5_legendre() -> bool {
    let start = Instant::now();
    let eps = pow2(-20);
    let mut runs = 0;
    let mut good = 0;
    let mut worst = Rational::zero();
    for x in [int(0), rat(1, 2), rat(7, 10), int(1)] {
        let policies =
            std::iter::once(ErrorPolicy::WorstCase).chain((0..10).map(ErrorPolicy::Random));
        for p in policies {
            let rep = legendre_run(&x, &eps, 1000, p).unwrap();
            runs += 1;
            if rep.all_ok() {
                good += 1;
            }
            if let Some(m) = rep.max_ratio() {
                if m > &worst {
                    worst = m.clone();
                }
            }
        }
    }
    let ok = report(
        5,
        "Legendre",
        good == runs,
        start.elapsed(),
        10,
        &format!(
            "{good}/{runs} runs within bound, max ratio = {}",
            to_decimal(&worst, 4)
        ),
    );
    ok
}

// ---------------------------------------------------------------- 6

fn criterion_6_bernoulli() -> bool {
    let start = Instant::now();
    let a = bernoulli_run(ctx(53), 100).unwrap();
    let b = bernoulli_run(ctx(24), 60).unwrap();
    let fmt = |r: &recur_bound::casestudies::SimulationReport| {
        format!(
            "main={} corollary={} signs={} magnitude={} max ratio={}",
            r.all_ok(),
            r.summary.checks["corollary_bound"],
            r.summary.checks["exact_sign_alternation"],
            r.summary.checks["exact_magnitude_enclosure"],
            r.max_ratio().map_or("inf".into(), |q| to_decimal(q, 4))
        )
    };
    let detail = format!("t=53,K=100: {}; t=24,K=60: {}", fmt(&a), fmt(&b));
    let ok = report(
        6,
        "Bernoulli",
        a.passed() && b.passed(),
        start.elapsed(),
        30,
        &detail,
    );
    ok
}

// ---------------------------------------------------------------- 7

fn criterion_7_wave_positivity() -> bool {
    let start = Instant::now();
    let mut violations = 0;
    for n in [2usize, 3, 4, 6, 8] {
        for a in [rat(1, 4), rat(1, 2), rat(3, 4), int(1)] {
            violations += wave_lambda_violations(n, &a, 64).unwrap();
        }
    }
    let ok = report(
        7,
        "wave positivity",
        violations == 0,
        start.elapsed(),
        30,
        &format!("{violations} negative coefficients"),
    );
    ok
}

// ---------------------------------------------------------------- 8

fn criterion_8_wave_global_bound() -> bool {
    let start = Instant::now();
    let c = ctx(53);
    let init: Vec<Rational> = sine_samples(32, c)
        .iter()
        .map(BinFloat::to_rational)
        .collect();
    let sim = wave_simulate(32, &int(1), &init, c, 512).unwrap();
    let rep = wave_report(&sim);
    let short = wave_simulate(32, &int(1), &init, c, 64).unwrap();
    let identity = wave_identity_check(&short).unwrap();
    let extension = wave_extension_check(&short);
    let p = &rep.summary.params;
    let detail = format!(
        "uniform={} simplified={} rms={} published={} identity={identity} extension={extension}; δ̄⁰={} δ̄¹={} δ̄={}",
        rep.all_ok(),
        rep.summary.checks["simplified_uniform_bound"],
        rep.summary.checks["rms_bound"],
        rep.summary.checks.get("published_constants_bound").map_or("n/a".to_string(), |b| b.to_string()),
        p["delta_bar0"],
        p["delta_bar1"],
        p["delta_bar"],
    );
    let ok = report(
        8,
        "wave global bound",
        rep.passed() && identity && extension,
        start.elapsed(),
        60,
        &detail,
    );
    ok
}

// ---------------------------------------------------------------- 9

const ORDER: usize = 50;
const INSTANCES: usize = 200;

fn rand_q(rng: &mut ChaCha8Rng, lim: i64) -> Rational {
    rat(rng.gen_range(-lim..=lim), rng.gen_range(1..=4))
}

/// Sparse variant used for the differential-equation instances, whose
/// exact solutions otherwise grow too large to check quickly.
fn rand_q_sparse(rng: &mut ChaCha8Rng, lim: i64) -> Rational {
    if rng.gen_bool(0.5) {
        Rational::zero()
    } else {
        rat(rng.gen_range(-lim..=lim), rng.gen_range(1..=2))
    }
}

fn rand_series_sparse(rng: &mut ChaCha8Rng, order: usize) -> TruncSeries<ComplexRational> {
    TruncSeries::new(
        (0..order)
            .map(|_| complex(rand_q_sparse(rng, 3), rand_q_sparse(rng, 3)))
            .collect(),
    )
}

fn rand_nonneg_sparse(rng: &mut ChaCha8Rng, order: usize) -> NonnegSeries {
    NonnegSeries::from_coeffs((0..order).map(|_| rand_q_sparse(rng, 2).abs()).collect()).unwrap()
}

fn rand_series(rng: &mut ChaCha8Rng, order: usize) -> TruncSeries<ComplexRational> {
    TruncSeries::new(
        (0..order)
            .map(|_| complex(rand_q(rng, 9), rand_q(rng, 9)))
            .collect(),
    )
}

fn rand_nonneg(rng: &mut ChaCha8Rng, order: usize, lim: i64) -> NonnegSeries {
    NonnegSeries::from_coeffs(
        (0..order)
            .map(|_| rat(rng.gen_range(0..=lim), rng.gen_range(1..=4)))
            .collect(),
    )
    .unwrap()
}

/// Random majorant of `f`: `⌊f⌋` plus nonnegative slack.
fn rand_majorant(rng: &mut ChaCha8Rng, f: &TruncSeries<ComplexRational>) -> NonnegSeries {
    minmaj(f, 64).add(&rand_nonneg(rng, f.order(), 2))
}

fn maj_series_props(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let f = rand_series(rng, ORDER);
        let g = rand_series(rng, ORDER);
        let fh = rand_majorant(rng, &f);
        let gh = rand_majorant(rng, &g);
        let gamma = complex(rand_q(rng, 5), rand_q(rng, 5));
        let gabs = recur_bound::exactnum::abs_upper(&gamma, 64);
        let n0 = rng.gen_range(0..ORDER);
        let checks = [
            majorizes(&fh.add(&gh), &f.add(&g)),
            majorizes(&fh.scale_abs(&gabs), &f.scale(&gamma)),
            majorizes(&fh.tail_from(n0), &f.tail_from(n0)),
            majorizes(&fh.derive(), &f.derive()),
            majorizes(&fh.integrate(), &f.integrate()),
            majorizes(&fh.mul(&gh), &f.mul(&g)),
        ];
        bad += checks.iter().filter(|&&c| !c).count();
    }
    bad
}

fn maj_linear_props(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let mut a = rand_nonneg(rng, ORDER, 3).into_series().into_coeffs();
        a[0] = Rational::zero();
        let ah = NonnegSeries::from_coeffs(a).unwrap();
        let bh = rand_nonneg(rng, ORDER, 3);
        // y_n a random fraction of the right-hand side bound
        let mut y: Vec<Rational> = Vec::with_capacity(ORDER);
        for n in 0..ORDER {
            let mut rhs = bh.coeff(n as i64);
            for i in 1..=n {
                rhs += ah.coeff(i as i64) * &y[n - i];
            }
            y.push(rhs * rat(rng.gen_range(0..=8), 8));
        }
        let yh = solve_linear_majorant(&ah, &bh, ORDER).unwrap();
        if !majorizes(&yh, &TruncSeries::new(y)) {
            bad += 1;
        }
    }
    bad
}

fn maj_deq_props(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let r = rng.gen_range(1..=3);
        let a: Vec<TruncSeries<ComplexRational>> =
            (0..r).map(|_| rand_series_sparse(rng, 4)).collect();
        let ah: Vec<NonnegSeries> = a
            .iter()
            .map(|s| minmaj(s, 64).add(&rand_nonneg_sparse(rng, 4)))
            .collect();
        let b = rand_series_sparse(rng, ORDER);
        let bh = minmaj(&b, 64).add(&rand_nonneg_sparse(rng, ORDER));
        let yi: Vec<ComplexRational> = (0..r)
            .map(|_| complex(rand_q(rng, 3), rand_q(rng, 3)))
            .collect();
        let yhi: Vec<Rational> = yi
            .iter()
            .map(|z| recur_bound::exactnum::abs_upper(z, 64) + rat(rng.gen_range(0..=2), 2))
            .collect();
        match check_maj_transfer_ode(&a, &ah, &b, &bh, &yi, &yhi, ORDER) {
            Ok(t) if t.holds => {}
            _ => bad += 1,
        }
    }
    bad
}

fn maj_diff_ineq_props(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let mut a1 = rand_nonneg_sparse(rng, ORDER).into_series().into_coeffs();
        a1[0] = Rational::zero();
        let a1 = NonnegSeries::from_coeffs(a1).unwrap();
        let a0 = rand_nonneg_sparse(rng, ORDER);
        let bh = rand_nonneg_sparse(rng, ORDER);
        let y0 = rat(rng.gen_range(0..=4), 2);
        // (n+1) y_{n+1} = frac · (Σ_{j>=1} â1_j (n-j+1) y_{n-j+1} + Σ_j â0_j y_{n-j} + b̂_n)
        let mut y = vec![y0.clone()];
        for n in 0..ORDER - 1 {
            let mut rhs = bh.coeff(n as i64);
            for j in 1..=n {
                rhs += a1.coeff(j as i64) * int((n - j + 1) as i64) * &y[n - j + 1];
            }
            for j in 0..=n {
                rhs += a0.coeff(j as i64) * &y[n - j];
            }
            y.push(rhs * rat(rng.gen_range(0..=8), 8) / int(n as i64 + 1));
        }
        let yh = solve_first_order_maj_ineq(&a1, &a0, &bh, &y0, ORDER).unwrap();
        if !majorizes(&yh, &TruncSeries::new(y)) {
            bad += 1;
        }
    }
    bad
}

fn ipp_props(rng: &mut ChaCha8Rng) -> usize {
    (0..INSTANCES)
        .filter(|_| {
            let f = rand_nonneg(rng, ORDER, 5);
            let g = rand_nonneg(rng, ORDER, 5);
            !ipp_bound_check(&f, &g, ORDER)
        })
        .count()
}

fn theta_props(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let u = pow2(-rng.gen_range(3..=60));
        let p = rng.gen_range(0..=3u64);
        let q = rng.gen_range(0..=3u64);
        let f = rand_nonneg(rng, ORDER, 5);
        let th = theta_hat_series_u(&u, p, q as i64, ORDER);
        if th.hadamard(&f) != hadamard_theta_closed_u(&f, &u, p, q) {
            bad += 1;
        }
        // accumulated relative error of k roundings is within θ̂_k
        let k = rng.gen_range(0..=ORDER as i64);
        let mut prod = Rational::one();
        for _ in 0..k {
            let e = &u * rat(rng.gen_range(-16..=16), 16);
            prod *= Rational::one() + e;
        }
        if (prod - Rational::one()).abs() > theta_hat(&u, k) {
            bad += 1;
        }
    }
    bad
}

fn criterion_9_majorant_calculus() -> bool {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    type Part = fn(&mut ChaCha8Rng) -> usize;
    let suite: [(&str, Part); 6] = [
        ("series (a)-(f)", maj_series_props),
        ("linear", maj_linear_props),
        ("deq", maj_deq_props),
        ("diff ineq", maj_diff_ineq_props),
        ("ipp", ipp_props),
        ("theta", theta_props),
    ];
    let parts: Vec<(&str, usize)> = suite
        .iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let bad = f(&mut rng);
            println!(
                "    {name}: {bad} violations, {:.2}s",
                t.elapsed().as_secs_f64()
            );
            (*name, bad)
        })
        .collect();
    let total: usize = parts.iter().map(|p| p.1).sum();
    let detail = parts
        .iter()
        .map(|(n, b)| format!("{n}: {b}"))
        .collect::<Vec<_>>()
        .join(", ");
    let ok = report(
        9,
        "majorant calculus",
        total == 0,
        start.elapsed(),
        30,
        &format!("violations {detail}"),
    );
    ok
}

/// All criteria run sequentially in one test so that the timings are not
/// distorted by the test harness running them concurrently.
#[test]
fn acceptance_suite() {
    let suite: [fn() -> bool; 9] = [
        criterion_1_containment_fuzz,
        criterion_2_precision_scaling,
        criterion_3_toy_fixed,
        criterion_4_toy_float,
        criterion_5_legendre,
        criterion_6_bernoulli,
        criterion_7_wave_positivity,
        criterion_8_wave_global_bound,
        criterion_9_majorant_calculus,
    ];
    let results: Vec<bool> = suite.iter().map(|f| f()).collect();
    let passed = results.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    assert_eq!(
        passed,
        results.len(),
        "failing criteria: {:?}",
        (1..=9).filter(|i| !results[i - 1]).collect::<Vec<_>>()
    );
}

#[test]
fn oracle_self_check() {
    // exp: y_n = 1/n!
    let p = DiffOperator::from_ints(&[&[-1], &[1]]).unwrap();
    let y = common::ode_taylor(&p, &[real(int(1))], 6);
    assert_eq!(y[5], real(rat(1, 120)));
    let zero = common::partial_sum(&y, &ComplexRational::zero());
    assert_eq!(zero, real(int(1)));
    assert!(zero.re.is_positive());
}
