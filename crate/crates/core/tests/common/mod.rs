#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use recur_bound::dfinite::{DiffOperator, Poly};
use recur_bound::exactnum::{int, real, ComplexRational, Rational};

/// Taylor coefficients `y_0..y_{count-1}` of the solution of `P y = 0` with
/// the given initial coefficients, by substituting the series into the
/// differential equation and solving the coefficient of `z^n` for `y_{n+r}`:
/// `Σ_{i,j} p_{ij} (n-j+i)!/(n-j)! y_{n-j+i} = 0`.
pub fn ode_taylor(
    op: &DiffOperator,
    inits: &[ComplexRational],
    count: usize,
) -> Vec<ComplexRational> {
    let r = op.order();
    assert_eq!(inits.len(), r);
    let mut y: Vec<ComplexRational> = inits.to_vec();
    let lead0 = op.leading().coeff(0);
    let mut n = 0usize;
    while y.len() < count {
        let mut acc = ComplexRational::zero();
        for (i, p) in op.polys().iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if (i, j) == (r, 0) || j > n || c.is_zero() {
                    continue;
                }
                let m = n - j;
                let mut f = Rational::one();
                for l in 0..i {
                    f *= int((m + i - l) as i64);
                }
                acc = acc + c * &y[m + i] * real(f);
            }
        }
        let mut fr = Rational::one();
        for l in 0..r {
            fr *= int((n + r - l) as i64);
        }
        y.push(-acc / (lead0.clone() * real(fr)));
        n += 1;
    }
    y.truncate(count);
    y
}

/// `Σ_{n<N} y_n ζ^n`.
pub fn partial_sum(y: &[ComplexRational], zeta: &ComplexRational) -> ComplexRational {
    let mut s = ComplexRational::zero();
    for c in y.iter().rev() {
        s = s * zeta + c;
    }
    s
}

/// Random operator of order `1..=max_order` with integer coefficients in
/// `[-5, 5]`, degrees at most `max_deg` and `p_r(0) != 0`.
pub fn random_operator(rng: &mut ChaCha8Rng, max_order: usize, max_deg: usize) -> DiffOperator {
    let r = rng.gen_range(1..=max_order);
    loop {
        let polys: Vec<Poly> = (0..=r)
            .map(|_| {
                let d = rng.gen_range(0..=max_deg);
                Poly::from_ints(&(0..=d).map(|_| rng.gen_range(-5..=5)).collect::<Vec<i64>>())
            })
            .collect();
        if let Ok(op) = DiffOperator::new(polys) {
            return op;
        }
    }
}
