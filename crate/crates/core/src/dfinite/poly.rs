use std::fmt;

use num_traits::{One, Zero};

use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{int, real, ComplexRational, Rational};

/// Dense univariate polynomial with complex rational coefficients,
/// stored ascending without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<ComplexRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Poly::new(cs.iter().cloned().map(real).collect())
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| real(int(c))).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexRational) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ComplexRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(ComplexRational::zero)
    }

    pub fn eval(&self, x: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, n: i64) -> ComplexRational {
        self.eval(&real(int(n)))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &ComplexRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ComplexRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    /// `X (X-1) ... (X-k+1)`.
    pub fn falling(k: usize) -> Poly {
        let mut p = Poly::constant(ComplexRational::one());
        for i in 0..k as i64 {
            p = p.mul(&Poly::from_ints(&[-i, 1]));
        }
        p
    }

    /// `p(X + a)`.
    pub fn shift(&self, a: i64) -> Poly {
        let lin = Poly::from_ints(&[a, 1]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `z^d p(1/z)` with `d = deg p`.
    pub fn reversed(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.is_zero())
    }
}

fn fmt_coeff(c: &ComplexRational) -> String {
    if c.im.is_zero() {
        rational_to_string(&c.re)
    } else {
        format!(
            "({}{}{}i)",
            rational_to_string(&c.re),
            if c.im < Rational::zero() { "" } else { "+" },
            rational_to_string(&c.im)
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_coeff(c),
                1 => format!("{}*n", fmt_coeff(c)),
                _ => format!("{}*n^{i}", fmt_coeff(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
