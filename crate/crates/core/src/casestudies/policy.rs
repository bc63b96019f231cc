use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Number of grid points per unit of the error bound used by random draws.
pub const RANDOM_GRID_BITS: u32 = 32;

/// How injected local errors are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorPolicy {
    /// Every local error at its positive extreme.
    WorstCase,
    /// Uniform on a dyadic grid of the admissible interval, seeded.
    Random(u64),
    /// Extreme magnitude, sign matching the error already propagated.
    AdversarialSign,
}

impl ErrorPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorPolicy::WorstCase => "worst",
            ErrorPolicy::Random(_) => "random",
            ErrorPolicy::AdversarialSign => "adversarial",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ErrorPolicy::Random(s) => Some(*s),
            _ => None,
        }
    }

    /// Parses `worst`, `adversarial` or `random` (the latter using `seed`).
    pub fn parse(s: &str, seed: u64) -> Result<Self> {
        match s {
            "worst" | "worst-case" | "worst_case" => Ok(ErrorPolicy::WorstCase),
            "adversarial" | "adversarial-sign" | "adversarial_sign" => {
                Ok(ErrorPolicy::AdversarialSign)
            }
            "random" => Ok(ErrorPolicy::Random(seed)),
            _ => Err(Error::Parse(format!(
                "unknown error policy {s:?} (expected worst, random or adversarial)"
            ))),
        }
    }
}

impl fmt::Display for ErrorPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorPolicy::Random(s) => write!(f, "random(seed={s})"),
            p => f.write_str(p.name()),
        }
    }
}

impl FromStr for ErrorPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ErrorPolicy::parse(s, 0)
    }
}

/// Source of injected errors expressed as integer multiples `k` of
/// `bound / 2^RANDOM_GRID_BITS`, with `|k| <= 2^RANDOM_GRID_BITS`.
pub(crate) struct Injector {
    policy: ErrorPolicy,
    rng: Option<ChaCha8Rng>,
}

impl Injector {
    pub fn new(policy: ErrorPolicy) -> Self {
        let rng = policy.seed().map(ChaCha8Rng::seed_from_u64);
        Injector { policy, rng }
    }

    pub fn grid() -> BigInt {
        BigInt::from(1u64) << RANDOM_GRID_BITS
    }

    /// Next grid multiple; `trend_nonneg` is the sign of the propagated
    /// error, consulted by the adversarial policy.
    pub fn next(&mut self, trend_nonneg: bool) -> BigInt {
        let g = 1i64 << RANDOM_GRID_BITS;
        match self.policy {
            ErrorPolicy::WorstCase => BigInt::from(g),
            ErrorPolicy::AdversarialSign => BigInt::from(if trend_nonneg { g } else { -g }),
            ErrorPolicy::Random(_) => {
                let rng = self.rng.as_mut().expect("seeded");
                BigInt::from(rng.gen_range(-g..=g))
            }
        }
    }

    /// `bound * k / 2^RANDOM_GRID_BITS`.
    pub fn scale(bound: &Rational, k: &BigInt) -> Rational {
        bound * Rational::new(k.clone(), Self::grid())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_determinism() {
        assert_eq!(
            ErrorPolicy::parse("worst", 3).unwrap(),
            ErrorPolicy::WorstCase
        );
        assert_eq!(
            ErrorPolicy::parse("random", 3).unwrap(),
            ErrorPolicy::Random(3)
        );
        assert!(ErrorPolicy::parse("bogus", 0).is_err());
        let mut a = Injector::new(ErrorPolicy::Random(7));
        let mut b = Injector::new(ErrorPolicy::Random(7));
        for _ in 0..20 {
            let x = a.next(true);
            assert_eq!(x, b.next(false));
            assert!(x.magnitude() <= Injector::grid().magnitude());
        }
    }
}
