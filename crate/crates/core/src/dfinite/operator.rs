use num_traits::Zero;
use serde_json::{json, Value};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::exactnum::serde_exact::rational_to_string;
use crate::exactnum::{complex, parse_complex, parse_rational, ComplexRational};

/// `p_r(z) ∂^r + ... + p_1(z) ∂ + p_0(z)` with `p_r(0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    polys: Vec<Poly>,
}

impl DiffOperator {
    pub fn new(polys: Vec<Poly>) -> Result<Self> {
        if polys.len() < 2 {
            return Err(Error::Precondition(
                "operator order must be at least 1".into(),
            ));
        }
        let lead = polys.last().expect("nonempty");
        if lead.is_zero() {
            return Err(Error::Precondition(
                "leading coefficient p_r is zero".into(),
            ));
        }
        if lead.coeff(0).is_zero() {
            return Err(Error::Precondition(
                "p_r(0) = 0: origin is a singular point".into(),
            ));
        }
        Ok(DiffOperator { polys })
    }

    /// Operator from integer coefficient lists, `polys[i]` ascending for `p_i`.
    pub fn from_ints(polys: &[&[i64]]) -> Result<Self> {
        Self::new(polys.iter().map(|p| Poly::from_ints(p)).collect())
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn leading(&self) -> &Poly {
        &self.polys[self.order()]
    }

    /// Parses `{"order": r, "polys": [[c, ...], ...]}`; each coefficient is a
    /// rational string, a `"re,im"` string, a JSON integer, or `{re, im}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("operator file: {m}"));
        let polys = v
            .get("polys")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"polys\" array"))?;
        let parsed: Vec<Poly> = polys
            .iter()
            .map(|p| {
                let cs = p
                    .as_array()
                    .ok_or_else(|| bad("each polynomial must be an array"))?;
                Ok(Poly::new(
                    cs.iter().map(parse_coeff).collect::<Result<_>>()?,
                ))
            })
            .collect::<Result<_>>()?;
        if let Some(r) = v.get("order") {
            let r = r
                .as_u64()
                .ok_or_else(|| bad("\"order\" must be a nonnegative integer"))?;
            if r as usize + 1 != parsed.len() {
                return Err(bad("\"order\" disagrees with the number of polynomials"));
            }
        }
        Self::new(parsed)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "polys": self.polys.iter().map(|p| p.coeffs().iter().map(coeff_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Applies the operator to a truncated series, returning the first
    /// `order - r` coefficients of the image.
    pub fn apply_series(&self, y: &[ComplexRational]) -> Vec<ComplexRational> {
        let r = self.order();
        let len = y.len().saturating_sub(r);
        let mut out = vec![ComplexRational::zero(); len];
        for (i, p) in self.polys.iter().enumerate() {
            // i-th derivative of y
            let d: Vec<ComplexRational> = (0..y.len().saturating_sub(i))
                .map(|n| {
                    let f = crate::series::falling((n + i) as i64, i);
                    &y[n + i] * complex(f, Default::default())
                })
                .collect();
            for (j, c) in p.coeffs().iter().enumerate() {
                for n in j..len {
                    if n - j < d.len() {
                        out[n] = &out[n] + c * &d[n - j];
                    }
                }
            }
        }
        out
    }
}

fn parse_coeff(v: &Value) -> Result<ComplexRational> {
    match v {
        Value::String(s) => parse_complex(s),
        Value::Number(n) => parse_rational(&n.to_string()).map(|q| complex(q, Default::default())),
        Value::Object(_) => {
            let part = |k: &str| {
                v.get(k)
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse(v.to_string()))
                    .and_then(parse_rational)
            };
            Ok(complex(part("re")?, part("im")?))
        }
        other => Err(Error::Parse(other.to_string())),
    }
}

fn coeff_json(c: &ComplexRational) -> Value {
    if c.im.is_zero() {
        Value::String(rational_to_string(&c.re))
    } else {
        json!({"re": rational_to_string(&c.re), "im": rational_to_string(&c.im)})
    }
}

/// `b_0(n) u_n = b_1(n) u_{n-1} + ... + b_s(n) u_{n-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecOperator {
    b: Vec<Poly>,
}

impl RecOperator {
    pub fn new(b: Vec<Poly>) -> Self {
        RecOperator { b }
    }

    /// Recurrence order `s`.
    pub fn order(&self) -> usize {
        self.b.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.b
    }

    pub fn b(&self, i: usize) -> &Poly {
        &self.b[i]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "b": self.b.iter().map(|p| p.coeffs().iter().map(coeff_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Recurrence on the Taylor coefficients of the solutions of `P y = 0`.
///
/// Writes `z^r P = Σ p_{i,j} z^{j+r-i} (z^i ∂^i)` with
/// `z^i ∂^i = θ(θ-1)...(θ-i+1)`, `θ = z∂`. The coefficient of `z^n` of
/// `z^k θ^{\underline i} u` is `(n-k)^{\underline i} u_{n-k}`, so with
/// `c_k(X) = Σ_{j+r-i=k} p_{i,j} X^{\underline i}` one gets `b_0 = c_0` and
/// `b_k(n) = -c_k(n-k)`.
pub fn to_recurrence(p: &DiffOperator) -> RecOperator {
    let r = p.order();
    let s = p
        .polys()
        .iter()
        .enumerate()
        .filter_map(|(i, q)| q.degree().map(|d| d + r - i))
        .max()
        .unwrap_or(0);
    let mut c = vec![Poly::zero(); s + 1];
    for (i, q) in p.polys().iter().enumerate() {
        let fall = Poly::falling(i);
        for (j, pij) in q.coeffs().iter().enumerate() {
            if pij.is_zero() {
                continue;
            }
            let k = j + r - i;
            c[k] = c[k].add(&fall.scale(pij));
        }
    }
    let b = c
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            if k == 0 {
                ck.clone()
            } else {
                ck.shift(-(k as i64)).neg()
            }
        })
        .collect();
    RecOperator::new(b)
}
