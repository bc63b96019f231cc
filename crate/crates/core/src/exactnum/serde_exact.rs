//! Serde adapters for exact values.
//!
//! Rationals travel as `"p/q"` strings (`"p"` when integral), complex
//! rationals as `{re, im}`, and [`BinFloat`] as `{mantissa, exponent, t}`
//! with the mantissa as a decimal string.

use num_bigint::BigInt;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{complex, parse_rational, BinFloat, ComplexRational, Rational};

pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `#[serde(with = "rational")]`
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "rational_vec")]`
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rational_to_string).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

/// `#[serde(with = "option_rational")]`
pub mod option_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(rational_to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    #[serde(with = "rational")]
    re: Rational,
    #[serde(with = "rational")]
    im: Rational,
}

/// `#[serde(with = "complex_rational")]`
pub mod complex_rational {
    use super::*;

    pub fn serialize<S: Serializer>(z: &ComplexRational, s: S) -> Result<S::Ok, S::Error> {
        ComplexRepr {
            re: z.re.clone(),
            im: z.im.clone(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexRational, D::Error> {
        let r = ComplexRepr::deserialize(d)?;
        Ok(complex(r.re, r.im))
    }
}

#[derive(Serialize, Deserialize)]
struct BinFloatRepr {
    mantissa: String,
    exponent: i64,
    t: u32,
}

impl Serialize for BinFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BinFloatRepr {
            mantissa: self.mantissa().to_string(),
            exponent: self.exponent(),
            t: self.precision(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinFloat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BinFloatRepr::deserialize(d)?;
        let m: BigInt = r.mantissa.parse().map_err(D::Error::custom)?;
        BinFloat::from_parts(m, r.exponent, r.t).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, FloatContext};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "rational")]
        q: Rational,
        #[serde(with = "complex_rational")]
        z: ComplexRational,
    }

    #[test]
    fn rational_round_trip() {
        let w = Wrap {
            q: rat(-3, 4),
            z: complex(rat(1, 2), rat(5, 1)),
        };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"q":"-3/4","z":{"re":"1/2","im":"5"}}"#);
        let back: Wrap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn binfloat_round_trip() {
        let x = FloatContext::new(3).unwrap().round(&rat(1, 3));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"mantissa":"5","exponent":-4,"t":3}"#);
        let back: BinFloat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn unnormalized_binfloat_rejected() {
        let bad = r#"{"mantissa":"3","exponent":0,"t":3}"#;
        assert!(serde_json::from_str::<BinFloat>(bad).is_err());
    }
}
