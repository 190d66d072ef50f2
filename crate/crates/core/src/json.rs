//! Canonical JSON form of polynomials and points.
//!
//! ```json
//! {"n": 2, "extended": false, "terms": [{"coeff": "1/1", "exps": [1, 0, 1]}]}
//! ```
//!
//! Terms are emitted in canonical monomial order and coefficients are always
//! `p/q` strings, so equal polynomials serialize to identical bytes.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, RationalPoint, RingDescriptor};
use crate::rational::Rational;

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: Rational,
    exps: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    n: usize,
    extended: bool,
    terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        let ring = p.ring();
        PolynomialJson {
            n: ring.n,
            extended: ring.extended,
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| TermJson { coeff: c.clone(), exps: m.exponents().to_vec() })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for Polynomial {
    type Error = Error;

    fn try_from(json: PolynomialJson) -> Result<Self> {
        let ring = RingDescriptor { n: json.n, extended: json.extended };
        Polynomial::from_terms(
            ring,
            json.terms.into_iter().map(|t| (Monomial::from_exponents(t.exps), t.coeff)),
        )
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = PolynomialJson::deserialize(deserializer)?;
        Polynomial::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl Polynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl RationalPoint {
    /// Parses a JSON array whose entries are integers or fraction strings,
    /// e.g. `[1, "-3/2", 0]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let Value::Array(items) = value else {
            return Err(Error::Parse(format!("expected a JSON array, got `{text}`")));
        };
        items
            .iter()
            .map(|item| match item {
                Value::Number(num) if num.is_i64() || num.is_u64() => num.to_string().parse(),
                Value::String(s) => s.parse(),
                other => Err(Error::Parse(format!("not an exact rational: {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(RationalPoint::new)
    }
}
