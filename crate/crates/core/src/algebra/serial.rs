//! JSON forms: `{"terms": [{"i", "j", "num", "den"}]}` for polynomials and
//! `{"num": poly, "den": poly}` for rational functions. Coefficients travel
//! as decimal strings so nothing is lost.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Poly2, RatFn2};
use crate::scalar::Q;

#[derive(Serialize, Deserialize)]
struct TermRepr {
    i: u32,
    j: u32,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: Poly2<Q>,
    den: Poly2<Q>,
}

impl Serialize for Poly2<Q> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // Highest term first, matching the printed form.
        let terms = self
            .terms()
            .rev()
            .map(|(m, c)| TermRepr {
                i: m.i,
                j: m.j,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        PolyRepr { terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly2<Q> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut out = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let n: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let dd: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if dd == BigInt::from(0) {
                return Err(D::Error::custom("zero denominator"));
            }
            out.push((t.i, t.j, Q::new(n, dd)));
        }
        Ok(Poly2::from_terms(out))
    }
}

impl Serialize for RatFn2<Q> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatRepr {
            num: self.numer().clone(),
            den: self.denom().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFn2<Q> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RatRepr::deserialize(d)?;
        RatFn2::new(r.num, r.den).map_err(D::Error::custom)
    }
}
