//! Exact scalars shared by every module, and their `[num, den]` JSON encoding.

use num_rational::Rational64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub type Rat = Rational64;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Largest integer not exceeding `r`.
pub fn floor(r: Rat) -> i64 {
    r.floor().to_integer()
}

/// Half of an integer as an exact rational.
pub fn half(n: i64) -> Rat {
    Rat::new(n, 2)
}

/// Representative of `r` in `[0, 1)`.
pub fn frac01(r: Rat) -> Rat {
    r - r.floor()
}

/// Parses `"3"`, `"-1/2"` or `"7/4"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            if d == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            Rat::new(n, d)
        }
        None => Rat::from_integer(s.parse().map_err(|_| format!("not a rational: `{s}`"))?),
    };
    Ok(parsed)
}

/// Display wrapper printing integers bare and fractions as `p/q`.
pub struct ShowRat(pub Rat);

impl fmt::Display for ShowRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Rational encoded as a two-element JSON array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPair(pub Rat);

impl Serialize for RatPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [*self.0.numer(), *self.0.denom()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([i64; 2]),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Pair([_, 0]) => Err(D::Error::custom("zero denominator")),
            Repr::Pair([n, den]) => Ok(RatPair(Rat::new(n, den))),
            Repr::Int(n) => Ok(RatPair(Rat::from_integer(n))),
        }
    }
}

pub mod rat_pair {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        RatPair(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        RatPair::deserialize(d).map(|p| p.0)
    }
}

pub mod rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| RatPair(*r)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Ok(Vec::<RatPair>::deserialize(d)?.into_iter().map(|p| p.0).collect())
    }
}

/// JSON value of a rational: bare integer when integral, `[num, den]` otherwise.
pub fn rat_json(r: Rat) -> serde_json::Value {
    if r.is_integer() {
        serde_json::json!(r.numer())
    } else {
        serde_json::json!([r.numer(), r.denom()])
    }
}
