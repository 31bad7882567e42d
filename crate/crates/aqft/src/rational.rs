//! Exact rationals extended by ±∞, used for all region bounds.

use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn to_f64(x: Q) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

/// Parses `"3/10"`, `"-2"`, `"0.15"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let ip: i64 = if int_abs.is_empty() {
            0
        } else {
            int_abs.parse().map_err(|_| format!("bad decimal {s:?}"))?
        };
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let den = 10i64.pow(frac.len() as u32);
        let fp: i64 = if frac.is_empty() { 0 } else { frac.parse().unwrap() };
        let mag = Q::new(ip * den + fp, den);
        return Ok(if neg { -mag } else { mag });
    }
    s.parse::<i64>()
        .map(Q::from_integer)
        .map_err(|_| format!("not a rational: {s:?}"))
}

pub fn fmt_q(x: Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_q(x: Q) -> i64 {
    x.floor().to_integer()
}

pub fn ceil_q(x: Q) -> i64 {
    x.ceil().to_integer()
}

pub fn lcm_denoms<I: IntoIterator<Item = Q>>(xs: I) -> i64 {
    xs.into_iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// A rational or one of the two infinities. Variant order gives the total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Fin(Q),
    PosInf,
}

impl Bound {
    pub fn fin(&self) -> Option<Q> {
        match self {
            Bound::Fin(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Fin(_))
    }

    pub fn neg(self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Fin(x) => Bound::Fin(-x),
        }
    }

    /// Adds a finite offset; infinities absorb it.
    pub fn shift(self, d: Q) -> Bound {
        match self {
            Bound::Fin(x) => Bound::Fin(x + d),
            other => other,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Fin(x) => to_f64(x),
        }
    }

    pub fn max(self, o: Bound) -> Bound {
        std::cmp::max(self, o)
    }

    pub fn min(self, o: Bound) -> Bound {
        std::cmp::min(self, o)
    }

    /// Sum of two bounds; `None` for ∞ + (−∞).
    pub fn add(self, o: Bound) -> Option<Bound> {
        match (self, o) {
            (Bound::Fin(a), Bound::Fin(b)) => Some(Bound::Fin(a + b)),
            (Bound::NegInf, Bound::PosInf) | (Bound::PosInf, Bound::NegInf) => None,
            (Bound::NegInf, _) | (_, Bound::NegInf) => Some(Bound::NegInf),
            _ => Some(Bound::PosInf),
        }
    }
}

impl From<Q> for Bound {
    fn from(x: Q) -> Self {
        Bound::Fin(x)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "inf"),
            Bound::Fin(x) => write!(f, "{}", fmt_q(*x)),
        }
    }
}

impl FromStr for Bound {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(Bound::PosInf),
            "-inf" | "-infinity" => Ok(Bound::NegInf),
            other => parse_q(other).map(Bound::Fin),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct BoundVisitor;

impl Visitor<'_> for BoundVisitor {
    type Value = Bound;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as string (\"3/10\", \"inf\") or a decimal number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Bound, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Bound, E> {
        Ok(Bound::Fin(Q::from_integer(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Bound, E> {
        i64::try_from(v)
            .map(|x| Bound::Fin(Q::from_integer(x)))
            .map_err(E::custom)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Bound, E> {
        if v.is_infinite() {
            return Ok(if v > 0.0 { Bound::PosInf } else { Bound::NegInf });
        }
        // shortest round-trip decimal, then exact parse
        parse_q(&format!("{v:?}")).map(Bound::Fin).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(BoundVisitor)
    }
}

/// Serde helper for plain rationals stored as strings.
pub mod q_serde {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        match Bound::deserialize(d)? {
            Bound::Fin(x) => Ok(x),
            _ => Err(de::Error::custom("expected a finite rational")),
        }
    }
}

pub fn is_zero(x: Q) -> bool {
    x.is_zero()
}

pub fn sign(x: Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_q("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_q("-0.15").unwrap(), q(-3, 20));
        assert_eq!(parse_q(".5").unwrap(), q(1, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert_eq!("-inf".parse::<Bound>().unwrap(), Bound::NegInf);
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn bound_order() {
        assert!(Bound::NegInf < Bound::Fin(qi(-100)));
        assert!(Bound::Fin(qi(100)) < Bound::PosInf);
        assert_eq!(Bound::Fin(q(1, 2)).neg(), Bound::Fin(q(-1, 2)));
    }

    #[test]
    fn serde_round_trip() {
        let b: Bound = serde_json::from_str("0.1").unwrap();
        assert_eq!(b, Bound::Fin(q(1, 10)));
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, "\"1/10\"");
        let back: Bound = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }
}
