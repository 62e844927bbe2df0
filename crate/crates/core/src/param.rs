//! The model parameter `x` on the critical line `a = 1 - x, b = 1 + x, c = 2`.

use std::fmt;
use std::str::FromStr;

use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational `x` with `|x| < 1`, always stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalParameter(RBig);

impl RationalParameter {
    pub fn new(x: RBig) -> Result<Self> {
        let (n, d) = (x.numerator(), x.denominator());
        if n.unsigned_abs() >= *d {
            return Err(Error::Domain(format!("|x| must be < 1, got {}", render(&x))));
        }
        Ok(Self(x))
    }

    pub fn from_ratio(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse {
                input: format!("{p}/{q}"),
                reason: "zero denominator".into(),
            });
        }
        Self::new(RBig::from_parts(IBig::from(p), UBig::from(q)))
    }

    pub fn zero() -> Self {
        Self(RBig::ZERO)
    }

    pub fn value(&self) -> &RBig {
        &self.0
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn neg(&self) -> Self {
        Self(-self.0.clone())
    }

    /// Weight `a = 1 - x`.
    pub fn a(&self) -> RBig {
        RBig::ONE - &self.0
    }

    /// Weight `b = 1 + x`.
    pub fn b(&self) -> RBig {
        RBig::ONE + &self.0
    }

    /// `p/q` string, denominator always written.
    pub fn to_pq(&self) -> String {
        render(&self.0)
    }
}

/// Render a rational as `p/q` (denominator always present).
pub fn render(r: &RBig) -> String {
    format!("{}/{}", r.numerator(), r.denominator())
}

/// Parse `p/q`, `p`, or `-p/q` into an exact rational (not range checked).
pub fn parse_rational(s: &str) -> Result<RBig> {
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = IBig::from_str(num).map_err(|_| err("bad numerator"))?;
    let d = IBig::from_str(den).map_err(|_| err("bad denominator"))?;
    if d == IBig::ZERO {
        return Err(err("zero denominator"));
    }
    Ok(RBig::from_parts_signed(n, d))
}

impl FromStr for RationalParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for RationalParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pq())
    }
}

impl Serialize for RationalParameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_pq())
    }
}

impl<'de> Deserialize<'de> for RationalParameter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `RBig` fields as `"p/q"` strings.
pub mod rbig_pq {
    use super::*;

    pub fn serialize<S: Serializer>(r: &RBig, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&render(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RBig, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<RBig>` as a list of `"p/q"` strings.
pub mod rbig_pq_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[RBig], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(render))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<RBig>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let x: RationalParameter = "2/6".parse().unwrap();
        assert_eq!(x.to_pq(), "1/3");
        let y: RationalParameter = "-3/5".parse().unwrap();
        assert_eq!(y.to_pq(), "-3/5");
        let z: RationalParameter = "0".parse().unwrap();
        assert_eq!(z.to_pq(), "0/1");
        let w: RationalParameter = "3/-5".parse().unwrap();
        assert_eq!(w.to_pq(), "-3/5");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!("1/1".parse::<RationalParameter>(), Err(Error::Domain(_))));
        assert!(matches!("-7/5".parse::<RationalParameter>(), Err(Error::Domain(_))));
        assert!(matches!("1/0".parse::<RationalParameter>(), Err(Error::Parse { .. })));
        assert!(matches!("abc".parse::<RationalParameter>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn serde_round_trip() {
        let x: RationalParameter = "9/10".parse().unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"9/10\"");
        let back: RationalParameter = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
