//! Exact scalar arithmetic: arbitrary-precision rationals extended with +inf.
//!
//! Distances are plain rationals (always finite); objective values live in
//! `ExtendedRational`, where +inf absorbs addition and compares above every
//! finite value. There is no -inf.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{QvarError, Result};

/// Exact rational scalar used for all distance values.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || QvarError::Parse(format!("invalid rational literal: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| mk_err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| mk_err())?;
        if q.is_zero() {
            return Err(QvarError::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(p, q))
    } else {
        let p = BigInt::from_str(s).map_err(|_| mk_err())?;
        Ok(Rat::from_integer(p))
    }
}

/// Canonical text form: "p" when the denominator is 1, else "p/q".
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A value in Q union {+inf}. The codomain of objectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(Rat),
    Infinity,
}

pub use ExtendedRational::{Finite, Infinity};

impl ExtendedRational {
    pub fn zero() -> Self {
        Finite(Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Finite(rat_int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Finite(r) => Some(r),
            Infinity => None,
        }
    }

    /// Addition; +inf absorbs.
    pub fn add(&self, other: &ExtendedRational) -> ExtendedRational {
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => Infinity,
        }
    }

    pub fn add_rat(&self, other: &Rat) -> ExtendedRational {
        match self {
            Finite(a) => Finite(a + other),
            Infinity => Infinity,
        }
    }

    /// Scaling by a finite rational. `0 * inf` and `c * inf` for c <= 0 are
    /// rejected rather than silently defined.
    pub fn scale(&self, c: &Rat) -> Result<ExtendedRational> {
        match self {
            Finite(a) => Ok(Finite(a * c)),
            Infinity => {
                if c.is_positive() {
                    Ok(Infinity)
                } else {
                    Err(QvarError::Arithmetic(format!(
                        "cannot scale +inf by non-positive factor {}",
                        format_rat(c)
                    )))
                }
            }
        }
    }

    /// Subtraction into Q union {+inf}; `inf - inf` and `finite - inf`
    /// (which would be -inf) are rejected.
    pub fn checked_sub(&self, other: &ExtendedRational) -> Result<ExtendedRational> {
        match (self, other) {
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
            (Infinity, Finite(_)) => Ok(Infinity),
            (_, Infinity) => Err(QvarError::Arithmetic(
                "subtraction of +inf is undefined".into(),
            )),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "+inf" {
            Ok(Infinity)
        } else {
            Ok(Finite(parse_rat(t)?))
        }
    }
}

impl From<Rat> for ExtendedRational {
    fn from(r: Rat) -> Self {
        Finite(r)
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => Ordering::Less,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Infinity, Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(r) => write!(f, "{}", format_rat(r)),
            Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3", "-2", "1/2", "-7/3", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn infinity_absorbs_and_compares_above() {
        let two = ExtendedRational::from_int(2);
        assert_eq!(Infinity.add(&two), Infinity);
        assert_eq!(two.add(&Infinity), Infinity);
        assert!(two < Infinity);
        assert!(Infinity <= Infinity);
    }

    #[test]
    fn infinity_scaling_rules() {
        assert_eq!(Infinity.scale(&rat(1, 2)).unwrap(), Infinity);
        assert!(Infinity.scale(&Rat::zero()).is_err());
        assert!(Infinity.scale(&rat(-1, 1)).is_err());
        assert_eq!(
            ExtendedRational::from_int(3).scale(&rat(1, 3)).unwrap(),
            ExtendedRational::from_int(1)
        );
    }

    #[test]
    fn checked_sub_rejects_negative_infinity() {
        assert!(ExtendedRational::from_int(1).checked_sub(&Infinity).is_err());
        assert!(Infinity.checked_sub(&Infinity).is_err());
        assert_eq!(
            Infinity.checked_sub(&ExtendedRational::from_int(5)).unwrap(),
            Infinity
        );
    }
}
