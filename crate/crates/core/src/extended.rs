//! Extended reals `[-inf, +inf]` without NaN, and closed intervals over them.
//!
//! Arithmetic follows the IEEE conventions that the exponent formulas rely on:
//! `2 / +inf = 0`, `2 / 0+ = +inf`, and `max(x, +inf) = +inf`.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtendedReal(f64);

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal(0.0);
    pub const INFINITY: ExtendedReal = ExtendedReal(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::Domain("extended real cannot be NaN".into()));
        }
        Ok(ExtendedReal(value))
    }

    /// Panics on NaN; for values that are finite or infinite by construction.
    pub fn finite(value: f64) -> Self {
        assert!(!value.is_nan(), "NaN is not an extended real");
        ExtendedReal(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0.0
    }

    /// `c / self` with `c / +inf = 0` and `c / 0 = +inf` for `c > 0`.
    pub fn reciprocal_scaled(self, c: f64) -> ExtendedReal {
        if self.0 == 0.0 {
            ExtendedReal(f64::INFINITY)
        } else {
            ExtendedReal(c / self.0)
        }
    }

    pub fn scale(self, c: f64) -> ExtendedReal {
        if c == 0.0 {
            return ExtendedReal::ZERO;
        }
        ExtendedReal(self.0 * c)
    }

    pub fn max(self, other: ExtendedReal) -> ExtendedReal {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: ExtendedReal) -> ExtendedReal {
        if self.0 <= other.0 {
            self
        } else {
            other
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<ExtendedReal> for f64 {
    fn from(x: ExtendedReal) -> f64 {
        x.0
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            write!(f, "inf")
        } else if self.0 == f64::NEG_INFINITY {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or one of \"inf\", \"-inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtendedReal, E> {
                ExtendedReal::new(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtendedReal, E> {
                match v {
                    "inf" | "+inf" | "infinity" => Ok(ExtendedReal::INFINITY),
                    "-inf" | "-infinity" => Ok(ExtendedReal(f64::NEG_INFINITY)),
                    other => Err(E::custom(format!("unrecognised extended real {other:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Closed interval `[lo, hi]` of extended reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
}

impl Interval {
    pub fn new(lo: ExtendedReal, hi: ExtendedReal) -> Result<Self> {
        if lo.0 > hi.0 {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        let v = ExtendedReal::finite(x);
        Interval { lo: v, hi: v }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.0 <= x && x <= self.hi.0
    }

    /// Image under a nondecreasing map.
    pub fn map_monotone(&self, f: impl Fn(ExtendedReal) -> ExtendedReal) -> Interval {
        Interval {
            lo: f(self.lo),
            hi: f(self.hi),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_conventions() {
        assert_eq!(ExtendedReal::INFINITY.reciprocal_scaled(2.0), ExtendedReal::ZERO);
        assert!(ExtendedReal::ZERO.reciprocal_scaled(2.0).is_infinite());
        assert_eq!(ExtendedReal::finite(4.0).reciprocal_scaled(2.0).value(), 0.5);
        assert!(ExtendedReal::finite(1.0).max(ExtendedReal::INFINITY).is_infinite());
    }

    #[test]
    fn json_round_trip_with_infinity() {
        let iv = Interval::new(ExtendedReal::ZERO, ExtendedReal::INFINITY).unwrap();
        let s = serde_json::to_string(&iv).unwrap();
        assert_eq!(s, r#"{"lo":0.0,"hi":"inf"}"#);
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, iv);
        let int: Interval = serde_json::from_str(r#"{"lo":1,"hi":2}"#).unwrap();
        assert_eq!(int.hi.value(), 2.0);
    }

    #[test]
    fn rejects_nan_and_empty() {
        assert!(ExtendedReal::new(f64::NAN).is_err());
        assert!(Interval::new(ExtendedReal::finite(2.0), ExtendedReal::finite(1.0)).is_err());
        assert!(serde_json::from_str::<ExtendedReal>("\"banana\"").is_err());
    }
}
