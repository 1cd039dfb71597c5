use std::fmt;
use std::ops::Neg;

use serde::de::{self, Deserializer, Visitor};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer extended by the two infinities. Ordered `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Finite(i64),
    PosInf,
}

pub use ExtInt::{Finite, NegInf, PosInf};

impl ExtInt {
    pub const ZERO: ExtInt = Finite(0);

    pub fn finite(self) -> Option<i64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// Returns the finite value or an `Invalid` error naming `what`.
    pub fn expect_finite(self, what: &str) -> Result<i64> {
        self.finite()
            .ok_or_else(|| Error::Invalid(format!("{what} must be finite, got {self}")))
    }

    /// Sum; `+inf + -inf` is rejected.
    pub fn checked_add(self, o: ExtInt) -> Result<ExtInt> {
        match (self, o) {
            (Finite(a), Finite(b)) => a.checked_add(b).map(Finite).ok_or(Error::Overflow),
            (PosInf, NegInf) | (NegInf, PosInf) => {
                Err(Error::Invalid("indeterminate sum of opposite infinities".into()))
            }
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            _ => Ok(NegInf),
        }
    }

    pub fn checked_sub(self, o: ExtInt) -> Result<ExtInt> {
        self.checked_add(-o)
    }

    pub fn add_i64(self, v: i64) -> Result<ExtInt> {
        self.checked_add(Finite(v))
    }
}

impl Neg for ExtInt {
    type Output = ExtInt;
    fn neg(self) -> ExtInt {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            // i64::MIN has no negation; saturate one step to keep the op total
            Finite(v) => Finite(v.checked_neg().unwrap_or(i64::MAX)),
        }
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        Finite(v)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("+inf"),
            Finite(v) => write!(f, "{v}"),
        }
    }
}

impl std::str::FromStr for ExtInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+inf" | "inf" => Ok(PosInf),
            "-inf" => Ok(NegInf),
            t => t
                .parse::<i64>()
                .map(Finite)
                .map_err(|e| Error::Invalid(format!("bad integer '{t}': {e}"))),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(v) => s.serialize_i64(*v),
            NegInf => s.serialize_str("-inf"),
            PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for ExtInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or \"+inf\"/\"-inf\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtInt, E> {
                Ok(Finite(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtInt, E> {
                i64::try_from(v).map(Finite).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtInt, E> {
                v.parse().map_err(|e: Error| E::custom(e.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

/// Ceiling division for a positive divisor.
pub fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Checked sum of a slice.
pub fn checked_sum<'a>(it: impl IntoIterator<Item = &'a i64>) -> Result<i64> {
    it.into_iter()
        .try_fold(0i64, |acc, &v| acc.checked_add(v))
        .ok_or(Error::Overflow)
}
