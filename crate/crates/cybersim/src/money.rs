//! Currency amounts held as exact integer cents.
//!
//! Config files and CLI flags round-trip through [`Money`] so that scenario
//! inputs are bit-identical across platforms; the numerical engine itself
//! works in `f64` dollars.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;

/// A currency amount in integer cents (USD).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(pub i64);

impl Money {
    pub const ZERO: Money = Money(0);

    /// Construct from a dollar amount, rounding to the nearest cent.
    pub fn from_dollars(dollars: f64) -> Money {
        Money((dollars * 100.0).round() as i64)
    }

    pub fn cents(self) -> i64 {
        self.0
    }

    pub fn dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }

    /// Dollar amount in millions, the unit most tables are printed in.
    pub fn millions(self) -> f64 {
        self.0 as f64 / 100.0 / 1.0e6
    }
}

/// Accepted forms: plain numbers (`500000`, `1.5e6`), `k` for thousands
/// (`250k`), and `mn`/`m` for millions (`22.4mn`). A leading `$` is ignored.
impl FromStr for Money {
    type Err = Error;

    fn from_str(s: &str) -> Result<Money, Error> {
        let raw = s.trim();
        let err = |reason: &str| Error::Money {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let body = raw.strip_prefix('$').unwrap_or(raw);
        let lower = body.to_ascii_lowercase();
        let (digits, scale) = if let Some(d) = lower.strip_suffix("mn") {
            (d, 1.0e6)
        } else if let Some(d) = lower.strip_suffix('m') {
            (d, 1.0e6)
        } else if let Some(d) = lower.strip_suffix('k') {
            (d, 1.0e3)
        } else {
            (lower.as_str(), 1.0)
        };
        let value: f64 = digits
            .trim()
            .parse()
            .map_err(|_| err("not a number"))?;
        if !value.is_finite() {
            return Err(err("must be finite"));
        }
        Ok(Money::from_dollars(value * scale))
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.dollars();
        let a = v.abs();
        if a >= 1.0e6 {
            write!(f, "${:.1}mn", v / 1.0e6)
        } else if a >= 1.0e3 {
            write!(f, "${:.1}k", v / 1.0e3)
        } else {
            write!(f, "${:.2}", v)
        }
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        // Serialized as exact cents so JSON reports round-trip losslessly.
        serializer.serialize_i64(self.0)
    }
}

/// Deserialize from either a bare number (dollars) or a suffixed string.
impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Money, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Money;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a dollar amount (number, or string like \"250k\" / \"22.4mn\")")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Money, E> {
                Ok(Money::from_dollars(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Money, E> {
                Ok(Money::from_dollars(v as f64))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Money, E> {
                Ok(Money::from_dollars(v))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Money, E> {
                v.parse().map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}
