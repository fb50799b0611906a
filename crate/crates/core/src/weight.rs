//! Exact fixed-point edge weights.
//!
//! A [`Weight`] is a signed 64-bit integer holding the decimal value scaled by
//! 10^6. Inputs may carry at most six fractional digits, so every accepted
//! weight is represented without rounding and every comparison is exact.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of scaled units per whole unit.
pub const SCALE: i64 = 1_000_000;
const FRACTION_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(i64);

impl Weight {
    pub const ZERO: Weight = Weight(0);

    pub const fn from_scaled(scaled: i64) -> Weight {
        Weight(scaled)
    }

    /// Whole units, e.g. `from_units(3)` is the weight `3`.
    pub fn from_units(units: i64) -> Result<Weight> {
        units
            .checked_mul(SCALE)
            .map(Weight)
            .ok_or_else(|| Error::WeightOverflow(format!("{units} does not fit after scaling")))
    }

    pub const fn scaled(self) -> i64 {
        self.0
    }

    pub fn is_whole(self) -> bool {
        self.0 % SCALE == 0
    }

    pub fn abs(self) -> Result<Weight> {
        self.0
            .checked_abs()
            .map(Weight)
            .ok_or_else(|| Error::WeightOverflow("absolute value".into()))
    }

    pub fn checked_add(self, other: Weight) -> Result<Weight> {
        self.0
            .checked_add(other.0)
            .map(Weight)
            .ok_or_else(|| Error::WeightOverflow(format!("{self} + {other}")))
    }

    pub fn checked_sub(self, other: Weight) -> Result<Weight> {
        self.0
            .checked_sub(other.0)
            .map(Weight)
            .ok_or_else(|| Error::WeightOverflow(format!("{self} - {other}")))
    }

    pub fn checked_mul_int(self, factor: i64) -> Result<Weight> {
        self.0
            .checked_mul(factor)
            .map(Weight)
            .ok_or_else(|| Error::WeightOverflow(format!("{self} * {factor}")))
    }

    pub fn checked_sum<I: IntoIterator<Item = Weight>>(items: I) -> Result<Weight> {
        items.into_iter().try_fold(Weight::ZERO, |acc, w| acc.checked_add(w))
    }
}

impl Neg for Weight {
    type Output = Weight;

    /// Panics only for `i64::MIN`, which no instance can hold.
    fn neg(self) -> Weight {
        Weight(-self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let magnitude = self.0.unsigned_abs();
        let whole = magnitude / SCALE as u64;
        let frac = magnitude % SCALE as u64;
        if frac == 0 {
            write!(f, "{sign}{whole}")
        } else {
            let digits = format!("{frac:06}");
            write!(f, "{sign}{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Weight> {
        let malformed = || Error::Parse(format!("malformed weight {s:?}"));
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(malformed());
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        if body.contains('.') && frac.is_empty() {
            return Err(malformed());
        }
        if frac.len() > FRACTION_DIGITS {
            return Err(Error::Parse(format!(
                "weight {s:?} has more than {FRACTION_DIGITS} fractional digits"
            )));
        }
        let overflow = || Error::WeightOverflow(format!("weight {s:?} is not representable"));
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| overflow())?
        };
        let mut frac_scaled: i64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| malformed())?
        };
        for _ in frac.len()..FRACTION_DIGITS {
            frac_scaled *= 10;
        }
        let magnitude = whole
            .checked_mul(SCALE)
            .and_then(|w| w.checked_add(frac_scaled))
            .ok_or_else(overflow)?;
        Ok(Weight(if negative { -magnitude } else { magnitude }))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Max,
}

impl Objective {
    /// Sort key under which smaller is always better.
    pub fn score(self, w: Weight) -> i128 {
        match self {
            Objective::Min => w.0 as i128,
            Objective::Max => -(w.0 as i128),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::Min => "min",
            Objective::Max => "max",
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Objective> {
        match s {
            "min" => Ok(Objective::Min),
            "max" => Ok(Objective::Max),
            other => Err(Error::InvalidParameter(format!("unknown objective {other:?}"))),
        }
    }
}
