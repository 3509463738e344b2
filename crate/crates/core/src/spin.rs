use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A half-integer quantum number stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ZERO: Self = Self(0);
    pub const HALF: Self = Self(1);
    pub const ONE: Self = Self(2);

    pub const fn from_doubled(doubled: i32) -> Self {
        Self(doubled)
    }

    pub const fn from_integer(value: i32) -> Self {
        Self(2 * value)
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Exact square, m².
    pub fn squared(self) -> f64 {
        let d = f64::from(self.0);
        d * d / 4.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn abs(self) -> Self {
        Self(self.0.abs())
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Accepts `7/2`, `-1/2`, `1`, `3.5`.
impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseHalfInteger(s.to_owned());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(Self(2 * num)),
                "2" => Ok(Self(num)),
                _ => Err(bad()),
            }
        } else if let Ok(v) = t.parse::<i32>() {
            Ok(Self(2 * v))
        } else {
            let v: f64 = t.parse().map_err(|_| bad())?;
            let d = 2.0 * v;
            if d.is_finite() && d.fract() == 0.0 && d.abs() < f64::from(i32::MAX) {
                Ok(Self(d as i32))
            } else {
                Err(bad())
            }
        }
    }
}

/// Checks that `m` is an allowed projection of spin `j`.
pub fn check_projection(j: HalfInteger, m: HalfInteger) -> Result<()> {
    if j.doubled() < 0 {
        return Err(Error::InvalidQuantumNumbers(format!("spin j = {j} is negative")));
    }
    if m.abs().doubled() > j.doubled() {
        return Err(Error::InvalidQuantumNumbers(format!("|m| = {} exceeds j = {j}", m.abs())));
    }
    if (j.doubled() - m.doubled()) % 2 != 0 {
        return Err(Error::InvalidQuantumNumbers(format!("j - m must be an integer (j = {j}, m = {m})")));
    }
    Ok(())
}

/// Largest and smallest eigenvalue of the single-particle (j_z)² for spin `j`.
pub fn jz_squared_extremes(j: HalfInteger) -> Result<(f64, f64)> {
    if j.doubled() < 0 {
        return Err(Error::InvalidQuantumNumbers(format!("spin j = {j} is negative")));
    }
    let min = if j.is_integer() { 0.0 } else { 0.25 };
    Ok((j.squared(), min))
}
