//! Half-integer mode labels.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed half-integer `k ∈ ℤ + ½`, stored as the odd integer `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ModeIndex(i32);

impl TryFrom<f64> for ModeIndex {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::from_f64(v)
    }
}

impl From<ModeIndex> for f64 {
    fn from(k: ModeIndex) -> f64 {
        k.value()
    }
}

impl ModeIndex {
    pub fn from_doubled(twice: i32) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::InvalidArgument(format!("{} is not a half-integer", twice as f64 / 2.0)));
        }
        Ok(Self(twice))
    }

    /// Parses a decimal such as `0.5`, `-1.5`; anything off `ℤ + ½` is rejected.
    pub fn from_f64(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("{value} is not a half-integer")));
        }
        Self::from_doubled(twice.round() as i32)
    }

    /// The `n`-th positive half-integer `n + ½`, counting from zero.
    pub fn positive(n: usize) -> Self {
        Self(2 * n as i32 + 1)
    }

    pub fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn abs(self) -> Self {
        Self(self.0.abs())
    }

    /// Position of `|k|` in `½, 3/2, …`.
    pub fn ordinal(self) -> usize {
        ((self.0.abs() - 1) / 2) as usize
    }

    /// Checks `|k| ≤ width − ½`.
    pub fn check_width(self, width: usize) -> Result<()> {
        if self.ordinal() < width {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange { index: self.value(), width })
        }
    }

    /// `½, 3/2, …, width − ½`.
    pub fn positives(width: usize) -> impl Iterator<Item = ModeIndex> {
        (0..width).map(Self::positive)
    }
}

impl std::ops::Neg for ModeIndex {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 0 {
            write!(f, "-{}/2", -self.0)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
