//! Exact angles measured in full turns.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational scalar used for every angle and weight.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: Q) -> Q {
    x - x.floor()
}

/// Floor of a rational as an integer.
pub fn floor_int(x: Q) -> i128 {
    x.floor().to_integer()
}

/// Greatest common divisor of two non-negative rationals, as the generator of
/// the subgroup of Q they span.
pub fn rational_gcd(a: Q, b: Q) -> Q {
    let a = a.abs();
    let b = b.abs();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let den = a.denom().lcm(b.denom());
    let na = a.numer() * (den / a.denom());
    let nb = b.numer() * (den / b.denom());
    Q::new(na.gcd(&nb), den)
}

/// An angle `2πt` stored as the reduced fraction `t` in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turn(Q);

impl Turn {
    pub fn new(value: Q) -> Self {
        Turn(frac(value))
    }

    pub fn from_fraction(n: i128, d: i128) -> Self {
        Turn::new(Q::new(n, d))
    }

    pub fn zero() -> Self {
        Turn(Q::zero())
    }

    pub fn value(self) -> Q {
        self.0
    }

    pub fn scale(self, by: Q) -> Self {
        Turn::new(self.0 * by)
    }

    /// Numerator and denominator of the canonical representative.
    pub fn parts(self) -> (i128, i128) {
        (*self.0.numer(), *self.0.denom())
    }

    /// True when the angle is 0 or 1/2.
    pub fn is_half_integer(self) -> bool {
        (self.0 * qi(2)).is_integer()
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        Turn::new(self.0 + rhs.0)
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        Turn::new(self.0 - rhs.0)
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn::new(-self.0)
    }
}

impl Add<Q> for Turn {
    type Output = Turn;
    fn add(self, rhs: Q) -> Turn {
        Turn::new(self.0 + rhs)
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Turn({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTurnError(pub String);

impl fmt::Display for ParseTurnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid angle `{}`: expected a fraction like 1/100", self.0)
    }
}

impl std::error::Error for ParseTurnError {}

impl FromStr for Turn {
    type Err = ParseTurnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseTurnError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i128 = n.parse().map_err(|_| err())?;
        let d: i128 = d.parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        Ok(Turn::from_fraction(n, d))
    }
}

impl Serialize for Turn {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Turn {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats a rational the same way as a turn, without reducing modulo one.
pub fn fmt_q(x: Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serializes a rational as its `n/d` string.
pub fn serialize_q<S: Serializer>(x: &Q, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&fmt_q(*x))
}
