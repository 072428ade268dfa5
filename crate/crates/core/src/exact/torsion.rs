use std::fmt;
use std::str::FromStr;

use rug::Rational;

use super::arith::gcd;
use crate::{Error, Result};

/// An element `num/den` of ℚ/ℤ in lowest terms with `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionLabel {
    num: u64,
    den: u64,
}

impl TorsionLabel {
    pub const ZERO: TorsionLabel = TorsionLabel { num: 0, den: 1 };

    /// Reduces `num/den` modulo 1 and to lowest terms.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("torsion label with zero denominator"));
        }
        let r = num.rem_euclid(den as i64) as u64;
        Ok(Self::reduced(r, den))
    }

    fn reduced(num: u64, den: u64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd(num, den);
        TorsionLabel { num: num / g, den: den / g }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Multiplication by an integer in ℚ/ℤ.
    pub fn scale(self, k: i64) -> Self {
        let k = k.rem_euclid(self.den as i64) as u128;
        Self::reduced((k * self.num as u128 % self.den as u128) as u64, self.den)
    }

    pub fn neg(self) -> Self {
        self.scale(-1)
    }

    pub fn add(self, other: Self) -> Self {
        let l = super::arith::lcm(self.den, other.den);
        let n = (self.num as u128 * (l / self.den) as u128 + other.num as u128 * (l / other.den) as u128)
            % l as u128;
        Self::reduced(n as u64, l)
    }

    /// All `s` with `n·s = self` in ℚ/ℤ, in ascending order of representative.
    pub fn divide_all(self, n: u64) -> Vec<TorsionLabel> {
        let den = self.den * n;
        (0..n)
            .map(|j| Self::reduced(self.num + j * self.den, den))
            .collect()
    }

    pub fn to_rational(self) -> Rational {
        Rational::from((self.num, self.den))
    }
}

impl fmt::Display for TorsionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for TorsionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: i64 = n.parse().map_err(|_| Error::parse(format!("bad numerator in '{s}'")))?;
        let den: u64 = d.parse().map_err(|_| Error::parse(format!("bad denominator in '{s}'")))?;
        TorsionLabel::new(num, den)
    }
}
