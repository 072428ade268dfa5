//! Imaginary quadratic fields `ℚ(√D)` of fundamental discriminant and
//! their integral elements.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::arith::{factorize, kronecker_symbol};
use crate::{Error, Result};

/// `true` for fundamental discriminants (any sign, `D ≠ 0, 1`).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |n: i64| factorize(n.unsigned_abs()).iter().all(|&(_, e)| e == 1);
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Fundamental discriminants `D` with `lo ≤ D < 0`, in decreasing order
/// (`-3, -4, -7, …`).
pub fn negative_fundamental_discriminants(lo: i64) -> Vec<i64> {
    (lo..0).rev().filter(|&d| is_fundamental_discriminant(d)).collect()
}

/// The field `K = ℚ(√D)` with maximal order `𝒪 = ℤ + ℤω`, `ω = (δ + √D)/2`
/// and `δ = D mod 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::domain(format!("D = {d} is not negative; only imaginary quadratic fields are supported")));
        }
        if !is_fundamental_discriminant(d) {
            return Err(Error::domain(format!("D = {d} is not a fundamental discriminant")));
        }
        Ok(QuadField { d })
    }

    pub fn discriminant(self) -> i64 {
        self.d
    }

    pub fn delta(self) -> i64 {
        self.d.rem_euclid(2)
    }

    /// Number of roots of unity in `𝒪`.
    pub fn unit_count(self) -> u32 {
        match self.d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// Kronecker character `χ_D(n)`.
    pub fn chi(self, n: u64) -> i32 {
        kronecker_symbol(self.d, n as i64)
    }

    pub fn omega(self) -> QuadElement {
        QuadElement::new(self, self.delta() as i128, 1).expect("ω is integral")
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// An integral element `(x + y√D)/2` with `x ≡ yD (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElement {
    d: i64,
    x: i128,
    y: i128,
}

impl QuadElement {
    pub fn new(field: QuadField, x: i128, y: i128) -> Result<Self> {
        if (x - y * field.d as i128).rem_euclid(2) != 0 {
            return Err(Error::domain(format!("({x} + {y}√{})/2 is not integral", field.d)));
        }
        Ok(QuadElement { d: field.d, x, y })
    }

    pub fn integer(field: QuadField, n: i128) -> Self {
        QuadElement { d: field.d, x: 2 * n, y: 0 }
    }

    /// `u + vω`.
    pub fn from_basis(field: QuadField, u: i128, v: i128) -> Self {
        QuadElement { d: field.d, x: 2 * u + v * field.delta() as i128, y: v }
    }

    pub fn x(self) -> i128 {
        self.x
    }

    pub fn y(self) -> i128 {
        self.y
    }

    /// Coordinates `(u, v)` in the basis `(1, ω)`.
    pub fn basis_coords(self) -> (i128, i128) {
        let delta = self.d.rem_euclid(2) as i128;
        ((self.x - self.y * delta) / 2, self.y)
    }

    pub fn norm(self) -> i128 {
        (self.x * self.x - self.d as i128 * self.y * self.y) / 4
    }

    pub fn conj(self) -> Self {
        QuadElement { y: -self.y, ..self }
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, k: i128) -> Self {
        QuadElement { x: self.x * k, y: self.y * k, ..self }
    }

    /// `4·Re(u v̄)`, the bilinear form attached to `4·N`.
    pub(crate) fn dot4(self, other: Self) -> i128 {
        self.x * other.x - self.d as i128 * self.y * other.y
    }
}

impl Add for QuadElement {
    type Output = QuadElement;
    fn add(self, o: QuadElement) -> QuadElement {
        QuadElement { x: self.x + o.x, y: self.y + o.y, ..self }
    }
}

impl Sub for QuadElement {
    type Output = QuadElement;
    fn sub(self, o: QuadElement) -> QuadElement {
        QuadElement { x: self.x - o.x, y: self.y - o.y, ..self }
    }
}

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement { x: -self.x, y: -self.y, ..self }
    }
}

impl Mul for QuadElement {
    type Output = QuadElement;
    fn mul(self, o: QuadElement) -> QuadElement {
        let d = self.d as i128;
        QuadElement {
            x: (self.x * o.x + d * self.y * o.y) / 2,
            y: (self.x * o.y + self.y * o.x) / 2,
            ..self
        }
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            return write!(f, "{}", self.x / 2);
        }
        write!(f, "({} + {}*sqrt({}))/2", self.x, self.y, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        let small = negative_fundamental_discriminants(-24);
        assert_eq!(small, vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]);
        assert!(!is_fundamental_discriminant(-12));
        assert!(!is_fundamental_discriminant(-16));
        assert!(QuadField::new(-12).is_err());
        assert!(QuadField::new(5).is_err());
    }

    #[test]
    fn unit_counts() {
        assert_eq!(QuadField::new(-3).unwrap().unit_count(), 6);
        assert_eq!(QuadField::new(-4).unwrap().unit_count(), 4);
        assert_eq!(QuadField::new(-23).unwrap().unit_count(), 2);
    }

    #[test]
    fn element_arithmetic() {
        let k = QuadField::new(-4).unwrap();
        let i = k.omega();
        assert_eq!((i * i).norm(), 1);
        assert_eq!(i * i, QuadElement::integer(k, -1));
        let a = QuadElement::from_basis(k, 2, 1);
        assert_eq!(a.norm(), 5);
        assert_eq!((a * a.conj()), QuadElement::integer(k, 5));
        let k = QuadField::new(-23).unwrap();
        let w = k.omega();
        // ω² = ω - 6
        assert_eq!(w * w, w - QuadElement::integer(k, 6));
        assert_eq!(w.basis_coords(), (0, 1));
    }
}
