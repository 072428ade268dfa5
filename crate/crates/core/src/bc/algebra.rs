//! Normal-form engine for the rational Bost–Connes Hecke algebra.
//!
//! Every element is a finite ℚ-combination of monomials `μ_a e(r) μ_b*` with
//! `gcd(a, b) = 1`. Products are brought back to this form with the
//! commutation rules
//!
//! ```text
//! e(r) μ_n = μ_n e(nr)          μ_n* e(s) = e(ns) μ_n*
//! μ_b* μ_c = μ_{c'} μ_{b'}*     (g = gcd(b, c), b = g b', c = g c')
//! μ_g e(t) μ_g* = (1/g) Σ_{g u = t} e(u)
//! ```
//!
//! all of which follow from the defining relations together with the
//! action `μ_n ε_k = ε_{nk}`, `e(r) ε_k = ζ_r^k ε_k` on ℓ²(ℕ×); see
//! `docs/bc-normal-form.md`.

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};

use crate::exact::arith::{gcd, lcm};
use crate::exact::precision::real_pow;
use crate::exact::TorsionLabel;
use crate::{Error, Result};

/// The monomial `μ_a e(r) μ_b*`, with `gcd(a, b) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BCMonomial {
    a: u64,
    r: TorsionLabel,
    b: u64,
}

impl BCMonomial {
    pub fn new(a: u64, r: TorsionLabel, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::domain("μ indices must be positive"));
        }
        if gcd(a, b) != 1 {
            return Err(Error::domain(format!("monomial ({a}, {r}, {b}) is not in normal form")));
        }
        Ok(BCMonomial { a, r, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn r(&self) -> TorsionLabel {
        self.r
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn is_diagonal(&self) -> bool {
        self.a == self.b
    }

    /// Product of two monomials as a normal-form combination.
    fn mul(&self, rhs: &BCMonomial) -> Vec<(BCMonomial, Rational)> {
        let g = gcd(self.b, rhs.a);
        let (b1, c1) = (self.b / g, rhs.a / g);
        let big_a = self.a * c1;
        let big_b = b1 * rhs.b;
        let t = self.r.scale(c1 as i64).add(rhs.r.scale(b1 as i64));
        let g2 = gcd(big_a, big_b);
        if g2 == 1 {
            return vec![(BCMonomial { a: big_a, r: t, b: big_b }, Rational::from(1))];
        }
        let w = Rational::from((1, g2));
        t.divide_all(g2)
            .into_iter()
            .map(|u| (BCMonomial { a: big_a / g2, r: u, b: big_b / g2 }, w.clone()))
            .collect()
    }

    fn adjoint(&self) -> BCMonomial {
        BCMonomial { a: self.b, r: self.r.neg(), b: self.a }
    }
}

/// Time-evolution weight `a/b` of a monomial: `σ_t` scales `μ_a e(r) μ_b*`
/// by `(a/b)^{it}`.
pub fn sigma_weight(m: &BCMonomial) -> Rational {
    Rational::from((m.a, m.b))
}

/// A normal-form element: finite map from monomials to nonzero rationals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BCElement {
    terms: BTreeMap<BCMonomial, Rational>,
}

impl BCElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Rational::from(1))
    }

    pub fn scalar(q: Rational) -> Self {
        Self::monomial(BCMonomial { a: 1, r: TorsionLabel::ZERO, b: 1 }, q)
    }

    pub fn monomial(m: BCMonomial, q: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(m, q);
        out
    }

    pub fn mu(n: u64) -> Result<Self> {
        Ok(Self::monomial(BCMonomial::new(n, TorsionLabel::ZERO, 1)?, Rational::from(1)))
    }

    pub fn mu_star(n: u64) -> Result<Self> {
        Ok(Self::monomial(BCMonomial::new(1, TorsionLabel::ZERO, n)?, Rational::from(1)))
    }

    pub fn e(r: TorsionLabel) -> Self {
        Self::monomial(BCMonomial { a: 1, r, b: 1 }, Rational::from(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BCMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: BCMonomial, q: Rational) {
        if q == 0 {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += q;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(*m, q.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, Rational::from(c * q));
        }
        out
    }

    /// Least common multiple of the torsion denominators.
    pub fn level(&self) -> u64 {
        self.terms.keys().fold(1, |acc, m| lcm(acc, m.r.den()))
    }

    /// Largest `a` index among the monomials (1 for the empty element).
    pub fn max_a(&self) -> u64 {
        self.terms.keys().map(|m| m.a).max().unwrap_or(1)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().map(|q| Rational::from(q.abs_ref())).sum()
    }
}

/// Product in the algebra, reduced to normal form.
pub fn bc_mul(x: &BCElement, y: &BCElement) -> BCElement {
    let mut out = BCElement::zero();
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let c = Rational::from(cx * cy);
            for (m, w) in mx.mul(my) {
                out.add_term(m, Rational::from(&c * &w));
            }
        }
    }
    out
}

/// The involution `(μ_a e(r) μ_b*)* = μ_b e(-r) μ_a*`.
pub fn bc_adjoint(x: &BCElement) -> BCElement {
    let mut out = BCElement::zero();
    for (m, c) in &x.terms {
        out.add_term(m.adjoint(), c.clone());
    }
    out
}

/// An element with extended-precision coefficients, such as the image of
/// `σ_{iβ}`.
#[derive(Debug, Clone, Default)]
pub struct WeightedElement {
    terms: BTreeMap<BCMonomial, Float>,
}

impl WeightedElement {
    pub fn terms(&self) -> impl Iterator<Item = (&BCMonomial, &Float)> {
        self.terms.iter()
    }

    pub fn level(&self) -> u64 {
        self.terms.keys().fold(1, |acc, m| lcm(acc, m.r.den()))
    }

    fn add_term(&mut self, m: BCMonomial, w: Float) {
        match self.terms.get_mut(&m) {
            Some(slot) => *slot += w,
            None => {
                self.terms.insert(m, w);
            }
        }
    }
}

/// `σ_{iβ}(x)`: each monomial scaled by `(a/b)^{-β}`.
pub fn bc_sigma_imaginary(x: &BCElement, beta: &Float) -> WeightedElement {
    let neg = Float::with_val(beta.prec(), -beta);
    let mut out = WeightedElement::default();
    for (m, c) in &x.terms {
        let w = real_pow(m.a, &neg) * real_pow(m.b, beta) * c;
        out.add_term(*m, w);
    }
    out
}

/// Product `x · w` of an exact element with a weighted one.
pub fn bc_mul_weighted(x: &BCElement, w: &WeightedElement) -> WeightedElement {
    let mut out = WeightedElement::default();
    for (mw, cw) in &w.terms {
        for (mx, cx) in &x.terms {
            for (m, q) in mx.mul(mw) {
                let coeff = Float::with_val(cw.prec(), cw * &Rational::from(cx * &q));
                out.add_term(m, coeff);
            }
        }
    }
    out
}

/// Action of `u ∈ (ℤ/nℤ)*`: `e(r) ↦ e(ur)`, `μ_a` fixed.
pub fn bc_symmetry(u: i64, n: u64, x: &BCElement) -> Result<BCElement> {
    if n == 0 {
        return Err(Error::domain("symmetry modulus must be positive"));
    }
    if gcd(u.rem_euclid(n as i64) as u64, n) != 1 && n != 1 {
        return Err(Error::domain(format!("{u} is not a unit mod {n}")));
    }
    let mut out = BCElement::zero();
    for (m, c) in &x.terms {
        if !n.is_multiple_of(m.r.den()) {
            return Err(Error::Level { den: m.r.den(), modulus: n });
        }
        out.add_term(BCMonomial { a: m.a, r: m.r.scale(u), b: m.b }, c.clone());
    }
    Ok(out)
}

impl fmt::Display for BCMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.a != 1 {
            parts.push(format!("mu({})", self.a));
        }
        if !self.r.is_zero() {
            parts.push(format!("e({})", self.r));
        }
        if self.b != 1 {
            parts.push(format!("mu_star({})", self.b));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Display for BCElement {
    /// Renders in the same syntax accepted by [`crate::bc::parse_element`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = m.to_string();
            if abs == 1 {
                write!(f, "{mono}")?;
            } else if mono == "1" {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TorsionLabel {
        s.parse().unwrap()
    }

    #[test]
    fn muner_relation() {
        let x = bc_mul(&bc_mul(&BCElement::mu(2).unwrap(), &BCElement::e(t("1/2"))), &BCElement::mu_star(2).unwrap());
        let half = Rational::from((1, 2));
        let expected = BCElement::e(t("1/4")).add(&BCElement::e(t("3/4"))).scale(&half);
        assert_eq!(x, expected);
    }

    #[test]
    fn exponential_relation() {
        let x = bc_mul(&BCElement::e(t("1/3")), &BCElement::e(t("2/3")));
        assert_eq!(x, BCElement::one());
    }

    #[test]
    fn mu_multiplicative() {
        let x = bc_mul(&BCElement::mu(2).unwrap(), &BCElement::mu(3).unwrap());
        assert_eq!(x, BCElement::mu(6).unwrap());
    }

    #[test]
    fn isometries() {
        for n in 1..=20 {
            let x = bc_mul(&BCElement::mu_star(n).unwrap(), &BCElement::mu(n).unwrap());
            assert_eq!(x, BCElement::one(), "n = {n}");
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(bc_adjoint(&BCElement::e(t("1/3"))), BCElement::e(t("2/3")));
        assert_eq!(bc_adjoint(&BCElement::mu(5).unwrap()), BCElement::mu_star(5).unwrap());
        let m = BCMonomial::new(2, t("1/4"), 3).unwrap();
        let adj = bc_adjoint(&BCElement::monomial(m, Rational::from(1)));
        let expected = BCMonomial::new(3, t("3/4"), 2).unwrap();
        assert_eq!(adj, BCElement::monomial(expected, Rational::from(1)));
    }

    #[test]
    fn sigma_weights() {
        let m = BCMonomial::new(2, t("1/3"), 5).unwrap();
        assert_eq!(sigma_weight(&m), Rational::from((2, 5)));
        assert_eq!(sigma_weight(&BCMonomial::new(7, TorsionLabel::ZERO, 1).unwrap()), 7);
        assert_eq!(sigma_weight(&BCMonomial::new(1, t("1/3"), 1).unwrap()), 1);
    }

    #[test]
    fn sigma_imaginary_examples() {
        let beta = Float::with_val(200, 1);
        let w = bc_sigma_imaginary(&BCElement::mu(2).unwrap(), &beta);
        let (_, c) = w.terms().next().unwrap();
        assert!((c.clone() - 0.5f64).abs() < 1e-50);

        let beta = Float::with_val(200, 2);
        let m = BCMonomial::new(2, t("1/2"), 3).unwrap();
        let w = bc_sigma_imaginary(&BCElement::monomial(m, Rational::from(1)), &beta);
        let (_, c) = w.terms().next().unwrap();
        assert!((c.clone() - 2.25f64).abs() < 1e-50);

        let w = bc_sigma_imaginary(&BCElement::e(t("1/3")), &beta);
        let (_, c) = w.terms().next().unwrap();
        assert_eq!(*c, 1);
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(bc_symmetry(3, 4, &BCElement::e(t("1/4"))).unwrap(), BCElement::e(t("3/4")));
        let mu5 = BCElement::mu(5).unwrap();
        assert_eq!(bc_symmetry(2, 3, &mu5).unwrap(), mu5);
        let x = BCElement::e(t("1/6")).add(&BCElement::mu(2).unwrap());
        assert_eq!(bc_symmetry(1, 6, &x).unwrap(), x);
        assert!(matches!(bc_symmetry(1, 4, &BCElement::e(t("1/3"))), Err(Error::Level { .. })));
        assert!(bc_symmetry(2, 4, &BCElement::e(t("1/4"))).is_err());
    }

    #[test]
    fn display() {
        let m = BCMonomial::new(2, t("1/3"), 5).unwrap();
        let x = BCElement::monomial(m, Rational::from(1)).add(&BCElement::e(t("1/4")).scale(&Rational::from((-1, 2))));
        assert_eq!(x.to_string(), "-1/2*e(1/4) + mu(2)*e(1/3)*mu_star(5)");
        assert_eq!(BCElement::one().to_string(), "1");
        assert_eq!(BCElement::zero().to_string(), "0");
    }
}
