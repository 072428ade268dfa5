//! Exact arithmetic in cyclotomic fields ℚ(ζ_n).
//!
//! An element of level `n` is stored in the basis obtained by tensoring the
//! power bases of the prime-power subfields: writing `n = Π q_i` with
//! `q_i = p_i^{k_i}`, the basis elements are `Π ζ_{q_i}^{j_i}` with
//! `0 ≤ j_i < φ(q_i)`. Since `ℚ(ζ_n)` is the compositum of the linearly
//! disjoint fields `ℚ(ζ_{q_i})`, these `φ(n)` products form a basis. Products
//! of basis elements reduce independently in each factor, where
//! `Φ_q(x) = Σ_{i<p} x^{i q/p}` turns an overflowing power into `p - 1`
//! terms, so sparse elements stay sparse even at large levels.
//!
//! Coefficients in the power basis of `ℚ[x]/(Φ_n)` are available through
//! [`CyclotomicNumber::power_basis_coeffs`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use rug::{Complex, Integer, Rational};

use super::arith::{divisors, euler_totient, factorize, gcd, lcm, mod_inverse};
use super::precision::root_of_unity;
use crate::{Error, Result};

#[derive(Debug)]
struct Component {
    p: u64,
    q: u64,
    phi: u64,
    stride: u64,
    /// Inverse of `n/q` modulo `q`.
    cofactor_inv: u64,
}

#[derive(Debug)]
struct LevelInfo {
    n: u64,
    phi: u64,
    comps: Vec<Component>,
}

impl LevelInfo {
    fn new(n: u64) -> Self {
        let mut comps = Vec::new();
        let mut stride = 1;
        for (p, k) in factorize(n) {
            let q = p.pow(k);
            let phi = q / p * (p - 1);
            let cofactor_inv = mod_inverse(((n / q) % q) as i64, q).expect("coprime cofactor");
            comps.push(Component { p, q, phi, stride, cofactor_inv });
            stride *= phi;
        }
        LevelInfo { n, phi: stride, comps }
    }

    fn decode(&self, flat: u64) -> Vec<u64> {
        self.comps.iter().map(|c| (flat / c.stride) % c.phi).collect()
    }

    /// Per-component exponents of `ζ_n^e`.
    fn split_exponent(&self, e: u64) -> Vec<u64> {
        self.comps
            .iter()
            .map(|c| ((e % c.q) as u128 * c.cofactor_inv as u128 % c.q as u128) as u64)
            .collect()
    }

    /// `Σ j_i·(n/q_i) mod n`, the exponent of `ζ_n` for a basis element.
    fn join_exponent(&self, exps: &[u64]) -> u64 {
        self.comps
            .iter()
            .zip(exps)
            .map(|(c, &j)| (j as u128 * (self.n / c.q) as u128 % self.n as u128) as u64)
            .fold(0, |acc, x| (acc + x) % self.n)
    }

    /// Expands `Π ζ_{q_i}^{e_i}` (arbitrary exponents) into signed basis
    /// indices.
    fn expand(&self, exps: &[u64]) -> Vec<(u64, i32)> {
        let mut out = vec![(0u64, 1i32)];
        for (c, &e) in self.comps.iter().zip(exps) {
            let j = e % c.q;
            let pieces: Vec<(u64, i32)> = if j < c.phi {
                vec![(j, 1)]
            } else {
                let step = c.q / c.p;
                let r = j - c.phi;
                (0..c.p - 1).map(|i| (r + i * step, -1)).collect()
            };
            if pieces.len() == 1 {
                let (pj, ps) = pieces[0];
                for item in out.iter_mut() {
                    item.0 += pj * c.stride;
                    item.1 *= ps;
                }
            } else {
                let mut next = Vec::with_capacity(out.len() * pieces.len());
                for &(flat, s) in &out {
                    for &(pj, ps) in &pieces {
                        next.push((flat + pj * c.stride, s * ps));
                    }
                }
                out = next;
            }
        }
        out
    }
}

fn level_info(n: u64) -> Arc<LevelInfo> {
    static LEVELS: OnceLock<RwLock<HashMap<u64, Arc<LevelInfo>>>> = OnceLock::new();
    let table = LEVELS.get_or_init(Default::default);
    if let Some(info) = table.read().expect("level cache poisoned").get(&n) {
        return Arc::clone(info);
    }
    let info = Arc::new(LevelInfo::new(n));
    let mut w = table.write().expect("level cache poisoned");
    Arc::clone(w.entry(n).or_insert(info))
}

/// The `n`-th cyclotomic polynomial, ascending coefficients, computed by
/// dividing `x^n - 1` by `Φ_d` for every proper divisor `d`. Cached per level.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<Integer>> {
    static POLYS: OnceLock<RwLock<HashMap<u64, Arc<Vec<Integer>>>>> = OnceLock::new();
    assert!(n >= 1, "cyclotomic_polynomial: n must be positive");
    let table = POLYS.get_or_init(Default::default);
    if let Some(p) = table.read().expect("poly cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut poly = vec![Integer::ZERO; n as usize + 1];
    poly[0] = Integer::from(-1);
    poly[n as usize] = Integer::from(1);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        poly = div_exact_monic(&poly, &phi_d);
    }
    let poly = Arc::new(poly);
    let mut w = table.write().expect("poly cache poisoned");
    Arc::clone(w.entry(n).or_insert(poly))
}

fn div_exact_monic(num: &[Integer], den: &[Integer]) -> Vec<Integer> {
    let dn = den.len() - 1;
    let mut rem: Vec<Integer> = num.to_vec();
    let mut quot = vec![Integer::ZERO; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= Integer::from(&c * dj);
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| *c == 0), "inexact cyclotomic division");
    quot
}

/// An exact element of ℚ(ζ_n).
#[derive(Clone)]
pub struct CyclotomicNumber {
    level: u64,
    terms: BTreeMap<u64, Rational>,
}

impl CyclotomicNumber {
    pub fn zero(level: u64) -> Self {
        assert!(level >= 1, "cyclotomic level must be positive");
        CyclotomicNumber { level, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::from(1))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut out = Self::zero(1);
        if q != 0 {
            out.terms.insert(0, q);
        }
        out
    }

    /// `ζ_n^a` with `ζ_n = exp(2πi/n)`.
    pub fn root(level: u64, exponent: i64) -> Self {
        let info = level_info(level);
        let e = exponent.rem_euclid(level as i64) as u64;
        let mut out = Self::zero(level);
        for (flat, s) in info.expand(&info.split_exponent(e)) {
            out.add_term(flat, Rational::from(s));
        }
        out
    }

    /// Builds `Σ c_i ζ_n^i` from power-basis coefficients (any length).
    pub fn from_power_basis(level: u64, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(level);
        for (i, c) in coeffs.iter().enumerate() {
            if *c != 0 {
                out += &Self::root(level, i as i64).scale(c);
            }
        }
        out
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> u64 {
        euler_totient(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Number of nonzero basis coefficients.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Dense coefficient vector of length `φ(n)` in the prime-power tensor basis.
    pub fn coeffs(&self) -> Vec<Rational> {
        let mut v = vec![Rational::new(); self.degree() as usize];
        for (k, c) in &self.terms {
            v[*k as usize] = c.clone();
        }
        v
    }

    /// Coefficients of the canonical representative in `ℚ[x]/(Φ_n)`,
    /// length `φ(n)`.
    pub fn power_basis_coeffs(&self) -> Vec<Rational> {
        let info = level_info(self.level);
        let phi_poly = cyclotomic_polynomial(self.level);
        let deg = info.phi as usize;
        let mut acc = vec![Rational::new(); self.level as usize];
        for (k, c) in &self.terms {
            let e = info.join_exponent(&info.decode(*k));
            acc[e as usize] += c;
        }
        // reduce x^e for e ≥ deg using the monic Φ_n
        for e in (deg..acc.len()).rev() {
            let c = std::mem::take(&mut acc[e]);
            if c == 0 {
                continue;
            }
            for (j, pj) in phi_poly.iter().enumerate().take(deg) {
                if *pj != 0 {
                    acc[e - deg + j] -= Rational::from(&c * pj);
                }
            }
        }
        acc.truncate(deg);
        acc
    }

    fn add_term(&mut self, flat: u64, c: Rational) {
        if c == 0 {
            return;
        }
        match self.terms.entry(flat) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the element at a level divisible by the current one.
    pub fn embed(&self, level: u64) -> Self {
        assert!(level.is_multiple_of(self.level), "embed: {} does not divide {}", self.level, level);
        if level == self.level {
            return self.clone();
        }
        let src = level_info(self.level);
        let dst = level_info(level);
        // basis elements map to basis elements: ζ_{p^a}^j = ζ_{p^b}^{j p^{b-a}}
        let map: Vec<(usize, u64)> = src
            .comps
            .iter()
            .map(|c| {
                let idx = dst.comps.iter().position(|d| d.p == c.p).expect("prime of sublevel");
                (idx, dst.comps[idx].q / c.q)
            })
            .collect();
        let mut out = Self::zero(level);
        for (k, c) in &self.terms {
            let exps = src.decode(*k);
            let mut flat = 0;
            for (&j, &(idx, mult)) in exps.iter().zip(&map) {
                flat += j * mult * dst.comps[idx].stride;
            }
            out.terms.insert(flat, c.clone());
        }
        out
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let l = lcm(a.level, b.level);
        (a.embed(l), b.embed(l))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if *q == 0 {
            return Self::zero(self.level);
        }
        let terms = self.terms.iter().map(|(k, c)| (*k, Rational::from(c * q))).collect();
        CyclotomicNumber { level: self.level, terms }
    }

    /// Field automorphism `ζ_n ↦ ζ_n^u`.
    pub fn galois(&self, u: i64) -> Result<Self> {
        let n = self.level;
        let uu = u.rem_euclid(n as i64) as u64;
        if gcd(uu, n) != 1 && n != 1 {
            return Err(Error::domain(format!("Galois exponent {u} is not a unit mod {n}")));
        }
        let info = level_info(n);
        let mut out = Self::zero(n);
        for (k, c) in &self.terms {
            let exps: Vec<u64> = info
                .decode(*k)
                .iter()
                .zip(&info.comps)
                .map(|(&j, comp)| (j as u128 * uu as u128 % comp.q as u128) as u64)
                .collect();
            for (flat, s) in info.expand(&exps) {
                out.add_term(flat, if s > 0 { c.clone() } else { Rational::from(-c) });
            }
        }
        Ok(out)
    }

    /// Complex conjugation, `ζ_n ↦ ζ_n^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Norm to ℚ: the product of all Galois conjugates.
    pub fn norm(&self) -> Rational {
        let n = self.level;
        let mut acc = Self::one();
        for u in super::arith::units_mod(n) {
            acc = &acc * &self.galois(u as i64).expect("unit");
        }
        acc.as_rational().expect("norm lies in ℚ")
    }

    /// Multiplicative inverse via `z^{-1} = Π_{σ ≠ 1} σ(z) / N(z)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Pole("inverse of zero".into()));
        }
        let n = self.level;
        let mut acc = Self::one();
        for u in super::arith::units_mod(n) {
            if u > 1 {
                acc = &acc * &self.galois(u as i64).expect("unit");
            }
        }
        let norm = (&acc * self).as_rational().expect("norm lies in ℚ");
        Ok(acc.scale(&norm.recip()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerical value at `ζ_n = exp(2πi/n)` with `prec_bits` of precision.
    pub fn to_complex(&self, prec_bits: u32) -> Complex {
        let info = level_info(self.level);
        let mut acc = Complex::new(prec_bits);
        for (k, c) in &self.terms {
            let e = info.join_exponent(&info.decode(*k));
            let z = root_of_unity(e as i64, self.level, prec_bits + 8);
            acc += z * c;
        }
        acc
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.terms == other.terms;
        }
        let (a, b) = Self::common(self, other);
        a.terms == b.terms
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Power-basis rendering, e.g. `-1/2*z4^1` with `zN = exp(2πi/N)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.power_basis_coeffs();
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z{}^{i}", self.level)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        let l = lcm(self.level, rhs.level);
        if l != self.level {
            *self = self.embed(l);
        }
        if l != rhs.level {
            for (k, c) in rhs.embed(l).terms {
                self.add_term(k, c);
            }
        } else {
            for (k, c) in &rhs.terms {
                self.add_term(*k, c.clone());
            }
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        self.scale(&Rational::from(-1))
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b);
        let (x, y) = if self.level == rhs.level {
            (self, rhs)
        } else {
            (a, b) = CyclotomicNumber::common(self, rhs);
            (&a, &b)
        };
        let info = level_info(x.level);
        let mut out = CyclotomicNumber::zero(x.level);
        let ydec: Vec<(Vec<u64>, &Rational)> = y.terms.iter().map(|(k, c)| (info.decode(*k), c)).collect();
        for (kx, cx) in &x.terms {
            let ex = info.decode(*kx);
            for (ey, cy) in &ydec {
                let exps: Vec<u64> = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
                let prod = Rational::from(cx * *cy);
                for (flat, s) in info.expand(&exps) {
                    out.add_term(flat, if s > 0 { prod.clone() } else { Rational::from(-&prod) });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let p = cyclotomic_polynomial(12);
        let v: Vec<i64> = p.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 0, -1, 0, 1]);
        let p = cyclotomic_polynomial(1);
        assert_eq!(p.len(), 2);
        assert_eq!(cyclotomic_polynomial(105).len() as u64 - 1, euler_totient(105));
    }

    #[test]
    fn i_squared() {
        let i = CyclotomicNumber::root(4, 1);
        assert_eq!(&i * &i, CyclotomicNumber::from_rational(q(-1, 1)));
    }

    #[test]
    fn galois_on_i() {
        let i = CyclotomicNumber::root(4, 1);
        assert_eq!(i.galois(3).unwrap(), -&i);
        assert!(i.galois(2).is_err());
    }

    #[test]
    fn cube_roots_sum() {
        let s = &CyclotomicNumber::root(3, 1) + &CyclotomicNumber::root(3, 2);
        assert_eq!(s, CyclotomicNumber::from_rational(q(-1, 1)));
    }

    #[test]
    fn mixed_levels() {
        // ζ_4 · ζ_3 = ζ_12^{3+4}
        let prod = &CyclotomicNumber::root(4, 1) * &CyclotomicNumber::root(3, 1);
        assert_eq!(prod, CyclotomicNumber::root(12, 7));
        assert_eq!(CyclotomicNumber::root(6, 2), CyclotomicNumber::root(3, 1));
        assert_eq!(CyclotomicNumber::root(2, 1), CyclotomicNumber::from_rational(q(-1, 1)));
    }

    #[test]
    fn power_basis_roundtrip_small_levels() {
        for n in 1..=30u64 {
            for a in 0..n as i64 {
                let z = CyclotomicNumber::root(n, a);
                let pb = z.power_basis_coeffs();
                assert_eq!(pb.len() as u64, euler_totient(n));
                assert_eq!(CyclotomicNumber::from_power_basis(n, &pb), z, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn inverse_and_norm() {
        let z = &CyclotomicNumber::root(5, 1) - &CyclotomicNumber::one();
        let inv = z.inverse().unwrap();
        assert_eq!(&z * &inv, CyclotomicNumber::one());
        // N(ζ_5 - 1) = Φ_5(1) = 5 up to sign (φ even ⇒ +5)
        assert_eq!(z.norm(), 5);
        assert!(CyclotomicNumber::zero(7).inverse().is_err());
    }

    #[test]
    fn numeric_value() {
        let z = CyclotomicNumber::root(8, 1).scale(&q(2, 1));
        let c = z.to_complex(200);
        let s2 = rug::Float::with_val(200, 2).sqrt();
        assert!((c.real().clone() - &s2).abs() < 1e-55);
        assert!((c.imag().clone() - &s2).abs() < 1e-55);
    }

    #[test]
    fn large_level_stays_sparse() {
        let n = 27720;
        let z = CyclotomicNumber::root(n, 1);
        assert!(z.support_len() <= 480);
        let w = &z * &CyclotomicNumber::root(n, n as i64 - 1);
        assert_eq!(w, CyclotomicNumber::one());
    }

    #[test]
    fn display_uses_power_basis() {
        let i = CyclotomicNumber::root(4, 1).scale(&q(-1, 2));
        assert_eq!(i.to_string(), "-1/2*z4^1");
        assert_eq!(CyclotomicNumber::zero(3).to_string(), "0");
    }
}
