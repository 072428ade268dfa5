//! Integral ideals of the maximal order in canonical `(m, a, b)` form.

use std::fmt;
use std::str::FromStr;

use super::field::{QuadElement, QuadField};
use crate::exact::arith::sqrt_mod_prime;
use crate::{Error, Result};

/// The ideal `m·(aℤ + θℤ)` with `θ = (b + √D)/2`, `b ≡ D (mod 2)`,
/// `4a | b² − D` and `−a < b ≤ a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    d: i64,
    m: u64,
    a: u64,
    b: i64,
}

/// Lattice `ℤ(A, 0) + ℤ(B, C)` in `(1, ω)` coordinates spanned by `gens`.
fn hnf2(gens: &[(i128, i128)]) -> (i128, i128, i128) {
    let mut rows: Vec<(i128, i128)> = gens.iter().copied().filter(|&(u, v)| u != 0 || v != 0).collect();
    // eliminate the ω column by repeated Euclid on pairs
    let mut pivot: Option<(i128, i128)> = None;
    let mut free_u: i128 = 0;
    for row in rows.drain(..) {
        let mut r = row;
        if let Some(mut p) = pivot.take() {
            while r.1 != 0 {
                let q = p.1.div_euclid(r.1);
                p = (p.0 - q * r.0, p.1 - q * r.1);
                std::mem::swap(&mut p, &mut r);
            }
            free_u = gcd_i128(free_u, r.0);
            pivot = Some(p);
        } else if r.1 == 0 {
            free_u = gcd_i128(free_u, r.0);
        } else {
            pivot = Some(r);
        }
    }
    let (mut b, mut c) = pivot.unwrap_or((0, 0));
    if c < 0 {
        b = -b;
        c = -c;
    }
    let a = free_u.abs();
    if a != 0 {
        b = b.rem_euclid(a);
    }
    (a, b, c)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl QuadIdeal {
    pub fn new(field: QuadField, m: u64, a: u64, b: i64) -> Result<Self> {
        let d = field.discriminant();
        if m == 0 || a == 0 {
            return Err(Error::domain("ideal content and norm must be positive"));
        }
        if (b - d).rem_euclid(2) != 0 || (b as i128 * b as i128 - d as i128).rem_euclid(4 * a as i128) != 0 {
            return Err(Error::domain(format!("({a}, ({b} + √{d})/2) is not an ideal")));
        }
        Ok(Self::canonical(d, m, a, b))
    }

    fn canonical(d: i64, m: u64, a: u64, b: i64) -> Self {
        let two_a = 2 * a as i64;
        let mut b = b.rem_euclid(two_a);
        if b > a as i64 {
            b -= two_a;
        }
        QuadIdeal { d, m, a, b }
    }

    pub fn unit(field: QuadField) -> Self {
        Self::canonical(field.discriminant(), 1, 1, field.delta())
    }

    /// The principal ideal `(n)`.
    pub fn principal_integer(field: QuadField, n: u64) -> Self {
        QuadIdeal { m: n, ..Self::unit(field) }
    }

    /// The principal ideal generated by a nonzero element.
    pub fn principal(field: QuadField, alpha: QuadElement) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::domain("the zero ideal is not supported"));
        }
        let w = field.omega();
        let (u1, v1) = alpha.basis_coords();
        let (u2, v2) = (alpha * w).basis_coords();
        Ok(Self::from_generators(field, &[(u1, v1), (u2, v2)]))
    }

    /// Ideal spanned over ℤ by the given `(1, ω)` coordinate vectors; the
    /// caller guarantees the span is an 𝒪-ideal of full rank.
    fn from_generators(field: QuadField, gens: &[(i128, i128)]) -> Self {
        let (a, b, c) = hnf2(gens);
        debug_assert!(a > 0 && c > 0 && a % c == 0 && b % c == 0);
        let a_prim = (a / c) as u64;
        let b_theta = (2 * (b / c) + field.delta() as i128) as i64;
        Self::canonical(field.discriminant(), c as u64, a_prim, b_theta)
    }

    pub fn field(self) -> QuadField {
        QuadField::new(self.d).expect("ideal carries a valid field")
    }

    pub fn content(self) -> u64 {
        self.m
    }

    pub fn a(self) -> u64 {
        self.a
    }

    pub fn b(self) -> i64 {
        self.b
    }

    pub fn norm(self) -> u64 {
        self.m * self.m * self.a
    }

    pub fn is_unit(self) -> bool {
        self.m == 1 && self.a == 1
    }

    /// ℤ-basis `(m·a, m·θ)`.
    pub fn basis(self) -> [QuadElement; 2] {
        let k = self.field();
        let m = self.m as i128;
        [
            QuadElement::integer(k, m * self.a as i128),
            QuadElement::new(k, m * self.b as i128, m).expect("θ is integral"),
        ]
    }

    pub fn mul(self, other: Self) -> Self {
        assert_eq!(self.d, other.d, "ideals from different fields");
        let k = self.field();
        let [x1, x2] = self.basis();
        let [y1, y2] = other.basis();
        let gens: Vec<(i128, i128)> =
            [x1 * y1, x1 * y2, x2 * y1, x2 * y2].iter().map(|e| e.basis_coords()).collect();
        Self::from_generators(k, &gens)
    }

    pub fn pow(self, e: u32) -> Self {
        let mut acc = Self::unit(self.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn conj(self) -> Self {
        Self::canonical(self.d, self.m, self.a, -self.b)
    }

    pub fn contains(self, x: QuadElement) -> bool {
        let (u, v) = x.basis_coords();
        let m = self.m as i128;
        if u % m != 0 || v % m != 0 {
            return false;
        }
        let (u, k) = (u / m, v / m);
        // θ = t + ω with t = (b − δ)/2
        let t = (self.b as i128 - self.d.rem_euclid(2) as i128) / 2;
        (u - t * k) % self.a as i128 == 0
    }

    /// `self | other`, i.e. `other ⊆ self`.
    pub fn divides(self, other: Self) -> bool {
        other.norm().is_multiple_of(self.norm()) && other.basis().iter().all(|&g| self.contains(g))
    }

    /// `self / other` when `other | self`.
    pub fn exact_div(self, other: Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let prod = self.mul(other.conj());
        let n = other.norm();
        debug_assert_eq!(prod.m % n, 0);
        Some(QuadIdeal { m: prod.m / n, ..prod })
    }

    /// Parses `"(m, a, b)"`, `"m,a,b"` or the two-entry form `"a,b"` (m = 1).
    pub fn parse(field: QuadField, s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| Error::parse(format!("ideal '{s}': {e}"))))
            .collect::<Result<_>>()?;
        let (m, a, b) = match parts[..] {
            [a, b] => (1, a, b),
            [m, a, b] => (m, a, b),
            _ => return Err(Error::parse(format!("ideal '{s}': expected (a, b) or (m, a, b)"))),
        };
        if m <= 0 || a <= 0 {
            return Err(Error::parse(format!("ideal '{s}': m and a must be positive")));
        }
        Self::new(field, m as u64, a as u64, b)
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.a, self.b)
    }
}

/// Splitting type of a rational prime in `𝒪`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal with its residue degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub ideal: QuadIdeal,
    pub p: u64,
    pub degree: u32,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.ideal.norm()
    }
}

pub fn splitting(field: QuadField, p: u64) -> Splitting {
    match field.chi(p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

/// `b ≡ D (mod 2)` with `b² ≡ D (mod 4p)`.
fn root_mod_4p(d: i64, p: u64) -> Option<i64> {
    let delta = d.rem_euclid(2);
    if p == 2 {
        return (-1..=2).find(|&b: &i64| (b - delta) % 2 == 0 && (b * b - d).rem_euclid(8) == 0);
    }
    let s = sqrt_mod_prime(d, p)? as i64;
    Some(if (s - delta) % 2 == 0 { s } else { s - p as i64 })
}

/// Prime ideals above `p`, split primes listed as `(p, b)` then `(p, −b)`.
pub fn prime_ideals_above(field: QuadField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !crate::exact::arith::is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let d = field.discriminant();
    Ok(match splitting(field, p) {
        Splitting::Inert => vec![PrimeIdeal { ideal: QuadIdeal::principal_integer(field, p), p, degree: 2 }],
        kind => {
            let b = root_mod_4p(d, p).expect("split or ramified primes have roots");
            let first = QuadIdeal::canonical(d, 1, p, b);
            let mut out = vec![PrimeIdeal { ideal: first, p, degree: 1 }];
            if kind == Splitting::Split {
                out.push(PrimeIdeal { ideal: first.conj(), p, degree: 1 });
            }
            out
        }
    })
}

/// All prime ideals of norm `≤ bound`, ordered by norm then representation.
pub fn prime_ideals_up_to(field: QuadField, bound: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = crate::exact::arith::primes_up_to(bound)
        .into_iter()
        .flat_map(|p| prime_ideals_above(field, p).expect("p is prime"))
        .filter(|q| q.norm() <= bound)
        .collect();
    out.sort_by_key(|q| (q.norm(), q.ideal));
    out
}

/// Factorization into prime ideals as `(prime, exponent)`.
pub fn factor_ideal(ideal: QuadIdeal) -> Vec<(PrimeIdeal, u32)> {
    let field = ideal.field();
    let mut rest = ideal;
    let mut out = Vec::new();
    for (p, _) in crate::exact::arith::factorize(ideal.norm()) {
        for q in prime_ideals_above(field, p).expect("p is prime") {
            let mut e = 0;
            while let Some(next) = rest.exact_div(q.ideal) {
                rest = next;
                e += 1;
            }
            if e > 0 {
                out.push((q, e));
            }
        }
    }
    debug_assert!(rest.is_unit());
    out
}

impl FromStr for Splitting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(Splitting::Split),
            "inert" => Ok(Splitting::Inert),
            "ramified" => Ok(Splitting::Ramified),
            _ => Err(Error::parse(format!("unknown splitting type '{s}'"))),
        }
    }
}
