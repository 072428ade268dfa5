//! Positive definite binary quadratic forms `ax² + bxy + cy²`.

use std::fmt;

use super::field::{QuadElement, QuadField};
use super::ideal::QuadIdeal;
use crate::exact::arith::xgcd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// Form of discriminant `D` with leading coefficient `a` and middle
    /// coefficient `b`, when `4a | b² − D`.
    pub fn from_ab(d: i64, a: i64, b: i64) -> Option<Self> {
        let num = b as i128 * b as i128 - d as i128;
        if a <= 0 || num % (4 * a as i128) != 0 {
            return None;
        }
        Some(QuadForm { a, b, c: (num / (4 * a as i128)) as i64 })
    }

    pub fn principal(d: i64) -> Self {
        let delta = d.rem_euclid(2);
        QuadForm::from_ab(d, 1, delta).expect("principal form exists")
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a && self.a <= self.c && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn inverse(&self) -> Self {
        QuadForm { b: -self.b, ..*self }.reduce()
    }

    pub fn reduce(&self) -> Self {
        self.reduce_tracked().0
    }

    /// Reduces while tracking the `SL₂(ℤ)` change of variables: returns the
    /// reduced form and the matrix `[[p, q], [r, s]]` with
    /// `f_red(x, y) = f(px + qy, rx + sy)`.
    pub fn reduce_tracked(&self) -> (Self, [[i64; 2]; 2]) {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let mut m = [[1i128, 0], [0, 1]];
        loop {
            if b.abs() > a || b == -a {
                // x ↦ x + ky with b' = b + 2ak in (−a, a]
                let two_a = 2 * a;
                let mut k = (a - b).div_euclid(two_a);
                if b + 2 * a * k <= -a {
                    k += 1;
                }
                c += k * (b + a * k);
                b += 2 * a * k;
                m[0][1] += k * m[0][0];
                m[1][1] += k * m[1][0];
                continue;
            }
            if a > c || (a == c && b < 0) {
                // (x, y) ↦ (−y, x)
                std::mem::swap(&mut a, &mut c);
                b = -b;
                m = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]];
                continue;
            }
            break;
        }
        let f = QuadForm { a: a as i64, b: b as i64, c: c as i64 };
        (f, [[m[0][0] as i64, m[0][1] as i64], [m[1][0] as i64, m[1][1] as i64]])
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// The ideal `aℤ + ((−b + √D)/2)ℤ`.
    pub fn to_ideal(&self, field: QuadField) -> QuadIdeal {
        QuadIdeal::new(field, 1, self.a as u64, -self.b).expect("form of the field discriminant")
    }

    /// Form of the primitive part of an ideal.
    pub fn from_ideal(ideal: QuadIdeal) -> Self {
        let d = ideal.field().discriminant();
        QuadForm::from_ab(d, ideal.a() as i64, -ideal.b()).expect("ideal gives an integral form")
    }
}

/// Gauss composition (classical algorithm, followed by reduction).
pub fn compose(f1: &QuadForm, f2: &QuadForm) -> QuadForm {
    compose_unreduced(f1, f2).reduce()
}

pub fn compose_unreduced(f1: &QuadForm, f2: &QuadForm) -> QuadForm {
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (g, u, _) = xgcd(a2, a1);
        (g, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (g, x, y) = xgcd(s, d);
        (g, x, -y)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    QuadForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }
}

/// Shortest nonzero element of the lattice spanned by `u, v` (Lagrange
/// reduction under the norm form).
pub fn shortest_vector(mut u: QuadElement, mut v: QuadElement) -> QuadElement {
    loop {
        if v.dot4(v) < u.dot4(u) {
            std::mem::swap(&mut u, &mut v);
        }
        let nu = u.dot4(u);
        let dot = u.dot4(v);
        // nearest integer to dot / nu
        let k = (2 * dot + nu).div_euclid(2 * nu);
        if k == 0 {
            return u;
        }
        v = v - u.scale(k);
    }
}

/// A generator of `ideal` when it is principal.
pub fn principal_generator(ideal: QuadIdeal) -> Option<QuadElement> {
    let [g1, g2] = ideal.basis();
    let m = ideal.content() as i128;
    // work in the primitive part, then restore the content
    let short = shortest_vector(
        QuadElement::new(ideal.field(), g1.x() / m, g1.y() / m).expect("integral"),
        QuadElement::new(ideal.field(), g2.x() / m, g2.y() / m).expect("integral"),
    );
    (short.norm() == ideal.a() as i128).then(|| short.scale(m))
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::ideal::prime_ideals_up_to;

    #[test]
    fn reduction_examples() {
        let f = QuadForm::new(2, 3, 4).reduce();
        assert_eq!(f.discriminant(), 9 - 32);
        assert!(f.is_reduced());
        assert_eq!(QuadForm::new(6, 1, 1).reduce(), QuadForm::new(1, 1, 6));
        assert_eq!(QuadForm::new(2, -1, 2).reduce(), QuadForm::new(2, 1, 2));
    }

    #[test]
    fn tracked_reduction_transforms() {
        let f = QuadForm::new(37, 61, 26);
        let (g, m) = f.reduce_tracked();
        assert_eq!(g.discriminant(), f.discriminant());
        assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
        for (x, y) in [(1, 0), (0, 1), (2, -3)] {
            assert_eq!(g.eval(x, y), f.eval(m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y));
        }
    }

    #[test]
    fn composition_matches_ideal_multiplication() {
        for d in [-23i64, -47, -56, -71, -84, -155] {
            let k = QuadField::new(d).unwrap();
            let primes = prime_ideals_up_to(k, 40);
            for p in &primes {
                for q in &primes {
                    let via_ideals = QuadForm::from_ideal(p.ideal.mul(q.ideal)).reduce();
                    let f = QuadForm::from_ideal(p.ideal);
                    let g = QuadForm::from_ideal(q.ideal);
                    let c = compose_unreduced(&f, &g);
                    assert_eq!(c.discriminant(), d);
                    assert_eq!(c.reduce(), via_ideals, "D = {d}, {} * {}", p.ideal, q.ideal);
                }
            }
        }
    }

    #[test]
    fn ideal_form_round_trip() {
        let k = QuadField::new(-23).unwrap();
        let f = QuadForm::new(2, 1, 3);
        assert_eq!(QuadForm::from_ideal(f.to_ideal(k)), f);
    }

    #[test]
    fn generators_of_principal_ideals() {
        let k = QuadField::new(-15).unwrap();
        let seven = QuadIdeal::principal_integer(k, 7);
        assert_eq!(principal_generator(seven).map(|g| g.norm()), Some(49));
        let p2 = prime_ideals_up_to(k, 2)[0].ideal;
        assert_eq!(principal_generator(p2), None);
        let g = principal_generator(p2.mul(p2.conj())).unwrap();
        assert_eq!(g.norm(), 4);
        let alpha = QuadElement::from_basis(k, 3, 5);
        let i = QuadIdeal::principal(k, alpha).unwrap();
        let g = principal_generator(i).unwrap();
        assert_eq!(g.norm(), alpha.norm());
        assert_eq!(QuadIdeal::principal(k, g).unwrap(), i);
    }
}
