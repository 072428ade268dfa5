//! Elementary arithmetic functions on positive integers.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::precision::real_pow;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) ≥ 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = xgcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize: n must be positive");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first() == Some(&(n, 1))
}

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Primes `≤ bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Möbius function μ(n).
pub fn moebius(n: u64) -> i32 {
    let mut sign = 1;
    for (_, k) in factorize(n) {
        if k > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Euler's totient φ(n).
pub fn euler_totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Number of divisors d(n).
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, k)| k as u64 + 1).product()
}

/// Jordan-type function `f_k(n) = Σ_{d|n} μ(d) (n/d)^k` for an integer
/// exponent, computed exactly.
pub fn f_weight_exact(k: i64, n: u64) -> Rational {
    let mut acc = Rational::new();
    for d in divisors(n) {
        let mu = moebius(d);
        if mu == 0 {
            continue;
        }
        let q = Integer::from(n / d);
        let term = if k >= 0 {
            Rational::from(q.pow(k as u32))
        } else {
            Rational::from((Integer::from(1), q.pow((-k) as u32)))
        };
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `f_k(n)` for a real exponent, each power evaluated as `exp(k·ln(n/d))`
/// at the precision of `k`.
pub fn f_weight_real(k: &Float, n: u64) -> Float {
    let mut acc = Float::new(k.prec());
    for d in divisors(n) {
        match moebius(d) {
            0 => {}
            1 => acc += real_pow(n / d, k),
            _ => acc -= real_pow(n / d, k),
        }
    }
    acc
}

/// A value that is exact whenever the inputs allow it.
#[derive(Debug, Clone, PartialEq)]
pub enum ArithValue {
    Exact(Rational),
    Approx(Float),
}

impl ArithValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, ArithValue::Exact(_))
    }

    pub fn to_float(&self, prec_bits: u32) -> Float {
        match self {
            ArithValue::Exact(q) => Float::with_val(prec_bits, q),
            ArithValue::Approx(f) => Float::with_val(prec_bits, f),
        }
    }
}

/// `f_k(n)`: exact when `k` is an integer, otherwise evaluated at the
/// precision carried by `k`.
pub fn f_weight(k: &Float, n: u64) -> ArithValue {
    match integral_value(k) {
        Some(ki) => ArithValue::Exact(f_weight_exact(ki, n)),
        None => ArithValue::Approx(f_weight_real(k, n)),
    }
}

/// `Some(k)` when the float holds an integer of moderate size.
pub(crate) fn integral_value(x: &Float) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    x.to_integer().and_then(|i| i.to_i64()).filter(|v| v.unsigned_abs() < 1 << 20)
}

/// Kronecker symbol `(D/n)`, totally multiplicative in `n`.
pub fn kronecker_symbol(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (D/2) = 1 if D ≡ ±1 mod 8, −1 if D ≡ ±3 mod 8
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && twos % 2 == 1 {
            result = -result;
        }
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i32 {
    assert!(n > 0 && n % 2 == 1, "jacobi: n must be odd and positive");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), when one
/// exists.
pub fn sqrt_mod_prime(a: i64, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulm(b, b);
        }
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// Units of ℤ/nℤ in ascending order.
pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(6), 2);
        assert_eq!(euler_totient(12), 4);
    }

    #[test]
    fn f_weight_examples() {
        assert_eq!(f_weight_exact(0, 2), 0);
        assert_eq!(f_weight_exact(1, 6), 2);
        assert_eq!(f_weight_exact(-1, 2), Rational::from((-1, 2)));
        assert_eq!(f_weight_exact(0, 1), 1);
    }

    #[test]
    fn f_weight_one_is_totient() {
        for n in 1..=10_000u64 {
            assert_eq!(f_weight_exact(1, n), euler_totient(n), "n = {n}");
        }
    }

    #[test]
    fn f_weight_dispatches_on_integrality() {
        let k = Float::with_val(200, -1);
        assert_eq!(f_weight(&k, 2), ArithValue::Exact(Rational::from((-1, 2))));
        let half = Float::with_val(200, 0.5);
        assert!(!f_weight(&half, 2).is_exact());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(-4, 5), 1);
        assert_eq!(kronecker_symbol(-4, 3), -1);
        assert_eq!(kronecker_symbol(-4, 2), 0);
        assert_eq!(kronecker_symbol(-23, 2), 1);
        assert_eq!(kronecker_symbol(-3, 2), -1);
        assert_eq!(kronecker_symbol(-15, 1), 1);
    }

    #[test]
    fn kronecker_periodic_and_multiplicative() {
        for d in [-3i64, -4, -7, -8, -15, -20, -23, -24, -47] {
            let m = d.abs();
            for n in 1..200i64 {
                assert_eq!(kronecker_symbol(d, n), kronecker_symbol(d, n + m));
                for k in 1..30i64 {
                    assert_eq!(
                        kronecker_symbol(d, n * k),
                        kronecker_symbol(d, n) * kronecker_symbol(d, k)
                    );
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in primes_up_to(400).into_iter().skip(1) {
            for a in 0..p {
                if let Some(r) = sqrt_mod_prime(a as i64, p) {
                    assert_eq!(r * r % p, a);
                } else {
                    assert_eq!(jacobi(a as i64, p as i64), -1);
                }
            }
        }
    }

    #[test]
    fn divisors_and_factorization() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisor_count(360), 24);
        assert_eq!(mod_inverse(3, 4), Some(3));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
