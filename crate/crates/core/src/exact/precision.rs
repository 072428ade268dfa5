//! Extended-precision helpers on top of MPFR floats.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::{Error, Result};

/// Extended-precision real value; carries its own working precision.
pub type ExtReal = Float;
/// Extended-precision complex value.
pub type ExtComplex = Complex;

/// Working precision expressed in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;

    pub fn digits(digits: u32) -> Self {
        Precision(digits.max(1))
    }

    /// Default precision, overridden by `QSM_PRECISION` when it holds a
    /// positive integer.
    pub fn from_env() -> Self {
        std::env::var("QSM_PRECISION")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&d| d > 0)
            .map(Precision)
            .unwrap_or_default()
    }

    pub fn decimal_digits(self) -> u32 {
        self.0
    }

    /// Binary precision covering the requested decimal digits plus guard bits.
    pub fn bits(self) -> u32 {
        (f64::from(self.0) * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }

    pub fn plus(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    pub fn real(self, v: impl Into<f64>) -> Float {
        Float::with_val(self.bits(), v.into())
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(Self::DEFAULT_DIGITS)
    }
}

/// Parses a decimal or `p/q` literal at the given precision.
pub fn parse_real(s: &str, prec: Precision) -> Result<Float> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_real(num, prec)?;
        let d = parse_real(den, prec)?;
        if d.is_zero() {
            return Err(Error::parse(format!("zero denominator in '{s}'")));
        }
        return Ok(n / d);
    }
    let parsed = Float::parse(s).map_err(|e| Error::parse(format!("'{s}': {e}")))?;
    Ok(Float::with_val(prec.bits(), parsed))
}

/// `base^exp` computed as `exp(exp·ln(base))` at the precision of `exp`.
pub fn real_pow(base: u64, exp: &Float) -> Float {
    let prec = exp.prec();
    if base == 1 {
        return Float::with_val(prec, 1);
    }
    let ln = Float::with_val(prec, base).ln();
    (ln * exp).exp()
}

/// `base^(-beta)` for a positive integer base.
pub fn inv_pow(base: u64, beta: &Float) -> Float {
    let prec = beta.prec();
    if base == 1 {
        return Float::with_val(prec, 1);
    }
    let ln = Float::with_val(prec, base).ln();
    (-(ln * beta)).exp()
}

/// `k^{-β}` for `k = 1..=cutoff` (index `k - 1`). Only prime powers need
/// `exp`/`ln`; composite `k` reuse `p^{-β}·(k/p)^{-β}`.
pub fn inverse_powers(cutoff: u64, beta: &Float) -> Vec<Float> {
    use rayon::prelude::*;

    let n = cutoff as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let primes: Vec<u64> = (2..=n).filter(|&i| spf[i] as usize == i).map(|i| i as u64).collect();
    let prime_pows: Vec<Float> = primes.par_iter().map(|&p| inv_pow(p, beta)).collect();
    let mut by_prime = vec![None; n + 1];
    for (p, w) in primes.iter().zip(prime_pows) {
        by_prime[*p as usize] = Some(w);
    }
    let mut out: Vec<Float> = Vec::with_capacity(n);
    if n >= 1 {
        out.push(Float::with_val(beta.prec(), 1));
    }
    for k in 2..=n {
        let p = spf[k] as usize;
        let w = if p == k {
            by_prime[k].take().expect("prime weight")
        } else {
            Float::with_val(beta.prec(), &out[p - 1] * &out[k / p - 1])
        };
        out.push(w);
    }
    out
}

/// Decimal digits represented by a binary precision, net of guard bits.
pub fn digits_for_bits(bits: u32) -> u32 {
    ((f64::from(bits.saturating_sub(16))) / std::f64::consts::LOG2_10).floor().max(1.0) as u32
}

/// Integral upper bound `N^{1-β}/(β-1)` for `Σ_{k>N} k^{-β}`.
pub fn zeta_tail_bound(cutoff: u64, beta: &Float) -> Float {
    let prec = beta.prec();
    let one = Float::with_val(prec, 1);
    let exponent = Float::with_val(prec, &one - beta);
    let n = Float::with_val(prec, cutoff);
    n.pow(&exponent) / (Float::with_val(prec, beta - &one))
}

/// `exp(2πi·num/den)` at the given precision.
pub fn root_of_unity(num: i64, den: u64, prec_bits: u32) -> Complex {
    let r = num.rem_euclid(den as i64);
    let angle = Float::with_val(prec_bits, Constant::Pi) * 2u32 * r / den;
    let (s, c) = angle.sin_cos(Float::new(prec_bits));
    Complex::with_val(prec_bits, (c, s))
}

/// Decimal rendering with `digits` significant digits, e.g. `-5.0000e-1`.
pub fn to_decimal_string(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1) as usize))
}

/// Absolute value of a complex float as a float of the same precision.
pub fn complex_abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits_cover_digits() {
        assert!(Precision::digits(50).bits() >= 166);
        assert_eq!(Precision::default().decimal_digits(), 50);
    }

    #[test]
    fn parse_fraction_and_decimal() {
        let p = Precision::digits(40);
        let half = parse_real("1/2", p).unwrap();
        assert_eq!(half, 0.5);
        assert_eq!(parse_real("1.5", p).unwrap(), 1.5);
        assert!(parse_real("x", p).is_err());
        assert!(parse_real("1/0", p).is_err());
    }

    #[test]
    fn real_pow_matches_integer_power() {
        let k = Float::with_val(200, 3);
        let v = real_pow(7, &k);
        assert!((v - 343u32).abs() < 1e-50);
        let b = Float::with_val(200, 2);
        assert!((inv_pow(4, &b) - 0.0625f64).abs() < 1e-50);
    }

    #[test]
    fn inverse_powers_agree_with_direct_evaluation() {
        let beta = Float::with_val(200, 1.7);
        let w = inverse_powers(500, &beta);
        assert_eq!(w.len(), 500);
        for k in [1u64, 2, 12, 97, 360, 500] {
            let direct = inv_pow(k, &beta);
            let rel = Float::with_val(200, &w[k as usize - 1] - &direct).abs() / &direct;
            assert!(rel < 1e-55, "k = {k}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let z = root_of_unity(1, 4, 200);
        assert!(z.real().clone().abs() < 1e-55);
        assert!((z.imag().clone() - 1u32).abs() < 1e-55);
    }

    #[test]
    fn decimal_strings() {
        let x = Float::with_val(100, -0.5);
        let s = to_decimal_string(&x, 5);
        assert!(s.starts_with("-5.0000"), "{s}");
    }
}
