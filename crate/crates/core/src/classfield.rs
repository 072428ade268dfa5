//! j-invariants at CM points and Hilbert class polynomials.

use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Complex, Float, Integer};
use serde::Serialize;

use crate::exact::precision::{to_decimal_string, Precision};
use crate::quad::{ClassGroup, QuadForm};
use crate::{Error, Result};

/// `τ = (−b + i√|D|)/(2a)` for a reduced form `(a, b, c)`.
#[derive(Debug, Clone)]
pub struct CMPoint {
    pub form: QuadForm,
    pub tau: Complex,
}

impl CMPoint {
    pub fn new(form: QuadForm, prec_bits: u32) -> Self {
        let d = form.discriminant();
        let re = Float::with_val(prec_bits, -form.b) / (2 * form.a);
        let im = Float::with_val(prec_bits, d.unsigned_abs()).sqrt() / (2 * form.a);
        CMPoint { form, tau: Complex::with_val(prec_bits, (re, im)) }
    }
}

fn divisor_power_sum(n: u64, k: u32) -> Integer {
    let mut s = Integer::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `j(τ) = 1728·E₄³/(E₄³ − E₆²)` from the q-expansions of `E₄` and `E₆`,
/// accurate to about `digits` significant digits.
pub fn j_invariant(tau: &Complex, digits: u32) -> Result<Complex> {
    if *tau.imag() <= 0 {
        return Err(Error::domain("j(τ) needs Im τ > 0"));
    }
    let im = tau.imag().to_f64();
    let two_pi_im = 2.0 * std::f64::consts::PI * im;
    // E₄³ − E₆² = 1728 Δ ≈ 1728 q loses log₂(1/|q|) bits to cancellation
    let guard = (two_pi_im / std::f64::consts::LN_2).ceil() as u32 + 32;
    let prec = Precision::digits(digits + 10).bits() + guard;
    let terms = (f64::from(digits + 10) * std::f64::consts::LN_10 / two_pi_im).ceil() as u64 + 1;
    let tau = Complex::with_val(prec, tau);
    let two_pi_i = Complex::with_val(prec, (0, Float::with_val(prec, Constant::Pi) * 2u32));
    let q = Complex::with_val(prec, tau * two_pi_i).exp();
    let mut qn = Complex::with_val(prec, (1, 0));
    let mut s3 = Complex::new(prec);
    let mut s5 = Complex::new(prec);
    for n in 1..=terms {
        qn *= &q;
        s3 += Complex::with_val(prec, &qn * divisor_power_sum(n, 3));
        s5 += Complex::with_val(prec, &qn * divisor_power_sum(n, 5));
    }
    let e4 = s3 * 240u32 + 1u32;
    let e6 = Complex::with_val(prec, 1) - s5 * 504u32;
    let e4_cubed = Complex::with_val(prec, e4.square_ref()) * &e4;
    let e6_sq = Complex::with_val(prec, e6.square_ref());
    let delta = Complex::with_val(prec, &e4_cubed - e6_sq);
    if delta.is_zero() {
        return Err(Error::Precision("E₄³ − E₆² vanished at working precision".into()));
    }
    Ok(e4_cubed * 1728u32 / delta)
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolynomial(pub Vec<Integer>);

impl IntegerPolynomial {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.0
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(|c| *c == 1)
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if *c == 0 && self.0.len() > 1 {
                continue;
            }
            let (sign, mag) = if *c < 0 { ("-", Integer::from(-c)) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag == 1) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Hilbert class polynomial with the rounding diagnostics.
#[derive(Debug, Clone)]
pub struct HilbertPolynomial {
    pub d: i64,
    pub h: usize,
    pub poly: IntegerPolynomial,
    /// Largest `|c − round(c)|` over real parts.
    pub residual: Float,
    /// Largest imaginary part of a coefficient before rounding.
    pub imag_residual: Float,
    pub precision_used: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertJson {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: usize,
    pub poly: Vec<String>,
    pub residual: String,
    pub precision_used: u32,
}

impl HilbertPolynomial {
    pub fn json(&self) -> HilbertJson {
        HilbertJson {
            d: self.d,
            h: self.h,
            poly: self.poly.0.iter().map(Integer::to_string).collect(),
            residual: to_decimal_string(&self.residual, 6),
            precision_used: self.precision_used,
        }
    }
}

/// `Π_{forms} (x − j(τ_form))` rounded to integers at `digits` of precision.
///
/// Fails with a precision error when the working precision does not cover
/// the size of the coefficients (`Σ log₁₀(1 + |j|)` digits plus a margin),
/// when a coefficient is farther than `10^{-10}` from an integer, or when
/// the product is not real to `10^{-digits/2}`.
pub fn hilbert_class_polynomial(d: i64, digits: u32) -> Result<HilbertPolynomial> {
    let group = ClassGroup::new(d)?;
    let bits = Precision::digits(digits).bits();
    let js: Vec<Complex> = group
        .forms()
        .iter()
        .map(|f| j_invariant(&CMPoint::new(*f, bits).tau, digits))
        .collect::<Result<_>>()?;
    let magnitude: f64 = js.iter().map(|j| (1.0 + j.clone().abs().real().to_f64()).log10()).sum();
    if f64::from(digits) < magnitude + 15.0 {
        return Err(Error::Precision(format!(
            "D = {d}: coefficients have about {magnitude:.0} digits, more than {digits}-digit precision resolves"
        )));
    }
    let work = js.iter().map(|z| z.prec().0).max().unwrap_or(bits);
    let mut coeffs = vec![Complex::with_val(work, (1, 0))];
    for j in &js {
        // multiply by (x − j)
        let mut next = vec![Complex::new(work); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Complex::with_val(work, c * j);
        }
        coeffs = next;
    }
    let mut poly = Vec::with_capacity(coeffs.len());
    let mut residual = Float::new(work);
    let mut imag_residual = Float::new(work);
    for c in &coeffs {
        let (rounded, _) = c.real().to_integer_round(Round::Nearest).expect("finite coefficient");
        let dist = Float::with_val(work, c.real() - &rounded).abs();
        residual = residual.max(&dist);
        imag_residual = imag_residual.max(&Float::with_val(work, c.imag().abs_ref()));
        poly.push(rounded);
    }
    let tol = Float::with_val(work, 1e-10);
    let imag_tol = Float::with_val(work, 10).pow(-(i32::try_from(digits).unwrap_or(i32::MAX) / 2));
    if residual >= tol || imag_residual >= imag_tol {
        return Err(Error::Precision(format!(
            "D = {d}: rounding residual {} / imaginary residue {} too large at {digits} digits",
            to_decimal_string(&residual, 3),
            to_decimal_string(&imag_residual, 3)
        )));
    }
    Ok(HilbertPolynomial { d, h: group.class_number(), poly: IntegerPolynomial(poly), residual, imag_residual, precision_used: digits })
}

/// Starting precision `max(50, 15 + h√|D|/4)` digits.
pub fn initial_precision(d: i64, h: usize) -> u32 {
    let heuristic = 15.0 + h as f64 * (d.unsigned_abs() as f64).sqrt() / 4.0;
    (heuristic.ceil() as u32).max(50)
}

pub const MAX_PRECISION: u32 = 400;

/// Retries [`hilbert_class_polynomial`] with doubled precision, from
/// `start` (or the heuristic) up to [`MAX_PRECISION`] digits.
pub fn hilbert_class_polynomial_auto(d: i64, start: Option<u32>) -> Result<HilbertPolynomial> {
    let h = ClassGroup::new(d)?.class_number();
    let mut digits = start.unwrap_or_else(|| initial_precision(d, h));
    loop {
        match hilbert_class_polynomial(d, digits) {
            Err(Error::Precision(_)) if digits < MAX_PRECISION => {
                digits = (digits * 2).min(MAX_PRECISION);
            }
            other => return other,
        }
    }
}

/// Degree of the class polynomial against `h(D)`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: usize,
    pub degree: usize,
    pub holds: bool,
}

pub fn class_field_degree_check(d: i64) -> Result<DegreeReport> {
    let h = ClassGroup::new(d)?.class_number();
    let p = hilbert_class_polynomial_auto(d, None)?;
    let degree = p.poly.degree();
    Ok(DegreeReport { d, h, degree, holds: degree == h && p.poly.is_monic() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_at_i_and_rho() {
        let i = Complex::with_val(200, (0, 1));
        let j = j_invariant(&i, 50).unwrap();
        assert!((Float::with_val(200, j.real() - 1728u32)).abs() < 1e-40);
        assert!(j.imag().clone().abs() < 1e-40);
        let rho = CMPoint::new(QuadForm::new(1, 1, 1), 200);
        let j = j_invariant(&rho.tau, 50).unwrap();
        assert!(Complex::with_val(200, j.abs_ref()).real().clone() < 1e-40);
        assert!(j_invariant(&Complex::with_val(64, (0, -1)), 20).is_err());
    }

    #[test]
    fn j_163_is_integral_and_stable() {
        let f = QuadForm::new(1, 1, 41);
        let a = j_invariant(&CMPoint::new(f, 300).tau, 60).unwrap();
        let b = j_invariant(&CMPoint::new(f, 400).tau, 80).unwrap();
        let ra = a.real().to_integer().unwrap();
        assert_eq!(ra, b.real().to_integer().unwrap());
        assert_eq!(ra, Integer::from(-640320i64).pow(3));
    }

    #[test]
    fn small_class_polynomials() {
        let p = hilbert_class_polynomial(-4, 50).unwrap();
        assert_eq!(p.poly.0, vec![Integer::from(-1728), Integer::from(1)]);
        let p = hilbert_class_polynomial(-3, 50).unwrap();
        assert_eq!(p.poly.0, vec![Integer::new(), Integer::from(1)]);
        assert_eq!(p.poly.to_string(), "x");
        let p = hilbert_class_polynomial_auto(-15, None).unwrap();
        let expected: Vec<Integer> = ["-121287375", "191025", "1"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(p.poly.0, expected);
        let p = hilbert_class_polynomial_auto(-23, None).unwrap();
        assert_eq!(p.poly.degree(), 3);
        assert!(p.poly.is_monic());
        // frozen after agreement at two precisions (see the stability test)
        let expected: Vec<Integer> = ["12771880859375", "-5151296875", "3491750", "1"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(p.poly.0, expected);
    }

    #[test]
    fn stable_under_extra_precision() {
        for d in [-23i64, -47, -71, -199] {
            let p = hilbert_class_polynomial_auto(d, None).unwrap();
            let q = hilbert_class_polynomial(d, p.precision_used + 20).unwrap();
            assert_eq!(p.poly, q.poly, "D = {d}");
        }
    }

    #[test]
    fn class_number_one_is_linear() {
        for d in [-3i64, -4, -7, -8, -11, -19, -43, -67, -163] {
            let r = class_field_degree_check(d).unwrap();
            assert!(r.holds && r.degree == 1, "D = {d}");
        }
        let r = class_field_degree_check(-15).unwrap();
        assert_eq!(r.degree, 2);
    }
}
