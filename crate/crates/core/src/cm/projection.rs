//! Sums over `𝒥_A`, the multiplicative semigroup generated by a finite set
//! `A` of prime ideals, as exact Euler products; the projection formula for
//! class characters and its decay.

use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use super::lattice::{character_phase, CMFunction};
use crate::exact::arith::integral_value;
use crate::exact::precision::{complex_abs, digits_for_bits, inv_pow, root_of_unity};
use crate::exact::CyclotomicNumber;
use crate::quad::{factor_ideal, prime_ideals_up_to, ClassGroup, PrimeIdeal, QuadIdeal};
use crate::report::StateReport;
use crate::{Error, Result};

/// Value of an Euler product: exact when `β` is an integer.
#[derive(Debug, Clone, PartialEq)]
pub enum EulerValue {
    Exact(CyclotomicNumber),
    Numeric(Complex),
}

impl EulerValue {
    pub fn to_complex(&self, prec_bits: u32) -> Complex {
        match self {
            EulerValue::Exact(c) => c.to_complex(prec_bits),
            EulerValue::Numeric(z) => Complex::with_val(prec_bits, z),
        }
    }

    fn into_report(self, digits: u32) -> StateReport {
        match self {
            EulerValue::Exact(c) => StateReport::exact(c, digits),
            EulerValue::Numeric(z) => {
                let prec = z.prec().0;
                StateReport::numeric(z, Float::new(prec), digits)
            }
        }
    }
}

/// Per-prime arithmetic at either exact or numeric resolution.
enum Ring {
    Exact(i64),
    Numeric(Float),
}

impl Ring {
    fn new(beta: &Float) -> Self {
        match integral_value(beta) {
            Some(k) if k > 0 => Ring::Exact(k),
            _ => Ring::Numeric(beta.clone()),
        }
    }

    fn prec(&self) -> u32 {
        match self {
            Ring::Exact(_) => 128,
            Ring::Numeric(b) => b.prec(),
        }
    }

    /// `n^{-β}`.
    fn q(&self, n: u64) -> EulerValue {
        match self {
            Ring::Exact(k) => {
                let den = rug::Integer::from(n).pow(*k as u32);
                EulerValue::Exact(CyclotomicNumber::from_rational(Rational::from((1, den))))
            }
            Ring::Numeric(b) => EulerValue::Numeric(Complex::with_val(b.prec(), (inv_pow(n, b), 0))),
        }
    }

    fn root(&self, phase: u64, e: u64) -> EulerValue {
        match self {
            Ring::Exact(_) => EulerValue::Exact(CyclotomicNumber::root(e, phase as i64)),
            Ring::Numeric(b) => EulerValue::Numeric(root_of_unity(phase as i64, e, b.prec())),
        }
    }

    fn one(&self) -> EulerValue {
        self.root(0, 1)
    }

    fn mul(&self, x: &EulerValue, y: &EulerValue) -> EulerValue {
        match (x, y) {
            (EulerValue::Exact(a), EulerValue::Exact(b)) => EulerValue::Exact(a * b),
            _ => EulerValue::Numeric(Complex::with_val(self.prec(), x.to_complex(self.prec()) * y.to_complex(self.prec()))),
        }
    }

    fn sub(&self, x: &EulerValue, y: &EulerValue) -> EulerValue {
        match (x, y) {
            (EulerValue::Exact(a), EulerValue::Exact(b)) => EulerValue::Exact(a - b),
            _ => EulerValue::Numeric(Complex::with_val(self.prec(), x.to_complex(self.prec()) - y.to_complex(self.prec()))),
        }
    }

    fn inv(&self, x: &EulerValue) -> Result<EulerValue> {
        match x {
            EulerValue::Exact(a) => Ok(EulerValue::Exact(a.inverse()?)),
            EulerValue::Numeric(z) => {
                if z.is_zero() {
                    return Err(Error::Pole("vanishing Euler factor".into()));
                }
                Ok(EulerValue::Numeric(Complex::with_val(self.prec(), z.recip_ref())))
            }
        }
    }

    fn pow(&self, x: &EulerValue, e: u32) -> EulerValue {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }
}

fn validate_primes(group: &ClassGroup, primes: &[PrimeIdeal]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for p in primes {
        if p.ideal.field() != group.field() {
            return Err(Error::domain("prime ideal from a different field"));
        }
        if !seen.insert(p.ideal) {
            return Err(Error::domain(format!("prime ideal {} listed twice in A", p.ideal)));
        }
    }
    Ok(())
}

/// `Σ_{J ∈ 𝒥_A} f(J⁻¹L, J⁻¹L) n(J)^{-β}` for `f = scalar·e_{J₀}·f_χ`, as
/// `scalar·χ(L)·Π_{P∈A} Σ_{e ≥ v_P(J₀)} (χ̃(P)⁻¹ n(P)^{-β})^e`, each factor a
/// closed geometric series.
pub fn ja_sum(group: &ClassGroup, primes: &[PrimeIdeal], f: &CMFunction, base: usize, beta: &Float) -> Result<EulerValue> {
    validate_primes(group, primes)?;
    if *beta <= 0 {
        return Err(Error::domain(format!("β = {} ≤ 0", beta.to_f64())));
    }
    let ring = Ring::new(beta);
    let e = group.exponent();
    let mut needed: Vec<(PrimeIdeal, u32)> = match f.divisor {
        Some(j0) => factor_ideal(j0),
        None => Vec::new(),
    };
    let mut acc = ring.one();
    for p in primes {
        let c = match f.character {
            Some(chi) => ring.root(character_phase(group, chi, 0, group.ideal_class(p.ideal)), e),
            None => ring.one(),
        };
        let cq = ring.mul(&c, &ring.q(p.norm()));
        let start = match needed.iter().position(|(q, _)| q.ideal == p.ideal) {
            Some(i) => needed.swap_remove(i).1,
            None => 0,
        };
        let denom = ring.sub(&ring.one(), &cq);
        acc = ring.mul(&acc, &ring.mul(&ring.pow(&cq, start), &ring.inv(&denom)?));
    }
    if !needed.is_empty() {
        // J₀ has a prime factor outside A: no J ∈ 𝒥_A is divisible by J₀
        return Ok(match ring {
            Ring::Exact(_) => EulerValue::Exact(CyclotomicNumber::zero(1)),
            Ring::Numeric(ref b) => EulerValue::Numeric(Complex::new(b.prec())),
        });
    }
    let chi_base = match f.character {
        Some(chi) => ring.root(group.character_exponent(chi, base), e),
        None => ring.one(),
    };
    let scalar = match &ring {
        Ring::Exact(_) => EulerValue::Exact(CyclotomicNumber::from_rational(f.scalar.clone())),
        Ring::Numeric(b) => EulerValue::Numeric(Complex::with_val(b.prec(), (Float::with_val(b.prec(), &f.scalar), 0))),
    };
    Ok(ring.mul(&scalar, &ring.mul(&chi_base, &acc)))
}

/// `ζ_{K,A}(β) = Π_{P∈A} (1 − n(P)^{-β})⁻¹`.
pub fn ja_zeta(group: &ClassGroup, primes: &[PrimeIdeal], beta: &Float) -> Result<EulerValue> {
    ja_sum(group, primes, &CMFunction::one(), 0, beta)
}

/// The state restricted to `𝒥_A`: `ja_sum / ja_zeta`.
pub fn ja_state(group: &ClassGroup, primes: &[PrimeIdeal], f: &CMFunction, base: usize, beta: &Float) -> Result<EulerValue> {
    let ring = Ring::new(beta);
    let num = ja_sum(group, primes, f, base, beta)?;
    let z = ja_zeta(group, primes, beta)?;
    Ok(ring.mul(&num, &ring.inv(&z)?))
}

/// Projection formula
/// `χ(L) · Π_{P∈A}(1 − χ̃(P)⁻¹ n(P)^{-β})⁻¹ / Π_{P∈A}(1 − n(P)^{-β})⁻¹`.
pub fn cm_projection(group: &ClassGroup, chi: usize, primes: &[PrimeIdeal], base: usize, beta: &Float) -> Result<StateReport> {
    if chi >= group.character_count() {
        return Err(Error::domain(format!("chi({chi}) out of range")));
    }
    if base >= group.class_number() {
        return Err(Error::domain(format!("base class {base} out of range")));
    }
    let value = ja_state(group, primes, &CMFunction::chi(chi), base, beta)?;
    let a: Vec<String> = primes.iter().map(|p| p.ideal.to_string()).collect();
    Ok(value
        .into_report(digits_for_bits(beta.prec()))
        .with_param("D", group.discriminant())
        .with_param("chi", chi)
        .with_param("A", a.join(" "))
        .with_param("base", group.forms()[base])
        .with_param("beta", beta.to_f64())
        .with_param("constant", "formula"))
}

/// Prime ideals ordered by norm with `χ([P]) ≠ 1`, the first `k` of them.
pub fn qualifying_primes(group: &ClassGroup, chi: usize, k: usize) -> Vec<PrimeIdeal> {
    let mut bound = 64;
    loop {
        let ps: Vec<PrimeIdeal> = prime_ideals_up_to(group.field(), bound)
            .into_iter()
            .filter(|p| group.character_exponent(chi, group.ideal_class(p.ideal)) != 0)
            .take(k)
            .collect();
        if ps.len() == k {
            return ps;
        }
        bound *= 4;
    }
}

/// `|cm_projection|` over `A_j` = first `j` qualifying primes, `j = 0..=k`.
pub fn uniqueness_decay_report(group: &ClassGroup, chi: usize, beta: &Float, k: usize, base: usize) -> Result<Vec<Float>> {
    if chi >= group.character_count() {
        return Err(Error::domain(format!("chi({chi}) out of range")));
    }
    if group.is_trivial_character(chi) {
        return Err(Error::domain("the trivial character projects to a constant; choose a nontrivial χ"));
    }
    let primes = qualifying_primes(group, chi, k);
    (0..=k)
        .map(|j| {
            let r = cm_projection(group, chi, &primes[..j], base, beta)?;
            Ok(complex_abs(&r.complex(beta.prec())))
        })
        .collect()
}

/// Truncated Euler product over all prime ideals of norm `≤ X` for the ratio
/// `φ_{β,L}(f_χ)`, with a bound on the neglected factors.
///
/// For `n(P) > X`, `|log(1 − c n(P)^{-β})⁻¹| ≤ n(P)^{-β}/(1 − X^{-β})`; at
/// most two primes lie above each rational prime, so the two products together
/// miss at most `s = 4 X^{1-β}/((β-1)(1 − X^{-β}))` in log, and the
/// relative error is at most `e^s − 1`.
pub fn character_euler_oracle(group: &ClassGroup, chi: usize, base: usize, beta: &Float, bound: u64) -> Result<(Complex, Float)> {
    if *beta <= 1 {
        return Err(Error::domain("the Euler product needs β > 1"));
    }
    let prec = beta.prec();
    let primes = prime_ideals_up_to(group.field(), bound);
    let e = group.exponent();
    let mut num = Complex::with_val(prec, (1, 0));
    let mut den = Float::with_val(prec, 1);
    for p in &primes {
        let q = inv_pow(p.norm(), beta);
        let c = root_of_unity(character_phase(group, chi, 0, group.ideal_class(p.ideal)) as i64, e, prec);
        num *= Complex::with_val(prec, 1) - c * &q;
        den *= Float::with_val(prec, 1) - q;
    }
    let chi_base = root_of_unity(group.character_exponent(chi, base) as i64, e, prec);
    let value = Complex::with_val(prec, chi_base * den / num);
    let one = Float::with_val(prec, 1);
    let xb = inv_pow(bound, beta);
    let s = crate::exact::precision::zeta_tail_bound(bound, beta) * 4u32 / (one - xb);
    let rel = Float::with_val(prec, s.exp_m1());
    let err = rel * complex_abs(&value);
    Ok((value, err))
}

/// Exact covariance on `𝒥_A` with `J_s ∈ 𝒥_A`: compares
/// `φ_A(θ_s f)` and `n(J_s)^{-β} φ_{A,L_s}(f)`, where
/// `θ_s(e_{J₀} f_χ) = e_{J_s J₀} f_χ` at the shifted base.
pub fn ja_covariance_holds(group: &ClassGroup, primes: &[PrimeIdeal], js: QuadIdeal, f: &CMFunction, base: usize, beta: &Float) -> Result<bool> {
    let ring = Ring::new(beta);
    let shifted = group.mul(base, group.inv(group.ideal_class(js)));
    let pulled = CMFunction { divisor: Some(f.divisor.map_or(js, |j0| js.mul(j0))), ..f.clone() };
    let lhs = ja_state(group, primes, &pulled, base, beta)?;
    let rhs = ring.mul(&ring.q(js.norm()), &ja_state(group, primes, f, shifted, beta)?);
    Ok(match (&lhs, &rhs) {
        (EulerValue::Exact(a), EulerValue::Exact(b)) => a == b,
        _ => {
            let prec = ring.prec();
            let diff = Complex::with_val(prec, lhs.to_complex(prec) - rhs.to_complex(prec));
            complex_abs(&diff) <= Float::with_val(prec, 2f64).pow(-(prec as i32) + 20)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(v: f64) -> Float {
        Float::with_val(128, v)
    }

    #[test]
    fn trivial_character_projects_to_one() {
        let g = ClassGroup::new(-15).unwrap();
        let a = prime_ideals_up_to(g.field(), 30);
        let r = cm_projection(&g, 0, &a, 1, &beta(1.0)).unwrap();
        assert_eq!(r.exact_value(), Some(&CyclotomicNumber::one()));
    }

    #[test]
    fn norm_two_prime_gives_one_third() {
        let g = ClassGroup::new(-15).unwrap();
        let p = prime_ideals_up_to(g.field(), 2)[0];
        assert_eq!(g.character_value(1, g.ideal_class(p.ideal)), CyclotomicNumber::from_rational((-1).into()));
        let r = cm_projection(&g, 1, &[p], 0, &beta(1.0)).unwrap();
        assert_eq!(r.exact_value(), Some(&CyclotomicNumber::from_rational(Rational::from((1, 3)))));
    }

    #[test]
    fn decay_is_strict() {
        for (d, chi) in [(-15i64, 1usize), (-23, 1), (-23, 2)] {
            let g = ClassGroup::new(d).unwrap();
            let m = uniqueness_decay_report(&g, chi, &beta(1.0), 25, 0).unwrap();
            assert_eq!(m[0], 1);
            assert!(m.windows(2).all(|w| w[1] < w[0]));
            assert!(m[25] < 0.1, "D = {d}");
        }
        let g = ClassGroup::new(-15).unwrap();
        assert!(uniqueness_decay_report(&g, 0, &beta(1.0), 3, 0).is_err());
        assert_eq!(uniqueness_decay_report(&g, 1, &beta(1.0), 0, 0).unwrap().len(), 1);
    }

    #[test]
    fn e_j_on_ja_sets_is_exact() {
        let g = ClassGroup::new(-4).unwrap();
        let a = prime_ideals_up_to(g.field(), 20);
        let j0 = a[0].ideal.mul(a[2].ideal);
        let v = ja_state(&g, &a, &CMFunction::e(j0), 0, &beta(2.0)).unwrap();
        let expected = Rational::from((1, rug::Integer::from(j0.norm()).pow(2u32)));
        assert_eq!(v, EulerValue::Exact(CyclotomicNumber::from_rational(expected)));
        let outside = prime_ideals_up_to(g.field(), 40).last().unwrap().ideal;
        let v = ja_state(&g, &a, &CMFunction::e(outside), 0, &beta(2.0)).unwrap();
        assert_eq!(v, EulerValue::Exact(CyclotomicNumber::zero(1)));
    }

    #[test]
    fn ja_covariance_exact() {
        let g = ClassGroup::new(-23).unwrap();
        let a = prime_ideals_up_to(g.field(), 13);
        for p in &a {
            for f in [CMFunction::chi(1), CMFunction::e(a[0].ideal).with_character(2)] {
                for base in 0..3 {
                    assert!(ja_covariance_holds(&g, &a, p.ideal, &f, base, &beta(2.0)).unwrap());
                    assert!(ja_covariance_holds(&g, &a, p.ideal, &f, base, &beta(1.5)).unwrap());
                }
            }
        }
    }

    #[test]
    fn ja_sum_matches_direct_enumeration() {
        // sum the series directly over 𝒥_A members of norm ≤ Y
        let g = ClassGroup::new(-23).unwrap();
        let a = prime_ideals_up_to(g.field(), 7);
        let f = CMFunction::chi(1);
        let b = beta(2.0);
        let exact = ja_sum(&g, &a, &f, 1, &b).unwrap().to_complex(128);
        let mut members = vec![QuadIdeal::unit(g.field())];
        for p in &a {
            let mut next = Vec::new();
            for j in &members {
                let mut cur = *j;
                while cur.norm() <= 10_000_000 {
                    next.push(cur);
                    cur = cur.mul(p.ideal);
                }
            }
            members = next;
        }
        let mut acc = Complex::new(128);
        for j in &members {
            let ph = character_phase(&g, 1, 1, g.ideal_class(*j));
            acc += root_of_unity(ph as i64, g.exponent(), 128) * inv_pow(j.norm(), &b);
        }
        let diff = complex_abs(&Complex::with_val(128, acc - exact));
        assert!(diff < 1e-5, "{}", diff.to_f64());
    }
}
