//! Gibbs and KMS states of the BC system, ground states, Galois
//! intertwining and the weight-zero Eisenstein functions `e_{1,a}`.

use std::collections::BTreeMap;

use rug::{Complex, Float, Rational};

use super::algebra::{bc_mul, bc_mul_weighted, bc_sigma_imaginary, bc_symmetry, BCElement, WeightedElement};
use super::rep::{SymmetryClass, TruncatedRep};
use crate::exact::arith::{euler_totient, f_weight, units_mod, ArithValue};
use crate::exact::precision::{complex_abs, digits_for_bits, inverse_powers, root_of_unity, zeta_tail_bound};
use crate::exact::{CyclotomicNumber, TorsionLabel};
use crate::report::StateReport;
use crate::{Error, Result};

/// Truncated partition function `Z_N(β) = Σ_{k≤N} k^{-β}` of the
/// Hamiltonian `H ε_k = log k · ε_k`, with the Boltzmann weights kept for
/// trace evaluations.
#[derive(Debug, Clone)]
pub struct PartitionFunction {
    beta: Float,
    weights: Vec<Float>,
    z: Float,
}

impl PartitionFunction {
    /// Requires `β > 1` (the trace diverges otherwise).
    pub fn new(beta: &Float, cutoff: u64) -> Result<Self> {
        if *beta <= 1 {
            return Err(Error::domain(format!(
                "β = {} ≤ 1: Tr(e^(-βH)) diverges; use the low-temperature formula",
                beta.to_f64()
            )));
        }
        if cutoff == 0 {
            return Err(Error::domain("cutoff must be at least 1"));
        }
        let weights = inverse_powers(cutoff, beta);
        let mut z = Float::new(beta.prec());
        for w in &weights {
            z += w;
        }
        Ok(PartitionFunction { beta: beta.clone(), weights, z })
    }

    pub fn cutoff(&self) -> u64 {
        self.weights.len() as u64
    }

    pub fn beta(&self) -> &Float {
        &self.beta
    }

    pub fn value(&self) -> &Float {
        &self.z
    }

    pub fn prec(&self) -> u32 {
        self.beta.prec()
    }

    /// Bound on `Σ_{k>N} k^{-β}`.
    pub fn tail(&self) -> Float {
        zeta_tail_bound(self.cutoff(), &self.beta)
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    /// `Σ_{k ≤ N, k ≡ j mod d} k^{-β}` for `j = 0..d`.
    fn residue_sums(&self, d: u64) -> Vec<Float> {
        let mut sums = vec![Float::new(self.prec()); d as usize];
        for (i, w) in self.weights.iter().enumerate() {
            sums[(i as u64 + 1) as usize % d as usize] += w;
        }
        sums
    }

    /// `Σ_{k≤N} k^{-β} α(ζ_r^k)` computed from residue classes mod `den(r)`.
    fn twisted_sum(&self, r: TorsionLabel, alpha: &SymmetryClass, cache: &mut BTreeMap<u64, Vec<Float>>) -> Complex {
        let prec = self.prec();
        if r.is_zero() {
            return Complex::with_val(prec, (&self.z, 0));
        }
        let d = r.den();
        let sums = cache.entry(d).or_insert_with(|| self.residue_sums(d));
        let s = alpha.act(r);
        let mut acc = Complex::new(prec);
        for (j, w) in sums.iter().enumerate() {
            let e = (s.num() as u128 * j as u128 % d as u128) as i64;
            acc += root_of_unity(e, d, prec) * w;
        }
        acc
    }
}

/// `ζ_N(β)` with its integral tail bound.
pub fn riemann_zeta_partial(beta: &Float, cutoff: u64) -> Result<StateReport> {
    let pf = PartitionFunction::new(beta, cutoff)?;
    let digits = digits_for_bits(pf.prec());
    Ok(StateReport::numeric(Complex::with_val(pf.prec(), (pf.value(), 0)), pf.tail(), digits)
        .with_param("beta", beta.to_f64())
        .with_param("cutoff", cutoff)
        .with_param("constant", "truncated-sum"))
}

fn gibbs_diagonal(
    diag: &[(TorsionLabel, Float)],
    l1: Float,
    alpha: &SymmetryClass,
    pf: &PartitionFunction,
) -> (Complex, Float) {
    let prec = pf.prec();
    let mut cache = BTreeMap::new();
    let mut num = Complex::new(prec);
    for (r, c) in diag {
        num += pf.twisted_sum(*r, alpha, &mut cache) * c;
    }
    let value = num / pf.value();
    let tail = l1 * pf.tail() * 2u32 / pf.value();
    (value, tail)
}

/// Gibbs state `Tr(π_α(x) e^{-βH}) / Tr(e^{-βH})` truncated at `N`.
///
/// Only monomials with `a = b` reach the diagonal; in normal form these are
/// the `e(r)`. The tail bound is `2·‖diag(x)‖₁·N^{1-β}/((β-1) Z_N(β))`.
pub fn gibbs_value(x: &BCElement, alpha: &SymmetryClass, beta: &Float, cutoff: u64) -> Result<StateReport> {
    let pf = PartitionFunction::new(beta, cutoff)?;
    gibbs_value_with(x, alpha, &pf)
}

pub fn gibbs_value_with(x: &BCElement, alpha: &SymmetryClass, pf: &PartitionFunction) -> Result<StateReport> {
    alpha.check_element(x)?;
    let prec = pf.prec();
    let digits = digits_for_bits(prec);
    let diag: Vec<(TorsionLabel, Rational)> =
        x.terms().filter(|(m, _)| m.is_diagonal()).map(|(m, c)| (m.r(), c.clone())).collect();
    let report = if diag.iter().all(|(r, _)| r.is_zero()) {
        // no twisted diagonal terms: the trace ratio is the constant term exactly
        let c = diag.first().map(|(_, c)| c.clone()).unwrap_or_default();
        StateReport::exact(CyclotomicNumber::from_rational(c), digits)
    } else {
        let l1: Rational = diag.iter().map(|(_, c)| Rational::from(c.abs_ref())).sum();
        let diag_f: Vec<(TorsionLabel, Float)> = diag.into_iter().map(|(r, c)| (r, Float::with_val(prec, c))).collect();
        let (value, tail) = gibbs_diagonal(&diag_f, Float::with_val(prec, l1), alpha, pf);
        StateReport::numeric(value, tail, digits)
    };
    Ok(report
        .with_param("element", x)
        .with_param("alpha", alpha)
        .with_param("beta", pf.beta().to_f64())
        .with_param("cutoff", pf.cutoff()))
}

/// Gibbs state on an element with extended-precision coefficients.
pub fn gibbs_value_weighted(x: &WeightedElement, alpha: &SymmetryClass, pf: &PartitionFunction) -> Result<StateReport> {
    let prec = pf.prec();
    let mut diag = Vec::new();
    let mut l1 = Float::new(prec);
    for (m, c) in x.terms() {
        alpha.check_label(m.r())?;
        if m.is_diagonal() {
            l1 += Float::with_val(prec, c.abs_ref());
            diag.push((m.r(), Float::with_val(prec, c)));
        }
    }
    let (value, tail) = gibbs_diagonal(&diag, l1, alpha, pf);
    Ok(StateReport::numeric(value, tail, digits_for_bits(prec))
        .with_param("alpha", alpha)
        .with_param("beta", pf.beta().to_f64())
        .with_param("cutoff", pf.cutoff()))
}

/// Unique KMS state for `0 < β ≤ 1`: `φ(e(m/n)) = f_{1-β}(n)/φ(n)`.
///
/// Exact whenever `1 - β` is an integer.
pub fn kms_low_temp_value(r: TorsionLabel, beta: &Float) -> Result<StateReport> {
    if *beta <= 0 || *beta > 1 {
        return Err(Error::domain(format!("β = {} outside (0, 1]", beta.to_f64())));
    }
    let prec = beta.prec();
    let n = r.den();
    let k = Float::with_val(prec, 1 - beta);
    let totient = euler_totient(n);
    let report = match f_weight(&k, n) {
        ArithValue::Exact(q) => {
            StateReport::exact(CyclotomicNumber::from_rational(q / totient), digits_for_bits(prec))
        }
        ArithValue::Approx(f) => StateReport::numeric(
            Complex::with_val(prec, (f / totient, 0)),
            Float::new(prec),
            digits_for_bits(prec),
        ),
    };
    Ok(report.with_param("r", r).with_param("beta", beta.to_f64()).with_param("constant", "formula"))
}

/// Extremal KMS state for `β > 1` on `e(r)` by the polylogarithm route:
/// `Z_N(β)^{-1} Σ_{n≤N} n^{-β} q^n` with `q = α(exp(2πi r))` computed
/// numerically and powered by repeated multiplication.
pub fn kms_high_temp_value(r: TorsionLabel, alpha: &SymmetryClass, beta: &Float, cutoff: u64) -> Result<StateReport> {
    let pf = PartitionFunction::new(beta, cutoff)?;
    kms_high_temp_value_with(r, alpha, &pf)
}

pub fn kms_high_temp_value_with(r: TorsionLabel, alpha: &SymmetryClass, pf: &PartitionFunction) -> Result<StateReport> {
    alpha.check_label(r)?;
    let prec = pf.prec();
    let digits = digits_for_bits(prec);
    if r.is_zero() {
        return Ok(StateReport::exact(CyclotomicNumber::one(), digits)
            .with_param("r", r)
            .with_param("alpha", alpha)
            .with_param("beta", pf.beta().to_f64()));
    }
    let q = alpha.root(r).to_complex(prec + 32);
    let mut power = Complex::with_val(prec + 32, (1, 0));
    let mut acc = Complex::new(prec + 32);
    for w in pf.weights() {
        power *= &q;
        acc += Complex::with_val(prec + 32, &power * w);
    }
    let value = Complex::with_val(prec, acc / pf.value());
    let tail = pf.tail() * 2u32 / pf.value();
    Ok(StateReport::numeric(value, tail, digits)
        .with_param("r", r)
        .with_param("alpha", alpha)
        .with_param("beta", pf.beta().to_f64())
        .with_param("cutoff", pf.cutoff())
        .with_param("route", "polylog"))
}

/// Ground state: the vector state at `ε_1`,
/// `φ_∞(μ_a e(r) μ_b*) = [a = 1][b = 1] α(ζ_r)`.
pub fn ground_state_value(x: &BCElement, alpha: &SymmetryClass) -> Result<StateReport> {
    alpha.check_element(x)?;
    let mut acc = CyclotomicNumber::zero(1);
    for (m, c) in x.terms() {
        if m.a() == 1 && m.b() == 1 {
            acc += &alpha.root(m.r()).scale(c);
        }
    }
    Ok(StateReport::exact(acc, 50).with_param("element", x).with_param("alpha", alpha))
}

/// Ground-state value of `e_{1,a}`: `(1/2)(q + 1)/(q - 1)` with `q = α(ζ_a)`.
pub fn eisenstein_e1a(a: TorsionLabel, alpha: &SymmetryClass) -> Result<StateReport> {
    if a.is_zero() {
        return Err(Error::Pole("e_{1,a} has a pole at a = 0".into()));
    }
    alpha.check_label(a)?;
    let q = alpha.root(a);
    let one = CyclotomicNumber::one();
    let denom = &q - &one;
    if denom.is_zero() {
        return Err(Error::Pole(format!("α(ζ_a) = 1 for a = {a}")));
    }
    let value = (&(&q + &one) * &denom.inverse()?).scale(&Rational::from((1, 2)));
    Ok(StateReport::exact(value, 50).with_param("a", a).with_param("alpha", alpha))
}

/// Symmetric truncated lattice sum `(2πi)^{-1} Σ_{|n|≤M} (n + x)^{-1}`, the
/// normalized value of `e_{1,a}` on the lattice ℤ at the real point `x`.
pub fn eisenstein_lattice_sum(x: &Rational, m: u64, prec_bits: u32) -> Complex {
    let xf = Float::with_val(prec_bits, x);
    let x2 = Float::with_val(prec_bits, xf.square_ref());
    let mut sum = Float::with_val(prec_bits, xf.recip_ref());
    let two_x = Float::with_val(prec_bits, &xf * 2u32);
    // pair n and -n: 1/(x+n) + 1/(x-n) = 2x / (x² - n²)
    for n in 1..=m {
        let n2 = Float::with_val(prec_bits, n) * n;
        sum += Float::with_val(prec_bits, &two_x / (Float::with_val(prec_bits, &x2 - n2)));
    }
    let two_pi = Float::with_val(prec_bits, rug::float::Constant::Pi) * 2u32;
    // 1/(2πi) · s = -i·s/(2π)
    Complex::with_val(prec_bits, (0, -(sum / two_pi)))
}

/// `(1/φ(n)) Σ_{u ∈ (ℤ/n)*} φ_{β,u}(e(r))` over the extremal KMS states at
/// level `n = den(r)`.
pub fn haar_average(r: TorsionLabel, pf: &PartitionFunction) -> Result<Complex> {
    let n = r.den();
    let units = units_mod(n);
    let mut acc = Complex::new(pf.prec());
    for &u in &units {
        acc += kms_high_temp_value_with(r, &SymmetryClass::new(n, u as i64)?, pf)?.complex(pf.prec());
    }
    Ok(acc / units.len() as u32)
}

/// Checks that `u ↦ (φ_{∞,ρ}(e(k/n)))_k` separates the units and that
/// `θ_u` permutes these value vectors as the regular action `ρ ↦ ρu`.
pub fn ground_symmetry_is_regular(n: u64) -> Result<bool> {
    let units = units_mod(n);
    let labels: Vec<TorsionLabel> = (0..n).map(|k| TorsionLabel::new(k as i64, n)).collect::<Result<_>>()?;
    let vector = |rho: u64, u: Option<u64>| -> Result<Vec<CyclotomicNumber>> {
        let alpha = SymmetryClass::new(n, rho as i64)?;
        labels
            .iter()
            .map(|&r| {
                let x = BCElement::e(r);
                let x = match u {
                    Some(u) => bc_symmetry(u as i64, n, &x)?,
                    None => x,
                };
                Ok(ground_state_value(&x, &alpha)?.exact_value().expect("ground states are exact").clone())
            })
            .collect()
    };
    let base: Vec<Vec<CyclotomicNumber>> = units.iter().map(|&rho| vector(rho, None)).collect::<Result<_>>()?;
    for i in 0..base.len() {
        if base[i + 1..].contains(&base[i]) {
            return Ok(false);
        }
    }
    for &u in &units {
        for &rho in &units {
            let moved = vector(rho, Some(u))?;
            let target = (rho * u) % n.max(1);
            let Some(pos) = base.iter().position(|v| *v == moved) else { return Ok(false) };
            if units[pos] != target % n.max(1) && n > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A failed instance of `γ φ(x) = φ(θ(γ) x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwineMismatch {
    pub unit: u64,
    pub label: TorsionLabel,
    pub base: u64,
}

/// Checks `σ_u(φ_{∞,ρ}(e(k/n))) = φ_{∞,ρ}(θ_u e(k/n))` exactly for all
/// units `u`, `ρ` mod `n` and all `k`.
pub fn galois_intertwine_check(n: u64) -> Result<Vec<IntertwineMismatch>> {
    let units = units_mod(n);
    let mut bad = Vec::new();
    for k in 0..n {
        let label = TorsionLabel::new(k as i64, n)?;
        let x = BCElement::e(label);
        for &rho in &units {
            let alpha = SymmetryClass::new(n, rho as i64)?;
            let base_value = ground_state_value(&x, &alpha)?;
            let base_value = base_value.exact_value().expect("ground states are exact");
            for &u in &units {
                let lhs = base_value.galois(u as i64)?;
                let rhs = ground_state_value(&bc_symmetry(u as i64, n, &x)?, &alpha)?;
                if Some(&lhs) != rhs.exact_value() {
                    bad.push(IntertwineMismatch { unit: u, label, base: rho });
                }
            }
        }
    }
    Ok(bad)
}

/// Both sides of the KMS condition `φ(x σ_{iβ}(y)) = φ(y x)` in the
/// truncated Gibbs state.
#[derive(Debug, Clone)]
pub struct KmsResidual {
    pub lhs: StateReport,
    pub rhs: StateReport,
    pub residual: Float,
    /// Sum of the two tail bounds.
    pub tolerance: Float,
}

impl KmsResidual {
    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

pub fn kms_condition_residual(
    x: &BCElement,
    y: &BCElement,
    alpha: &SymmetryClass,
    beta: &Float,
    cutoff: u64,
) -> Result<KmsResidual> {
    alpha.check_element(x)?;
    alpha.check_element(y)?;
    let pf = PartitionFunction::new(beta, cutoff)?;
    let prec = pf.prec();
    let lhs = gibbs_value_weighted(&bc_mul_weighted(x, &bc_sigma_imaginary(y, beta)), alpha, &pf)?;
    let rhs = gibbs_value_with(&bc_mul(y, x), alpha, &pf)?;
    let diff = Complex::with_val(prec, lhs.complex(prec) - rhs.complex(prec));
    let residual = complex_abs(&diff);
    let tolerance = Float::with_val(prec, &lhs.tail_bound + &rhs.tail_bound);
    Ok(KmsResidual { lhs, rhs, residual, tolerance })
}

/// `π_α` truncated at `N`, for callers that want matrices.
pub fn truncated_rep(alpha: SymmetryClass, cutoff: u64) -> Result<TruncatedRep> {
    TruncatedRep::new(alpha, cutoff)
}
