//! Ideal counting, Dedekind zeta and Dirichlet L partial sums.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::field::QuadField;
use super::ideal::{prime_ideals_up_to, QuadIdeal};
use crate::exact::arith::euler_totient;
use crate::exact::precision::{digits_for_bits, inverse_powers, zeta_tail_bound};
use crate::report::StateReport;
use crate::{Error, Result};

/// `a_n = #{J : n(J) = n}` for `n ≤ bound` (index 0 unused), via
/// `a = 1 * χ_D`.
pub fn ideal_count_coeffs(field: QuadField, bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut a = vec![0i64; n + 1];
    for d in 1..=n {
        let chi = field.chi(d as u64) as i64;
        if chi != 0 {
            for m in (d..=n).step_by(d) {
                a[m] += chi;
            }
        }
    }
    a.into_iter().map(|v| v as u64).collect()
}

/// Every integral ideal of norm `≤ bound`, built as products of prime
/// ideals, sorted by `(norm, ideal)`.
pub fn enumerate_ideals(field: QuadField, bound: u64) -> Vec<QuadIdeal> {
    let primes: Vec<QuadIdeal> = prime_ideals_up_to(field, bound).into_iter().map(|p| p.ideal).collect();
    let mut out = vec![QuadIdeal::unit(field)];
    let mut stack = vec![(0usize, QuadIdeal::unit(field))];
    while let Some((start, ideal)) = stack.pop() {
        let n = ideal.norm();
        for (i, p) in primes.iter().enumerate().skip(start) {
            if n * p.norm() > bound {
                break;
            }
            let mut cur = ideal;
            while cur.norm() * p.norm() <= bound {
                cur = cur.mul(*p);
                out.push(cur);
                stack.push((i + 1, cur));
            }
        }
    }
    out.sort_by_key(|j| (j.norm(), *j));
    out
}

/// Ideal counts from explicit enumeration, for cross-checking.
pub fn ideal_counts_by_enumeration(field: QuadField, bound: u64) -> Vec<u64> {
    let mut a = vec![0u64; bound as usize + 1];
    for j in enumerate_ideals(field, bound) {
        a[j.norm() as usize] += 1;
    }
    a
}

/// Bound on `Σ_{n>X} a_n n^{-β}` for `β > 1`.
///
/// From `a_n ≤ d(n)` and `Σ_{n≤t} d(n) ≤ t(ln t + 1)`, partial summation gives
/// `β·X^{1-β}·(ln X + 1 + 1/(β-1))/(β-1)`.
pub fn dedekind_tail_bound(bound: u64, beta: &Float) -> Float {
    let prec = beta.prec();
    let bm1 = Float::with_val(prec, beta - 1u32);
    let x = Float::with_val(prec, bound);
    let ln = Float::with_val(prec, x.ln_ref());
    let inner = ln + 1u32 + Float::with_val(prec, bm1.recip_ref());
    let power = zeta_tail_bound(bound, beta);
    power * inner * beta
}

/// Bound on `|Σ_{n>X} χ_D(n) n^{-β}|`: partial sums of `χ_D` are at most
/// `φ(|D|)/2`, so partial summation gives `φ(|D|)·X^{-β}`; for `β > 1` the
/// absolute bound is also available.
pub fn l_tail_bound(field: QuadField, bound: u64, beta: &Float) -> Float {
    let prec = beta.prec();
    let x = Float::with_val(prec, bound);
    let s = Float::with_val(prec, euler_totient(field.discriminant().unsigned_abs()));
    let alt = s * x.pow(Float::with_val(prec, -beta));
    if *beta > 1 {
        alt.min(&zeta_tail_bound(bound, beta))
    } else {
        alt
    }
}

/// Partial sums of ζ, ζ_K and L(·, χ_D) sharing one weight table.
#[derive(Debug, Clone)]
pub struct ZetaPartials {
    pub zeta: Float,
    pub zeta_tail: Float,
    pub dedekind: Float,
    pub dedekind_tail: Float,
    pub l: Float,
    pub l_tail: Float,
}

impl ZetaPartials {
    pub fn new(field: QuadField, beta: &Float, bound: u64) -> Result<Self> {
        if *beta <= 1 {
            return Err(Error::domain(format!("β = {} ≤ 1: ζ_K(β) diverges", beta.to_f64())));
        }
        let prec = beta.prec();
        let w = inverse_powers(bound, beta);
        let a = ideal_count_coeffs(field, bound);
        let mut zeta = Float::new(prec);
        let mut dedekind = Float::new(prec);
        let mut l = Float::new(prec);
        for (i, wn) in w.iter().enumerate() {
            let n = i as u64 + 1;
            zeta += wn;
            if a[n as usize] > 0 {
                dedekind += Float::with_val(prec, wn * a[n as usize]);
            }
            match field.chi(n) {
                1 => l += wn,
                -1 => l -= wn,
                _ => {}
            }
        }
        Ok(ZetaPartials {
            zeta,
            zeta_tail: zeta_tail_bound(bound, beta),
            dedekind,
            dedekind_tail: dedekind_tail_bound(bound, beta),
            l,
            l_tail: l_tail_bound(field, bound, beta),
        })
    }

    /// `|ζ_{K,X} − ζ_X L_X|` and the bound it must respect,
    /// `T_K + T_ζ(|L_X| + T_L) + (ζ_X + T_ζ) T_L`.
    pub fn factorization_residual(&self) -> (Float, Float) {
        let prec = self.zeta.prec();
        let prod = Float::with_val(prec, &self.zeta * &self.l);
        let residual = Float::with_val(prec, &self.dedekind - prod).abs();
        let l_abs = Float::with_val(prec, self.l.abs_ref()) + &self.l_tail;
        let zeta_up = Float::with_val(prec, &self.zeta + &self.zeta_tail);
        let bound = Float::with_val(prec, &self.dedekind_tail + &self.zeta_tail * l_abs) + zeta_up * &self.l_tail;
        (residual, bound)
    }
}

fn real_report(v: Float, tail: Float, field: QuadField, beta: &Float, bound: u64) -> StateReport {
    let prec = v.prec();
    StateReport::numeric(Complex::with_val(prec, (v, 0)), tail, digits_for_bits(prec))
        .with_param("D", field.discriminant())
        .with_param("beta", beta.to_f64())
        .with_param("norm_bound", bound)
        .with_param("constant", "truncated-sum")
}

/// `ζ_{K,X}(β) = Σ_{n ≤ X} a_n n^{-β}`.
pub fn dedekind_zeta(field: QuadField, beta: &Float, bound: u64) -> Result<StateReport> {
    let z = ZetaPartials::new(field, beta, bound)?;
    Ok(real_report(z.dedekind, z.dedekind_tail, field, beta, bound))
}

/// `L_X(β, χ_D)` for `β > 0`.
pub fn dirichlet_l(field: QuadField, beta: &Float, bound: u64) -> Result<StateReport> {
    if *beta <= 0 {
        return Err(Error::domain(format!("β = {} ≤ 0: L-series partial sums do not converge", beta.to_f64())));
    }
    let prec = beta.prec();
    let w = inverse_powers(bound, beta);
    let mut l = Float::new(prec);
    for (i, wn) in w.iter().enumerate() {
        match field.chi(i as u64 + 1) {
            1 => l += wn,
            -1 => l -= wn,
            _ => {}
        }
    }
    Ok(real_report(l, l_tail_bound(field, bound, beta), field, beta, bound))
}

/// Analytic class number `w√|D| L(1, χ_D)/(2π)` with its truncation error.
pub fn class_number_estimate(field: QuadField, bound: u64, prec_bits: u32) -> Result<(Float, Float)> {
    let one = Float::with_val(prec_bits, 1);
    let l = dirichlet_l(field, &one, bound)?;
    let scale = Float::with_val(prec_bits, field.discriminant().unsigned_abs()).sqrt() * field.unit_count()
        / (Float::with_val(prec_bits, rug::float::Constant::Pi) * 2u32);
    let h = Float::with_val(prec_bits, l.real(prec_bits) * &scale);
    let err = Float::with_val(prec_bits, &l.tail_bound * &scale);
    Ok((h, err))
}
