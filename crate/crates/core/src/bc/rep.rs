//! Representations `π_α` of the BC algebra on ℓ²(ℕ×), truncated to the
//! span of `ε_1, …, ε_N`.

use std::collections::BTreeMap;

use super::algebra::{BCElement, BCMonomial};
use crate::exact::arith::gcd;
use crate::exact::{CyclotomicNumber, TorsionLabel};
use crate::{Error, Result};

/// Finite-level stand-in for `α ∈ Ẑ*`: a unit `u` modulo `M`, acting on
/// roots of unity of order dividing `M` by `ζ ↦ ζ^u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetryClass {
    modulus: u64,
    unit: u64,
}

impl SymmetryClass {
    pub fn new(modulus: u64, unit: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::domain("symmetry modulus must be positive"));
        }
        let u = unit.rem_euclid(modulus as i64) as u64;
        if modulus > 1 && gcd(u, modulus) != 1 {
            return Err(Error::domain(format!("{unit} is not a unit mod {modulus}")));
        }
        Ok(SymmetryClass { modulus, unit: u })
    }

    pub fn identity(modulus: u64) -> Self {
        SymmetryClass { modulus: modulus.max(1), unit: 1 % modulus.max(1) }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn check_label(&self, r: TorsionLabel) -> Result<()> {
        if !self.modulus.is_multiple_of(r.den()) {
            return Err(Error::Level { den: r.den(), modulus: self.modulus });
        }
        Ok(())
    }

    pub fn check_element(&self, x: &BCElement) -> Result<()> {
        x.terms().try_for_each(|(m, _)| self.check_label(m.r()))
    }

    /// `α(ζ_r)` as the torsion label `u·r`.
    pub fn act(&self, r: TorsionLabel) -> TorsionLabel {
        r.scale(self.unit as i64)
    }

    /// The exact root of unity `α(exp(2πi r))`.
    pub fn root(&self, r: TorsionLabel) -> CyclotomicNumber {
        let s = self.act(r);
        CyclotomicNumber::root(s.den(), s.num() as i64)
    }
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.unit, self.modulus)
    }
}

/// `π_α` restricted to `span{ε_k : k ≤ N}`.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedRep {
    pub alpha: SymmetryClass,
    pub cutoff: u64,
}

/// Sparse vector in ℓ²(ℕ×) with exact cyclotomic entries.
pub type SparseVector = BTreeMap<u64, CyclotomicNumber>;

fn accumulate(v: &mut SparseVector, k: u64, z: CyclotomicNumber) {
    if z.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(slot) => {
            *slot += &z;
            if slot.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, z);
        }
    }
}

/// `π_α(μ_a e(r) μ_b*) ε_k = [b | k] α(ζ_r^{k/b}) ε_{ak/b}`.
pub fn apply_monomial(m: &BCMonomial, alpha: &SymmetryClass, k: u64) -> Option<(u64, CyclotomicNumber)> {
    if !k.is_multiple_of(m.b()) {
        return None;
    }
    let j = k / m.b();
    Some((m.a() * j, alpha.root(m.r().scale(j as i64))))
}

/// `π_α(x) ε_k` without truncation.
pub fn apply_basis(x: &BCElement, alpha: &SymmetryClass, k: u64) -> SparseVector {
    let mut out = SparseVector::new();
    for (m, c) in x.terms() {
        if let Some((target, z)) = apply_monomial(m, alpha, k) {
            accumulate(&mut out, target, z.scale(c));
        }
    }
    out
}

/// `π_α(x) v` without truncation.
pub fn apply(x: &BCElement, alpha: &SymmetryClass, v: &SparseVector) -> SparseVector {
    let mut out = SparseVector::new();
    for (k, coeff) in v {
        for (target, z) in apply_basis(x, alpha, *k) {
            accumulate(&mut out, target, &z * coeff);
        }
    }
    out
}

/// Truncated matrix of `π_α(x)`: column `k` holds `π_α(x) ε_k` with entries
/// beyond the cutoff removed and logged as leakage.
#[derive(Debug, Clone)]
pub struct RepMatrix {
    pub cutoff: u64,
    columns: Vec<SparseVector>,
    /// `(column, dropped row)` pairs.
    pub leakage: Vec<(u64, u64)>,
}

impl RepMatrix {
    pub fn column(&self, k: u64) -> &SparseVector {
        &self.columns[(k - 1) as usize]
    }

    pub fn entry(&self, row: u64, col: u64) -> CyclotomicNumber {
        self.column(col).get(&row).cloned().unwrap_or_else(|| CyclotomicNumber::zero(1))
    }

    pub fn nonzero_count(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// Matrix-vector product within the truncation.
    pub fn mul_vector(&self, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (k, coeff) in v {
            if *k > self.cutoff {
                continue;
            }
            for (row, z) in self.column(*k) {
                accumulate(&mut out, *row, z * coeff);
            }
        }
        out
    }
}

impl TruncatedRep {
    pub fn new(alpha: SymmetryClass, cutoff: u64) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::domain("cutoff must be at least 1"));
        }
        Ok(TruncatedRep { alpha, cutoff })
    }

    /// Column `k` of the truncated matrix and whether anything leaked.
    pub fn column(&self, x: &BCElement, k: u64) -> (SparseVector, Vec<u64>) {
        let full = apply_basis(x, &self.alpha, k);
        let mut kept = SparseVector::new();
        let mut leaked = Vec::new();
        for (row, z) in full {
            if row <= self.cutoff {
                kept.insert(row, z);
            } else {
                leaked.push(row);
            }
        }
        (kept, leaked)
    }
}

/// Sparse truncated matrix of `π_α(x)` on `ε_1, …, ε_N`.
pub fn rep_matrix(x: &BCElement, rep: &TruncatedRep) -> Result<RepMatrix> {
    rep.alpha.check_element(x)?;
    let mut columns = Vec::with_capacity(rep.cutoff as usize);
    let mut leakage = Vec::new();
    for k in 1..=rep.cutoff {
        let (col, leaked) = rep.column(x, k);
        leakage.extend(leaked.into_iter().map(|row| (k, row)));
        columns.push(col);
    }
    Ok(RepMatrix { cutoff: rep.cutoff, columns, leakage })
}

/// Columns `k ≤ N / (max_a(x)·max_a(y))` where `π(xy) ε_k` and
/// `π(x) π(y) ε_k` disagree in the truncated representation. Those columns
/// never leak, so an empty result means the truncated matrices multiply
/// exactly there.
pub fn rep_product_mismatches(x: &BCElement, y: &BCElement, xy: &BCElement, rep: &TruncatedRep) -> Result<Vec<u64>> {
    rep.alpha.check_element(x)?;
    rep.alpha.check_element(y)?;
    rep.alpha.check_element(xy)?;
    let bound = rep.cutoff / (x.max_a() * y.max_a());
    let mut bad = Vec::new();
    for k in 1..=bound {
        let (lhs, lhs_leak) = rep.column(xy, k);
        let (ycol, y_leak) = rep.column(y, k);
        let mut rhs = SparseVector::new();
        let mut leaked = !lhs_leak.is_empty() || !y_leak.is_empty();
        for (j, coeff) in &ycol {
            let (xcol, x_leak) = rep.column(x, *j);
            leaked |= !x_leak.is_empty();
            for (row, z) in xcol {
                accumulate(&mut rhs, row, &z * coeff);
            }
        }
        if leaked || lhs != rhs {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// Diagonal matrix entry `⟨ε_k, π_α(x) ε_k⟩`.
pub fn diagonal_entry(x: &BCElement, alpha: &SymmetryClass, k: u64) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero(1);
    for (m, c) in x.terms() {
        if m.is_diagonal() {
            if let Some((_, z)) = apply_monomial(m, alpha, k) {
                acc += &z.scale(c);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::parse_element;
    use rug::Rational;

    fn rep(m: u64, u: i64, n: u64) -> TruncatedRep {
        TruncatedRep::new(SymmetryClass::new(m, u).unwrap(), n).unwrap()
    }

    #[test]
    fn e_half_on_first_vector() {
        let r = rep(2, 1, 10);
        let mat = rep_matrix(&parse_element("e(1/2)").unwrap(), &r).unwrap();
        assert_eq!(mat.entry(1, 1), CyclotomicNumber::from_rational(Rational::from(-1)));
        assert_eq!(mat.entry(2, 2), CyclotomicNumber::one());
    }

    #[test]
    fn mu_shifts_index() {
        let r = rep(1, 1, 10);
        let mat = rep_matrix(&BCElement::mu(3).unwrap(), &r).unwrap();
        assert_eq!(mat.column(2).keys().copied().collect::<Vec<_>>(), vec![6]);
        assert_eq!(mat.entry(6, 2), CyclotomicNumber::one());
        assert!(mat.leakage.contains(&(4, 12)));
    }

    #[test]
    fn mu_star_kills_non_multiples() {
        let r = rep(1, 1, 10);
        let mat = rep_matrix(&BCElement::mu_star(2).unwrap(), &r).unwrap();
        assert!(mat.column(3).is_empty());
        assert_eq!(mat.entry(2, 4), CyclotomicNumber::one());
    }

    #[test]
    fn level_mismatch() {
        let r = rep(4, 1, 10);
        assert!(matches!(rep_matrix(&parse_element("e(1/3)").unwrap(), &r), Err(Error::Level { .. })));
    }

    #[test]
    fn unit_twist() {
        let x = parse_element("e(1/4)").unwrap();
        let z = diagonal_entry(&x, &SymmetryClass::new(4, 3).unwrap(), 1);
        assert_eq!(z, -&CyclotomicNumber::root(4, 1));
    }

    #[test]
    fn product_of_generators_matches() {
        let x = parse_element("mu(2)*e(1/3)").unwrap();
        let y = parse_element("e(1/4)*mu_star(3) + mu(5)").unwrap();
        let xy = crate::bc::bc_mul(&x, &y);
        let r = rep(12, 5, 720);
        assert!(rep_product_mismatches(&x, &y, &xy, &r).unwrap().is_empty());
    }
}
