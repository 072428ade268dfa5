//! CM KMS states truncated at ideal norm `X`, symmetries and the truncated
//! representation on ideals.

use std::collections::HashMap;

use rug::{Complex, Float};

use super::lattice::{character_phase, cm_function_eval, CMFunction, KLatticePoint};
use crate::exact::precision::{complex_abs, digits_for_bits, inverse_powers, root_of_unity};
use crate::exact::CyclotomicNumber;
use crate::quad::zeta::{dedekind_tail_bound, enumerate_ideals};
use crate::quad::{ClassGroup, QuadIdeal};
use crate::report::StateReport;
use crate::{Error, Result};

/// An ideal of the truncated basis with its norm and class.
#[derive(Debug, Clone, Copy)]
pub struct IdealEntry {
    pub ideal: QuadIdeal,
    pub norm: u64,
    pub class: usize,
}

/// Class group plus all integral ideals of norm `≤ X`: the basis of the
/// truncated representation on `ℓ²` of ideals, `H ε_J = log n(J) ε_J`.
#[derive(Debug, Clone)]
pub struct TruncatedCMRep {
    group: ClassGroup,
    bound: u64,
    ideals: Vec<IdealEntry>,
    index: HashMap<QuadIdeal, usize>,
}

impl TruncatedCMRep {
    pub fn new(group: ClassGroup, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::domain("norm bound must be at least 1"));
        }
        let ideals: Vec<IdealEntry> = enumerate_ideals(group.field(), bound)
            .into_iter()
            .map(|j| IdealEntry { ideal: j, norm: j.norm(), class: group.ideal_class(j) })
            .collect();
        let index = ideals.iter().enumerate().map(|(i, e)| (e.ideal, i)).collect();
        Ok(TruncatedCMRep { group, bound, ideals, index })
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn ideals(&self) -> &[IdealEntry] {
        &self.ideals
    }

    pub fn index_of(&self, j: QuadIdeal) -> Option<usize> {
        self.index.get(&j).copied()
    }

    /// `π(μ_J) ε_{J'} = ε_{JJ'}`; `None` when the image leaves the basis.
    pub fn mu(&self, j: QuadIdeal, k: usize) -> Option<usize> {
        self.index_of(j.mul(self.ideals[k].ideal))
    }

    /// `π(μ_J*) ε_{J'} = [J | J'] ε_{J'/J}`; `None` for the zero vector.
    pub fn mu_star(&self, j: QuadIdeal, k: usize) -> Option<usize> {
        self.ideals[k].ideal.exact_div(j).and_then(|q| self.index_of(q))
    }

    /// `π(e_{J₀}) ε_{J'} = [J₀ | J'] ε_{J'}`.
    pub fn e(&self, j0: QuadIdeal, k: usize) -> Option<usize> {
        j0.divides(self.ideals[k].ideal).then_some(k)
    }

    /// `Σ_{n(J)≤X} n(J)^{-β}` with per-basis weights.
    pub fn partition(&self, beta: &Float) -> Result<CMPartition> {
        if *beta <= 1 {
            return Err(Error::domain(format!(
                "β = {} ≤ 1: Tr(e^(-βH)) = ζ_K(β) diverges; use cm-projection",
                beta.to_f64()
            )));
        }
        let by_norm = inverse_powers(self.bound, beta);
        let weights: Vec<Float> = self.ideals.iter().map(|e| by_norm[e.norm as usize - 1].clone()).collect();
        let mut z = Float::new(beta.prec());
        for w in &weights {
            z += w;
        }
        let tail = dedekind_tail_bound(self.bound, beta);
        Ok(CMPartition { beta: beta.clone(), weights, z, tail })
    }
}

#[derive(Debug, Clone)]
pub struct CMPartition {
    pub beta: Float,
    pub weights: Vec<Float>,
    pub z: Float,
    /// Bound on `ζ_K(β) − ζ_{K,X}(β)`.
    pub tail: Float,
}

impl CMPartition {
    fn prec(&self) -> u32 {
        self.beta.prec()
    }
}

/// Sum of `weights[k] · ζ_E^{phase}` where `term(k)` yields the phase of each
/// contributing basis vector.
fn phase_sum(rep: &TruncatedCMRep, pf: &CMPartition, term: impl Fn(usize) -> Option<u64>) -> Complex {
    let prec = pf.prec();
    let e = rep.group.exponent();
    let mut by_phase = vec![Float::new(prec); e as usize];
    for k in 0..rep.ideals.len() {
        if let Some(ph) = term(k) {
            by_phase[ph as usize] += &pf.weights[k];
        }
    }
    let mut acc = Complex::new(prec);
    for (ph, s) in by_phase.into_iter().enumerate() {
        if !s.is_zero() {
            acc += root_of_unity(ph as i64, e, prec) * s;
        }
    }
    acc
}

fn eval_phase(rep: &TruncatedCMRep, f: &CMFunction, base: usize, j: QuadIdeal, class: usize) -> Option<u64> {
    if let Some(j0) = f.divisor {
        if !j0.divides(j) {
            return None;
        }
    }
    Some(f.character.map_or(0, |chi| character_phase(&rep.group, chi, base, class)))
}

fn check_base(group: &ClassGroup, base: usize) -> Result<()> {
    if base >= group.class_number() {
        return Err(Error::domain(format!("base class {base} out of range (h = {})", group.class_number())));
    }
    Ok(())
}

/// `φ_{β,L}(f) = ζ_{K,X}(β)⁻¹ Σ_{n(J)≤X} f(J⁻¹L, J⁻¹L) n(J)^{-β}`.
///
/// The tail bound is `2·|scalar|·T_X/ζ_{K,X}` with `T_X` the Dedekind tail.
pub fn cm_state_value(rep: &TruncatedCMRep, f: &CMFunction, base: usize, beta: &Float) -> Result<StateReport> {
    let pf = rep.partition(beta)?;
    cm_state_value_with(rep, &pf, f, base)
}

pub fn cm_state_value_with(rep: &TruncatedCMRep, pf: &CMPartition, f: &CMFunction, base: usize) -> Result<StateReport> {
    check_base(&rep.group, base)?;
    let prec = pf.prec();
    let digits = digits_for_bits(prec);
    let report = if f.is_constant(&rep.group) {
        StateReport::exact(CyclotomicNumber::from_rational(f.scalar.clone()), digits)
    } else {
        let sum = phase_sum(rep, pf, |k| {
            let e = &rep.ideals[k];
            eval_phase(rep, f, base, e.ideal, e.class)
        });
        let value = sum * Float::with_val(prec, &f.scalar) / &pf.z;
        let tail = Float::with_val(prec, rug::Rational::from(f.scalar.abs_ref())) * &pf.tail * 2u32 / &pf.z;
        StateReport::numeric(value, tail, digits)
    };
    Ok(report
        .with_param("D", rep.group.discriminant())
        .with_param("f", f)
        .with_param("base", rep.group.forms()[base])
        .with_param("beta", pf.beta.to_f64())
        .with_param("norm_bound", rep.bound))
}

/// Ground state `φ_{∞,L}(f) = f(L, L)`.
pub fn cm_ground_state(group: &ClassGroup, f: &CMFunction, base: usize) -> Result<CyclotomicNumber> {
    check_base(group, base)?;
    Ok(cm_function_eval(group, f, KLatticePoint::invertible(group.field(), base)))
}

/// Zero-temperature symmetry `Θ_s : φ_{∞,L} ↦ φ_{∞,L_s}`, on base classes
/// `c ↦ c·[J_s]⁻¹`.
pub fn ground_symmetry(group: &ClassGroup, base: usize, js: QuadIdeal) -> usize {
    group.mul(base, group.inv(group.ideal_class(js)))
}

/// Checks that `Θ_s` acts on ground-state value vectors `(φ_{∞,c}(f_χ))_χ`
/// as a free transitive (regular) action of the class group.
pub fn ground_action_is_regular(group: &ClassGroup) -> Result<bool> {
    let h = group.class_number();
    let vectors: Vec<Vec<CyclotomicNumber>> = (0..h)
        .map(|c| (0..h).map(|chi| cm_ground_state(group, &CMFunction::chi(chi), c)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let locate = |v: &Vec<CyclotomicNumber>| vectors.iter().position(|w| w == v);
    let mut hits = vec![vec![0usize; h]; h];
    for s in 0..h {
        let js = group.class_ideal(s);
        let mut image = vec![false; h];
        for c in 0..h {
            let moved = ground_symmetry(group, c, js);
            let v: Vec<CyclotomicNumber> =
                (0..h).map(|chi| cm_ground_state(group, &CMFunction::chi(chi), moved)).collect::<Result<_>>()?;
            let Some(target) = locate(&v) else { return Ok(false) };
            if image[target] || (s != 0 && target == c) {
                return Ok(false);
            }
            image[target] = true;
            hits[c][target] += 1;
        }
    }
    Ok(hits.iter().flatten().all(|&n| n == 1))
}

/// Both sides of `φ_{β,L}(θ_s f) = n(J_s)^{-β} φ_{β,L_s}(f)` at norm bound `X`.
#[derive(Debug, Clone)]
pub struct CovarianceResidual {
    pub lhs: Complex,
    pub rhs: Complex,
    pub residual: Float,
    /// Sum of the tails of the two states.
    pub tolerance: Float,
}

impl CovarianceResidual {
    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Evaluates the left side through the pullback
/// `θ_s(f)(c, J) = [J_s | J] · f(c·[J_s]⁻¹, J/J_s)`.
pub fn cm_symmetry_covariance_check(
    rep: &TruncatedCMRep,
    base: usize,
    js: QuadIdeal,
    f: &CMFunction,
    beta: &Float,
) -> Result<CovarianceResidual> {
    check_base(&rep.group, base)?;
    let pf = rep.partition(beta)?;
    let prec = pf.prec();
    let group = &rep.group;
    let shifted = ground_symmetry(group, base, js);
    let scalar = Float::with_val(prec, &f.scalar);
    let lhs = phase_sum(rep, &pf, |k| {
        let q = rep.ideals[k].ideal.exact_div(js)?;
        eval_phase(rep, f, shifted, q, group.ideal_class(q))
    }) * &scalar
        / &pf.z;
    let rhs_state = cm_state_value_with(rep, &pf, f, shifted)?;
    let ns = crate::exact::precision::inv_pow(js.norm(), beta);
    let rhs = rhs_state.complex(prec) * &ns;
    let residual = complex_abs(&Complex::with_val(prec, &lhs - &rhs));
    let state_tail = Float::with_val(prec, rug::Rational::from(f.scalar.abs_ref())) * &pf.tail * 2u32 / &pf.z;
    let tolerance = Float::with_val(prec, &state_tail + Float::with_val(prec, &state_tail * &ns));
    Ok(CovarianceResidual { lhs, rhs, residual, tolerance })
}

/// Outcome of the operator-relation checks in the truncated representation.
#[derive(Debug, Clone)]
pub struct RepRelationsReport {
    pub retained: usize,
    pub mismatches: Vec<String>,
    /// `(J, φ_β(e_J), n(J)^{-β}, tail)`.
    pub gibbs: Vec<(QuadIdeal, Float, Float, Float)>,
}

impl RepRelationsReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.gibbs.iter().all(|(_, v, n, t)| Float::with_val(v.prec(), v - n).abs() <= *t)
    }
}

/// Verifies `μ_J*μ_J = 1`, `μ_Jμ_J* = e_J` and the grading `n(JJ')/n(J') =
/// n(J)` on basis vectors with `n(J') ≤ X/n(J)`, and compares the Gibbs
/// trace of `e_J` with `n(J)^{-β}`.
pub fn cm_rep_relations_check(rep: &TruncatedCMRep, js: &[QuadIdeal], beta: &Float) -> Result<RepRelationsReport> {
    let mut mismatches = Vec::new();
    let mut retained = 0;
    for &j in js {
        let nj = j.norm();
        if nj * nj > rep.bound {
            return Err(Error::Truncation(format!(
                "n(J) = {nj} exceeds √X for X = {}; relations would be dominated by leakage",
                rep.bound
            )));
        }
        for k in 0..rep.ideals.len() {
            let nk = rep.ideals[k].norm;
            if nk * nj > rep.bound {
                break;
            }
            retained += 1;
            let up = rep.mu(j, k);
            match up {
                Some(u) if rep.ideals[u].norm != nk * nj => mismatches.push(format!("grading of μ_{j} at ε_{}", rep.ideals[k].ideal)),
                None => mismatches.push(format!("μ_{j} ε_{} left the basis", rep.ideals[k].ideal)),
                _ => {}
            }
            if up.and_then(|u| rep.mu_star(j, u)) != Some(k) {
                mismatches.push(format!("μ*μ ≠ 1 for J = {j} at ε_{}", rep.ideals[k].ideal));
            }
            let proj = rep.mu_star(j, k).and_then(|u| rep.mu(j, u));
            if proj != rep.e(j, k) {
                mismatches.push(format!("μμ* ≠ e_J for J = {j} at ε_{}", rep.ideals[k].ideal));
            }
        }
    }
    let pf = rep.partition(beta)?;
    let mut gibbs = Vec::new();
    for &j in js {
        let r = cm_state_value_with(rep, &pf, &CMFunction::e(j), 0)?;
        let expected = crate::exact::precision::inv_pow(j.norm(), beta);
        gibbs.push((j, r.real(pf.prec()), expected, r.tail_bound.clone()));
    }
    Ok(RepRelationsReport { retained, mismatches, gibbs })
}

/// Exact form of `Σ_{J₀|J, n(J)≤X} n(J)^{-β} = n(J₀)^{-β} Σ_{n(J')≤X/n(J₀)} n(J')^{-β}`:
/// the norm distributions of `{J : J₀ | J, n(J) ≤ X}` and `J₀·{J' : n(J') ≤
/// X/n(J₀)}` agree, which gives the identity for every β. Returns the number
/// of norms at which the counts differ.
pub fn rearrangement_mismatches(rep: &TruncatedCMRep, j0: QuadIdeal) -> usize {
    let n0 = j0.norm();
    let mut lhs: HashMap<u64, i64> = HashMap::new();
    for e in &rep.ideals {
        if j0.divides(e.ideal) {
            *lhs.entry(e.norm).or_default() += 1;
        }
    }
    for e in &rep.ideals {
        if e.norm * n0 > rep.bound {
            continue;
        }
        let prod = j0.mul(e.ideal);
        if rep.index_of(prod).is_none() {
            return usize::MAX;
        }
        *lhs.entry(e.norm * n0).or_default() -= 1;
    }
    lhs.values().filter(|&&v| v != 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::prime_ideals_up_to;

    fn beta(v: f64) -> Float {
        Float::with_val(128, v)
    }

    fn rep(d: i64, x: u64) -> TruncatedCMRep {
        TruncatedCMRep::new(ClassGroup::new(d).unwrap(), x).unwrap()
    }

    #[test]
    fn normalization_and_e_j() {
        let r = rep(-4, 100_000);
        let one = cm_state_value(&r, &CMFunction::one(), 0, &beta(2.0)).unwrap();
        assert!(one.exact && one.exact_value() == Some(&CyclotomicNumber::one()));
        let p = prime_ideals_up_to(r.group().field(), 2)[0].ideal;
        let v = cm_state_value(&r, &CMFunction::e(p), 0, &beta(2.0)).unwrap();
        assert!((v.real(128) - 0.25f64).abs() < 1e-4);
        assert!(v.tail_bound < 1e-3);
        assert!(cm_state_value(&r, &CMFunction::one(), 0, &beta(1.0)).is_err());
    }

    #[test]
    fn covariance_examples() {
        let r = rep(-15, 20_000);
        let p2 = prime_ideals_up_to(r.group().field(), 2)[0].ideal;
        let c = cm_symmetry_covariance_check(&r, 0, p2, &CMFunction::chi(1), &beta(2.0)).unwrap();
        assert!(c.holds(), "{} > {}", c.residual.to_f64(), c.tolerance.to_f64());
        let unit = QuadIdeal::unit(r.group().field());
        let c = cm_symmetry_covariance_check(&r, 1, unit, &CMFunction::chi(1), &beta(2.0)).unwrap();
        assert_eq!(c.residual, 0);
    }

    #[test]
    fn relations_in_truncated_rep() {
        let r = rep(-4, 10_000);
        let k = r.group().field();
        let js: Vec<QuadIdeal> = prime_ideals_up_to(k, 13).into_iter().map(|p| p.ideal).collect();
        let report = cm_rep_relations_check(&r, &js, &beta(2.0)).unwrap();
        assert!(report.mismatches.is_empty(), "{:?}", &report.mismatches[..3.min(report.mismatches.len())]);
        assert!(report.passed());
        let big = QuadIdeal::principal_integer(k, 11);
        assert!(matches!(cm_rep_relations_check(&r, &[big], &beta(2.0)), Err(Error::Truncation(_))));
    }

    #[test]
    fn rearrangement_is_exact() {
        let r = rep(-23, 5_000);
        for p in prime_ideals_up_to(r.group().field(), 10) {
            assert_eq!(rearrangement_mismatches(&r, p.ideal), 0);
            assert_eq!(rearrangement_mismatches(&r, p.ideal.mul(p.ideal)), 0);
        }
    }

    #[test]
    fn ground_states() {
        let g = ClassGroup::new(-23).unwrap();
        let p2 = prime_ideals_up_to(g.field(), 2)[0].ideal;
        assert!(cm_ground_state(&g, &CMFunction::e(p2), 1).unwrap().is_zero());
        assert_eq!(cm_ground_state(&g, &CMFunction::one(), 2).unwrap(), CyclotomicNumber::one());
        assert_eq!(cm_ground_state(&g, &CMFunction::chi(1), 1).unwrap(), g.character_value(1, 1));
        assert!(ground_action_is_regular(&g).unwrap());
        assert!(ground_action_is_regular(&ClassGroup::new(-84).unwrap()).unwrap());
    }

    #[test]
    fn low_temperature_limit() {
        let r = rep(-23, 1_000);
        let g = r.group();
        let p2 = prime_ideals_up_to(g.field(), 2)[0].ideal;
        for f in [CMFunction::chi(1), CMFunction::e(p2), CMFunction::chi(2).with_divisor(p2)] {
            for base in 0..3 {
                let v = cm_state_value(&r, &f, base, &beta(20.0)).unwrap().complex(128);
                let g0 = cm_ground_state(g, &f, base).unwrap().to_complex(128);
                assert!(complex_abs(&Complex::with_val(128, v - g0)) < 1e-4);
            }
        }
    }
}
