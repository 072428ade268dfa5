//! Finite model of K-lattices: a point is the commensurability class of an
//! invertible base lattice together with the ideal `J` of `J⁻¹L₀`.

use std::fmt;

use rug::Rational;

use crate::exact::CyclotomicNumber;
use crate::quad::{ClassGroup, QuadField, QuadIdeal};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KLatticePoint {
    /// Class of the invertible base lattice, as an index into the class group.
    pub base: usize,
    pub div: QuadIdeal,
}

impl KLatticePoint {
    pub fn invertible(field: QuadField, base: usize) -> Self {
        KLatticePoint { base, div: QuadIdeal::unit(field) }
    }
}

/// `J⁻¹(J'⁻¹L₀) = (JJ')⁻¹L₀`.
pub fn klattice_action(p: KLatticePoint, j: QuadIdeal) -> KLatticePoint {
    KLatticePoint { base: p.base, div: p.div.mul(j) }
}

/// Diagonal test function `scalar · e_{J₀} · f_χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMFunction {
    pub divisor: Option<QuadIdeal>,
    pub character: Option<usize>,
    pub scalar: Rational,
}

impl CMFunction {
    pub fn constant(c: Rational) -> Self {
        CMFunction { divisor: None, character: None, scalar: c }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn e(j: QuadIdeal) -> Self {
        CMFunction { divisor: Some(j), ..Self::one() }
    }

    pub fn chi(k: usize) -> Self {
        CMFunction { character: Some(k), ..Self::one() }
    }

    pub fn with_divisor(self, j: QuadIdeal) -> Self {
        CMFunction { divisor: Some(j), ..self }
    }

    pub fn with_character(self, k: usize) -> Self {
        CMFunction { character: Some(k), ..self }
    }

    /// `true` when the function is constant on the lattice model.
    pub fn is_constant(&self, group: &ClassGroup) -> bool {
        self.divisor.is_none_or(|j| j.is_unit()) && self.character.is_none_or(|k| group.is_trivial_character(k))
    }

    /// Parses products such as `eJ(2,2)*chi(1)`, `-1/2*chi(1)` or `1`.
    ///
    /// `eJ(a,b)` is the ideal `aℤ + ((b + √D)/2)ℤ`, `eJ(m,a,b)` adds a content
    /// `m`; `chi(k)` is the `k`-th character of the class group.
    pub fn parse(group: &ClassGroup, s: &str) -> Result<Self> {
        let mut f = Self::one();
        let mut seen_e = false;
        let mut seen_chi = false;
        for factor in s.split('*').map(str::trim) {
            if let Some(args) = factor.strip_prefix("eJ(").and_then(|r| r.strip_suffix(')')) {
                if std::mem::replace(&mut seen_e, true) {
                    return Err(Error::parse(format!("'{s}': at most one eJ factor")));
                }
                f.divisor = Some(QuadIdeal::parse(group.field(), args)?);
            } else if let Some(arg) = factor.strip_prefix("chi(").and_then(|r| r.strip_suffix(')')) {
                if std::mem::replace(&mut seen_chi, true) {
                    return Err(Error::parse(format!("'{s}': at most one chi factor")));
                }
                let k: usize = arg.trim().parse().map_err(|e| Error::parse(format!("'{factor}': {e}")))?;
                if k >= group.character_count() {
                    return Err(Error::domain(format!(
                        "chi({k}) out of range: the class group has {} characters",
                        group.character_count()
                    )));
                }
                f.character = Some(k);
            } else {
                let q: Rational = factor.parse().map_err(|_| Error::parse(format!("unrecognized factor '{factor}' in '{s}'")))?;
                f.scalar *= q;
            }
        }
        Ok(f)
    }
}

impl fmt::Display for CMFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.scalar != 1 || (self.divisor.is_none() && self.character.is_none()) {
            parts.push(self.scalar.to_string());
        }
        if let Some(j) = self.divisor {
            parts.push(if j.content() == 1 {
                format!("eJ({},{})", j.a(), j.b())
            } else {
                format!("eJ({},{},{})", j.content(), j.a(), j.b())
            });
        }
        if let Some(k) = self.character {
            parts.push(format!("chi({k})"));
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Exponent of `χ(c)·χ([J])⁻¹` modulo the group exponent.
pub(crate) fn character_phase(group: &ClassGroup, chi: usize, base: usize, class: usize) -> u64 {
    let e = group.exponent();
    (group.character_exponent(chi, base) + e - group.character_exponent(chi, class)) % e
}

/// `f(J⁻¹L₀) = scalar · [J₀ | J] · χ(L₀) χ̃(J)⁻¹`.
pub fn cm_function_eval(group: &ClassGroup, f: &CMFunction, p: KLatticePoint) -> CyclotomicNumber {
    if let Some(j0) = f.divisor {
        if !j0.divides(p.div) {
            return CyclotomicNumber::zero(1);
        }
    }
    let value = match f.character {
        Some(chi) => {
            let phase = character_phase(group, chi, p.base, group.ideal_class(p.div));
            CyclotomicNumber::root(group.exponent(), phase as i64)
        }
        None => CyclotomicNumber::one(),
    };
    value.scale(&f.scalar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::prime_ideals_up_to;

    #[test]
    fn evaluation_examples() {
        let g = ClassGroup::new(-15).unwrap();
        let k = g.field();
        let p2 = prime_ideals_up_to(k, 2)[0].ideal;
        let pt = KLatticePoint::invertible(k, 0);
        assert_eq!(cm_function_eval(&g, &CMFunction::e(QuadIdeal::unit(k)), pt), CyclotomicNumber::one());
        assert!(cm_function_eval(&g, &CMFunction::e(p2), pt).is_zero());
        assert_eq!(cm_function_eval(&g, &CMFunction::chi(0), pt), CyclotomicNumber::one());
        let moved = klattice_action(pt, p2);
        assert_eq!(cm_function_eval(&g, &CMFunction::e(p2), moved), CyclotomicNumber::one());
        // nontrivial genus character on the nonprincipal class
        assert_eq!(cm_function_eval(&g, &CMFunction::chi(1), moved), CyclotomicNumber::from_rational((-1).into()));
    }

    #[test]
    fn action_is_a_semigroup_action() {
        let g = ClassGroup::new(-23).unwrap();
        let k = g.field();
        let ps = prime_ideals_up_to(k, 13);
        let pt = KLatticePoint::invertible(k, 1);
        for p in &ps {
            for q in &ps {
                let a = klattice_action(klattice_action(pt, p.ideal), q.ideal);
                let b = klattice_action(klattice_action(pt, q.ideal), p.ideal);
                assert_eq!(a, b);
                assert_eq!(a, klattice_action(pt, p.ideal.mul(q.ideal)));
                assert_eq!(a.div.norm(), p.norm() * q.norm());
            }
        }
        assert_eq!(klattice_action(pt, QuadIdeal::unit(k)), pt);
    }

    #[test]
    fn parse_and_display() {
        let g = ClassGroup::new(-4).unwrap();
        let f = CMFunction::parse(&g, "eJ(2,2)*chi(0)").unwrap();
        assert_eq!(f.divisor.unwrap().norm(), 2);
        assert_eq!(CMFunction::parse(&g, &f.to_string()).unwrap(), f);
        assert_eq!(CMFunction::parse(&g, "-1/2").unwrap().scalar, Rational::from((-1, 2)));
        assert!(CMFunction::parse(&g, "chi(3)").is_err());
        assert!(CMFunction::parse(&g, "eJ(2,2)*eJ(2,2)").is_err());
        assert!(CMFunction::parse(&g, "foo").is_err());
    }
}
