//! Class groups of imaginary quadratic orders via reduced forms.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::field::{QuadElement, QuadField};
use super::form::{compose, principal_generator, QuadForm};
use super::ideal::QuadIdeal;
use crate::exact::arith::{factorize, gcd, lcm};
use crate::exact::CyclotomicNumber;
use crate::{Error, Result};

/// Reduced primitive forms of discriminant `d`, principal form first, then by
/// `(a, b)`.
pub fn reduced_forms(d: i64) -> Vec<QuadForm> {
    let mut out = Vec::new();
    let a_max = ((d.unsigned_abs() as f64) / 3.0).sqrt().floor() as i64 + 1;
    for a in 1..=a_max {
        for b in -a + 1..=a {
            if let Some(f) = QuadForm::from_ab(d, a, b) {
                let g = gcd(gcd(a as u64, b.unsigned_abs()), f.c as u64);
                if f.is_reduced() && g == 1 {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Composition table `t[i][j] = index(f_i ∘ f_j)`; `None` when the law leaves
/// the set of forms.
pub type CompositionTable = Vec<Vec<Option<usize>>>;

pub fn composition_table(forms: &[QuadForm], law: &dyn Fn(&QuadForm, &QuadForm) -> QuadForm) -> CompositionTable {
    let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    forms
        .iter()
        .map(|f| forms.iter().map(|g| index.get(&law(f, g)).copied()).collect())
        .collect()
}

/// Count of violated closure, identity, inverse, commutativity and
/// associativity instances.
pub fn group_axiom_violations(table: &CompositionTable, identity: usize) -> usize {
    let h = table.len();
    let mut bad = 0;
    for i in 0..h {
        for j in 0..h {
            if table[i][j].is_none() {
                bad += 1;
            }
            if table[i][j] != table[j][i] {
                bad += 1;
            }
        }
        if table[identity][i] != Some(i) || table[i][identity] != Some(i) {
            bad += 1;
        }
        if !(0..h).any(|j| table[i][j] == Some(identity)) {
            bad += 1;
        }
    }
    for i in 0..h {
        for j in 0..h {
            for k in 0..h {
                let left = table[i][j].and_then(|ij| table[ij][k]);
                let right = table[j][k].and_then(|jk| table[i][jk]);
                if left.is_none() || left != right {
                    bad += 1;
                }
            }
        }
    }
    bad
}

/// `Cl(𝒪)` with its multiplication table and a full character table.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    field: QuadField,
    forms: Vec<QuadForm>,
    index: HashMap<QuadForm, usize>,
    table: Vec<Vec<usize>>,
    generators: Vec<(usize, u64)>,
    coords: Vec<Vec<u64>>,
    exponent: u64,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<Self> {
        Self::build_with(d, &compose)
    }

    /// Builds the group from an arbitrary composition law; fails unless the
    /// law yields an abelian group on the reduced forms.
    pub fn build_with(d: i64, law: &dyn Fn(&QuadForm, &QuadForm) -> QuadForm) -> Result<Self> {
        let field = QuadField::new(d)?;
        let forms = reduced_forms(d);
        let raw = composition_table(&forms, law);
        if group_axiom_violations(&raw, 0) != 0 {
            return Err(Error::domain(format!("composition law does not define a group for D = {d}")));
        }
        let table: Vec<Vec<usize>> = raw.into_iter().map(|row| row.into_iter().map(Option::unwrap).collect()).collect();
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut g = ClassGroup { field, forms, index, table, generators: Vec::new(), coords: Vec::new(), exponent: 1 };
        g.decompose()?;
        Ok(g)
    }

    fn power(&self, x: usize, e: u64) -> usize {
        (0..e).fold(0, |acc, _| self.table[acc][x])
    }

    pub fn order_of(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut n = 1;
        while acc != 0 {
            acc = self.table[acc][x];
            n += 1;
        }
        n
    }

    /// Primary decomposition: in each `p`-part repeatedly take an element of
    /// maximal order modulo the current subgroup and correct it to have that
    /// order in the group itself.
    fn decompose(&mut self) -> Result<()> {
        let h = self.forms.len() as u64;
        let mut gens: Vec<(usize, u64)> = Vec::new();
        for (p, _) in factorize(h) {
            let part: Vec<usize> =
                (0..self.forms.len()).filter(|&x| factorize(self.order_of(x)).iter().all(|&(q, _)| q == p)).collect();
            let mut local: Vec<(usize, u64)> = Vec::new();
            loop {
                let span = self.span(&local);
                if span.len() == part.len() {
                    break;
                }
                let rel_order = |x: usize| -> (u64, usize) {
                    let mut acc = x;
                    let mut m = 1;
                    while !span.contains_key(&acc) {
                        acc = self.table[acc][x];
                        m += 1;
                    }
                    (m, acc)
                };
                let (x, (m, hit)) = part
                    .iter()
                    .map(|&x| (x, rel_order(x)))
                    .max_by_key(|&(x, (m, _))| (m, std::cmp::Reverse(x)))
                    .expect("nonempty p-part");
                let c = &span[&hit];
                let mut y = x;
                for (i, &(g, n)) in local.iter().enumerate() {
                    if !c[i].is_multiple_of(m) {
                        return Err(Error::domain("class group decomposition failed"));
                    }
                    let k = (c[i] / m) % n;
                    y = self.table[y][self.power(g, n - k)];
                }
                debug_assert_eq!(self.order_of(y), m);
                local.push((y, m));
            }
            gens.extend(local);
        }
        let span = self.span(&gens);
        if span.len() != self.forms.len() {
            return Err(Error::domain("class group generators do not span"));
        }
        let mut coords = vec![Vec::new(); self.forms.len()];
        for (x, c) in span {
            coords[x] = c;
        }
        self.exponent = gens.iter().fold(1, |e, &(_, n)| lcm(e, n));
        self.generators = gens;
        self.coords = coords;
        Ok(())
    }

    /// Elements `Σ c_i g_i` with `0 ≤ c_i < n_i`, keyed by element.
    fn span(&self, gens: &[(usize, u64)]) -> HashMap<usize, Vec<u64>> {
        let mut out = HashMap::from([(0usize, vec![0u64; gens.len()])]);
        for (i, &(g, n)) in gens.iter().enumerate() {
            let mut next = HashMap::new();
            for (x, c) in &out {
                let mut acc = *x;
                for k in 0..n {
                    let mut ck = c.clone();
                    ck[i] = k;
                    next.insert(acc, ck);
                    acc = self.table[acc][g];
                }
            }
            out = next;
        }
        out
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn discriminant(&self) -> i64 {
        self.field.discriminant()
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.power(x, self.order_of(x) - 1)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Invariant factors `n_1, n_2, …` with `n_{i+1} | n_i`.
    pub fn structure(&self) -> Vec<u64> {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(_, n) in &self.generators {
            let p = factorize(n)[0].0;
            by_prime.entry(p).or_default().push(n);
        }
        for v in by_prime.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        (0..rank).map(|i| by_prime.values().filter_map(|v| v.get(i)).product()).collect()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn index_of(&self, form: &QuadForm) -> Option<usize> {
        self.index.get(&form.reduce()).copied()
    }

    /// Class of an ideal.
    pub fn ideal_class(&self, ideal: QuadIdeal) -> usize {
        self.index_of(&QuadForm::from_ideal(ideal)).expect("reduced forms cover all classes")
    }

    /// The ideal `aℤ + ((−b + √D)/2)ℤ` of a class representative.
    pub fn class_ideal(&self, x: usize) -> QuadIdeal {
        self.forms[x].to_ideal(self.field)
    }

    pub fn character_count(&self) -> usize {
        self.forms.len()
    }

    /// Exponent `k` in `χ(x) = exp(2πi k / E)` for character `chi`, where
    /// characters are numbered lexicographically in their generator
    /// exponents (character 0 is trivial).
    pub fn character_exponent(&self, chi: usize, x: usize) -> u64 {
        let mut rest = chi as u64;
        let mut k = vec![0u64; self.generators.len()];
        for i in (0..self.generators.len()).rev() {
            let n = self.generators[i].1;
            k[i] = rest % n;
            rest /= n;
        }
        let e = self.exponent;
        self.generators
            .iter()
            .enumerate()
            .map(|(i, &(_, n))| k[i] * self.coords[x][i] % n * (e / n))
            .sum::<u64>()
            % e
    }

    /// `h × h` table of exponents modulo [`ClassGroup::exponent`].
    pub fn character_table(&self) -> Vec<Vec<u64>> {
        (0..self.character_count()).map(|c| (0..self.class_number()).map(|x| self.character_exponent(c, x)).collect()).collect()
    }

    pub fn character_value(&self, chi: usize, x: usize) -> CyclotomicNumber {
        CyclotomicNumber::root(self.exponent, self.character_exponent(chi, x) as i64)
    }

    pub fn is_trivial_character(&self, chi: usize) -> bool {
        (0..self.class_number()).all(|x| self.character_exponent(chi, x) == 0)
    }

    /// Order of `χ` in the dual group.
    pub fn character_order(&self, chi: usize) -> u64 {
        let e = self.exponent;
        (0..self.class_number()).map(|x| e / gcd(e, self.character_exponent(chi, x))).fold(1, lcm)
    }

    pub fn json(&self) -> ClassGroupJson {
        ClassGroupJson {
            d: self.discriminant(),
            h: self.class_number(),
            forms: self.forms.iter().map(|f| [f.a, f.b, f.c]).collect(),
            structure: self.structure(),
            exponent: self.exponent,
            characters: self.character_table(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassGroupJson {
    #[serde(rename = "D")]
    pub d: i64,
    pub h: usize,
    pub forms: Vec<[i64; 3]>,
    pub structure: Vec<u64>,
    pub exponent: u64,
    pub characters: Vec<Vec<u64>>,
}

/// Class of an ideal computed by form reduction.
pub fn ideal_class(group: &ClassGroup, ideal: QuadIdeal) -> usize {
    group.ideal_class(ideal)
}

/// A generator `(x + y√D)/2` of a principal ideal, `None` otherwise.
pub fn is_principal_with_generator(ideal: QuadIdeal) -> Option<QuadElement> {
    principal_generator(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::field::negative_fundamental_discriminants;
    use crate::quad::ideal::prime_ideals_up_to;

    #[test]
    fn class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-15, 2), (-23, 3), (-47, 5), (-84, 4), (-163, 1), (-199, 9)] {
            assert_eq!(ClassGroup::new(d).unwrap().class_number(), h, "D = {d}");
        }
        assert!(ClassGroup::new(-12).is_err());
    }

    #[test]
    fn structures() {
        assert_eq!(ClassGroup::new(-23).unwrap().structure(), vec![3]);
        assert_eq!(ClassGroup::new(-84).unwrap().structure(), vec![2, 2]);
        assert_eq!(ClassGroup::new(-4).unwrap().structure(), Vec::<u64>::new());
        assert_eq!(ClassGroup::new(-56).unwrap().structure(), vec![4]);
    }

    #[test]
    fn characters_are_homomorphisms() {
        for d in negative_fundamental_discriminants(-200) {
            let g = ClassGroup::new(d).unwrap();
            let e = g.exponent();
            let table = g.character_table();
            for row in &table {
                for x in 0..g.class_number() {
                    for y in 0..g.class_number() {
                        assert_eq!((row[x] + row[y]) % e, row[g.mul(x, y)]);
                    }
                }
            }
            let mut rows = table.clone();
            rows.sort();
            rows.dedup();
            assert_eq!(rows.len(), g.class_number(), "characters distinct for D = {d}");
            assert!(g.is_trivial_character(0));
        }
    }

    #[test]
    fn broken_law_is_rejected() {
        let swapped = |f: &QuadForm, g: &QuadForm| compose(f, &g.inverse());
        assert!(ClassGroup::build_with(-23, &swapped).is_err());
    }

    #[test]
    fn ideal_classes() {
        let g = ClassGroup::new(-15).unwrap();
        let k = g.field();
        let p2 = prime_ideals_up_to(k, 2)[0].ideal;
        let c = g.ideal_class(p2);
        assert_ne!(c, 0);
        assert_eq!(g.order_of(c), 2);
        assert!(is_principal_with_generator(p2).is_none());
        assert_eq!(g.ideal_class(p2.mul(p2.conj())), 0);
        let seven = QuadIdeal::principal_integer(k, 7);
        assert_eq!(is_principal_with_generator(seven).unwrap().norm(), 49);
    }
}
