//! Serializable results of state evaluations.

use std::collections::BTreeMap;

use rug::{Complex, Float};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::exact::precision::to_decimal_string;
use crate::exact::CyclotomicNumber;

/// Value of a state: a numerical complex number or an exact cyclotomic one.
#[derive(Debug, Clone)]
pub enum StateValue {
    Numeric(Complex),
    Exact(CyclotomicNumber),
}

/// Result of evaluating a state on an element or test function.
///
/// Serializes as
/// `{"value": {"re", "im"} | {"cyclotomic": {"level", "coeffs"}}, "tail_bound", "exact", "params"}`
/// with decimals written as strings. Cyclotomic coefficients are given in
/// the power basis of `ℚ[x]/(Φ_level)`, `x = exp(2πi/level)`.
#[derive(Debug, Clone)]
pub struct StateReport {
    pub value: StateValue,
    pub tail_bound: Float,
    pub exact: bool,
    pub params: BTreeMap<String, String>,
    /// Significant digits used when rendering decimals.
    pub digits: u32,
}

impl StateReport {
    pub fn exact(value: CyclotomicNumber, digits: u32) -> Self {
        StateReport {
            value: StateValue::Exact(value),
            tail_bound: Float::new(64),
            exact: true,
            params: BTreeMap::new(),
            digits,
        }
    }

    pub fn numeric(value: Complex, tail_bound: Float, digits: u32) -> Self {
        StateReport { value: StateValue::Numeric(value), tail_bound, exact: false, params: BTreeMap::new(), digits }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Numerical value at the requested precision (exact values are embedded
    /// via `ζ_n = exp(2πi/n)`).
    pub fn complex(&self, prec_bits: u32) -> Complex {
        match &self.value {
            StateValue::Numeric(z) => Complex::with_val(prec_bits, z),
            StateValue::Exact(c) => c.to_complex(prec_bits),
        }
    }

    pub fn real(&self, prec_bits: u32) -> Float {
        self.complex(prec_bits).real().clone()
    }

    pub fn exact_value(&self) -> Option<&CyclotomicNumber> {
        match &self.value {
            StateValue::Exact(c) => Some(c),
            StateValue::Numeric(_) => None,
        }
    }
}

struct DecimalPair<'a>(&'a Complex, u32);

impl Serialize for DecimalPair<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("re", &to_decimal_string(self.0.real(), self.1))?;
        m.serialize_entry("im", &to_decimal_string(self.0.imag(), self.1))?;
        m.end()
    }
}

/// `{"level": n, "coeffs": ["p/q", ...]}` in the power basis.
pub struct CyclotomicJson<'a>(pub &'a CyclotomicNumber);

impl Serialize for CyclotomicJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.0.power_basis_coeffs().iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("level", &self.0.level())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

struct ValueJson<'a>(&'a StateValue, u32);

impl Serialize for ValueJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            StateValue::Numeric(z) => DecimalPair(z, self.1).serialize(s),
            StateValue::Exact(c) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("cyclotomic", &CyclotomicJson(c))?;
                m.end()
            }
        }
    }
}

impl Serialize for StateReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StateReport", 4)?;
        st.serialize_field("value", &ValueJson(&self.value, self.digits))?;
        st.serialize_field("tail_bound", &to_decimal_string(&self.tail_bound, 6))?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("params", &self.params)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn exact_report_json() {
        let v = CyclotomicNumber::root(4, 1).scale(&Rational::from((-1, 2)));
        let r = StateReport::exact(v, 20).with_param("a", "1/4");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["exact"], true);
        assert_eq!(json["value"]["cyclotomic"]["level"], 4);
        assert_eq!(json["value"]["cyclotomic"]["coeffs"], serde_json::json!(["0", "-1/2"]));
        assert_eq!(json["tail_bound"], "0");
        assert_eq!(json["params"]["a"], "1/4");
    }

    #[test]
    fn numeric_report_json() {
        let z = Complex::with_val(100, (-0.5, 0.0));
        let r = StateReport::numeric(z, Float::with_val(100, 1e-5), 10);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["exact"], false);
        assert!(json["value"]["re"].as_str().unwrap().starts_with("-5.000"));
        assert_eq!(json["value"]["im"], "0");
    }
}
