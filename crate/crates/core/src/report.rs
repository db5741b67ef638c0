//! Report types and their deterministic serialization.

use crate::error::Result;
use crate::exact::{Poly, Rational, Var};
use crate::qseries::Comparison;
use num::{Signed, Zero};
use serde_json::{json, Value};

pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integers become JSON numbers when they fit, other rationals strings.
pub fn rational_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return Value::from(i);
        }
    }
    Value::from(rational_string(r))
}

pub fn roots_json(var: &str, roots: &[(Rational, u32)]) -> Value {
    Value::from(
        roots
            .iter()
            .map(|(r, m)| json!({ var: rational_json(r), "mult": m }))
            .collect::<Vec<_>>(),
    )
}

/// Rational roots with multiplicities, leading coefficient, and the monic
/// factored form, e.g. `mu^3*(mu-1)`.
pub fn factored(p: &Poly, v: Var) -> Result<(Vec<(Rational, u32)>, Rational, String)> {
    if p.is_zero() {
        return Ok((vec![], Rational::zero(), "0".into()));
    }
    let coeffs = p.to_univariate(v).ok_or_else(|| {
        crate::Error::Invalid(format!("expected a polynomial in {v} alone"))
    })?;
    let lc = coeffs.last().cloned().unwrap_or_else(Rational::zero);
    let (roots, rest) = p.rational_roots(v)?;
    let mut parts = Vec::new();
    for (r, m) in &roots {
        let base = if r.is_zero() {
            v.name().to_string()
        } else if r.is_negative() {
            format!("({v}+{})", rational_string(&-r.clone()))
        } else {
            format!("({v}-{})", rational_string(r))
        };
        parts.push(if *m > 1 { format!("{base}^{m}") } else { base });
    }
    let rest = rest.monic();
    if rest != Poly::one() {
        parts.push(format!("({})", rest.to_string().replace(' ', "")));
    }
    let s = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    Ok((roots, lc, s))
}

/// Outcome of comparing two sides of an identity.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub id: String,
    pub params: Vec<(String, String)>,
    pub order: usize,
    pub comparison: Comparison,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.comparison.pass
    }

    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect();
        let coeffs: Vec<Value> = self
            .comparison
            .rows
            .iter()
            .map(|r| json!({"k": r.k, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "match": r.matches}))
            .collect();
        let mut v = json!({
            "id": self.id,
            "params": params,
            "order": self.order,
            "pass": self.pass(),
            "coeffs": coeffs,
        });
        if let Some(bad) = self.comparison.first_mismatch() {
            v["first_mismatch"] = Value::from(bad.k);
        }
        if !self.notes.is_empty() {
            v["notes"] = Value::from(self.notes.clone());
        }
        v
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("k\tlhs\trhs\tmatch\n");
        for r in &self.comparison.rows {
            s.push_str(&format!("{}\t{}\t{}\t{}\n", r.k, r.lhs, r.rhs, r.matches));
        }
        s
    }
}
