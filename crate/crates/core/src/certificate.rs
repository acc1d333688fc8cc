//! Versioned JSON certificates with exact values.
//!
//! Rationals are stored as `"num/den"` strings next to a 20-digit decimal
//! rendering meant for people. The body carries no timestamps, so re-running
//! an experiment reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exact_linalg::rational::{parse_rational, to_decimal, to_fraction_string};
use crate::exact_linalg::Rational;

pub const SCHEMA: &str = "liftgap-certificate/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl ExactValue {
    pub fn new(x: &Rational) -> Self {
        Self {
            exact: to_fraction_string(x),
            decimal: to_decimal(x),
        }
    }

    pub fn value(&self) -> Option<Rational> {
        parse_rational(&self.exact)
    }
}

impl From<&Rational> for ExactValue {
    fn from(x: &Rational) -> Self {
        Self::new(x)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<ExactValue>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Refuted,
    NotRefuted,
    Verified,
    Failed,
}

impl Verdict {
    /// Whether the verdict is the one the claim predicts.
    pub fn is_expected(self) -> bool {
        matches!(
            self,
            Verdict::Feasible | Verdict::Refuted | Verdict::Verified
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub claim: String,
    pub tool_version: String,
    pub parameters: Parameters,
    pub verdict: Verdict,
    pub values: BTreeMap<String, ExactValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub enumeration_fingerprint: String,
}

impl Certificate {
    pub fn new(claim: &str, parameters: Parameters, verdict: Verdict) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            claim: claim.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            parameters,
            verdict,
            values: BTreeMap::new(),
            witness: None,
            enumeration_fingerprint: fingerprint([claim]),
        }
    }

    pub fn set_value(&mut self, name: &str, x: &Rational) {
        self.values.insert(name.to_string(), ExactValue::new(x));
    }

    pub fn value(&self, name: &str) -> Option<Rational> {
        self.values.get(name).and_then(ExactValue::value)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Rationals as `"num/den"` strings, for witness payloads.
pub fn exact_strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(to_fraction_string).collect()
}

/// SHA-256 over newline-terminated parts, hex encoded.
pub fn fingerprint<I, S>(parts: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut h = Sha256::new();
    for part in parts {
        h.update(part.as_ref().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rational::rat;

    #[test]
    fn values_round_trip() {
        let mut c = Certificate::new(
            "demo",
            Parameters {
                n: Some(10),
                ..Default::default()
            },
            Verdict::Feasible,
        );
        c.set_value("objective", &rat(5, 14));
        let json = c.to_json();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.value("objective"), Some(rat(5, 14)));
        assert_eq!(back.values["objective"].exact, "5/14");
        assert_eq!(back.values["objective"].decimal, "0.35714285714285714286");
        assert!(!json.contains("\"r\""));
    }

    #[test]
    fn fingerprint_is_order_sensitive() {
        assert_eq!(
            fingerprint(["a", "b"]),
            fingerprint(vec!["a".to_string(), "b".to_string()])
        );
        assert_ne!(fingerprint(["a", "b"]), fingerprint(["b", "a"]));
        assert_eq!(fingerprint(["a", "b"]).len(), 64);
    }
}
