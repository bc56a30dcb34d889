use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

impl InputHash {
    pub fn new(name: impl Into<String>, bytes: &[u8]) -> Self {
        InputHash { name: name.into(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// Non-finite values serialize as null; a failure then carries a certificate.
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

impl CheckResult {
    pub fn new(name: &str, pass: bool, residual: f64) -> Self {
        CheckResult { name: name.into(), pass, residual: Some(residual).filter(|r| r.is_finite()), certificate: None }
    }

    pub fn with_certificate(mut self, certificate: Value) -> Self {
        self.certificate = Some(certificate);
        self
    }

    /// A check that could not be carried out, with the reason as certificate.
    pub fn failed(name: &str, reason: impl ToString) -> Self {
        CheckResult { name: name.into(), pass: false, residual: None, certificate: Some(Value::from(reason.to_string())) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub version: &'static str,
    pub inputs: Vec<InputHash>,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub properties: Value,
    pub tolerances: Tolerances,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
}

impl ReportDocument {
    pub fn new(command: &str, tol: f64, seed: u64) -> Self {
        ReportDocument {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            inputs: Vec::new(),
            results: Vec::new(),
            properties: Value::Null,
            tolerances: Tolerances { tol },
            seed,
            output: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        let names: Vec<&str> = self.inputs.iter().map(|i| i.name.as_str()).collect();
        let _ = writeln!(s, "cpstar {} ({})", self.command, names.join(", "));
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.results {
            let residual = r.residual.map_or("-".to_owned(), |x| format!("{x:.3e}"));
            let _ = writeln!(s, "  {} {:width$}  residual {residual}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            if let Some(c) = &r.certificate {
                let _ = writeln!(s, "       certificate: {c}");
            }
        }
        for (label, v) in [("properties", &self.properties), ("output", self.output.as_ref().unwrap_or(&Value::Null))] {
            if let Some(fields) = v.as_object() {
                let _ = writeln!(s, "{label}:");
                for (k, x) in fields {
                    let _ = writeln!(s, "  {k}: {x}");
                }
            }
        }
        let _ = writeln!(s, "{}", if self.pass() { "all checks pass" } else { "some checks fail" });
        s
    }
}
