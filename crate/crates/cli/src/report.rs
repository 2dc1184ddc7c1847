use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use malle_core::analytic::{EulerProductResult, ProductStatus};
use malle_core::analytic::CrossCheckReport;
use malle_core::exponents::ExponentReport;
use malle_core::{ExactRational, GroupDescriptor};

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float written with 17 significant digits, as a string.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Float17(pub f64);

impl fmt::Display for Float17 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

impl Serialize for Float17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Float17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map(Float17).map_err(serde::de::Error::custom)
    }
}

/// Where a payload's numbers come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Truncated(u64),
    Float,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Exact => f.write_str("exact"),
            Provenance::Truncated(p) => write!(f, "truncated:{p}"),
            Provenance::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Provenance::Exact),
            "float" => Ok(Provenance::Float),
            _ => s
                .strip_prefix("truncated:")
                .and_then(|p| p.parse().ok())
                .map(Provenance::Truncated)
                .ok_or_else(|| format!("unknown provenance {s:?}")),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Provenance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub payload: Payload,
    pub elapsed_seconds: Float17,
}

impl Report {
    pub fn new(config: RunConfig, payload: Payload, elapsed_seconds: f64) -> Self {
        Self { schema: SCHEMA, tool_version: TOOL_VERSION.to_string(), config, payload, elapsed_seconds: Float17(elapsed_seconds) }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// Canonical payload text; identical configurations yield identical bytes.
    pub fn payload_json(&self) -> serde_json::Result<String> {
        serde_json::to_string(&self.payload)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    Counterexample(CounterexamplePayload),
    Count(CountPayload),
    Predict(PredictPayload),
    Euler(EulerPayload),
    Selftest(SelftestPayload),
    Group(GroupPayload),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexamplePayload {
    pub provenance: Provenance,
    pub report: ExponentReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    Hom,
    Epi,
    Tuples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountRow {
    pub x: String,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountPayload {
    pub provenance: Provenance,
    pub n: usize,
    pub mode: CountMode,
    pub rows: Vec<CountRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple_dump: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EulerKind {
    C0,
    Mb,
    Tame,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// The cocycle groups `G_n`.
    Gn,
    /// The mixed 2·3 example.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductPayload {
    pub provenance: Provenance,
    pub value: Float17,
    pub ln_value: Float17,
    pub truncation_bound: u64,
    pub tail_estimate: Float17,
    pub class_modulus: u64,
    /// Keyed by residue, written as a decimal string.
    pub per_class_prime_counts: BTreeMap<String, u64>,
    pub status: ProductStatus,
}

impl From<&EulerProductResult> for ProductPayload {
    fn from(r: &EulerProductResult) -> Self {
        Self {
            provenance: Provenance::Truncated(r.truncation_bound),
            value: Float17(r.value),
            ln_value: Float17(r.ln_value),
            truncation_bound: r.truncation_bound,
            tail_estimate: Float17(r.tail_estimate),
            class_modulus: r.class_modulus,
            per_class_prime_counts: r.per_class_prime_counts.iter().map(|(c, &k)| (c.to_string(), k)).collect(),
            status: r.status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerPayload {
    pub euler_kind: EulerKind,
    pub family: Family,
    pub n: usize,
    pub product: ProductPayload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictRow {
    pub x: String,
    pub value: Float17,
    pub ln_value: Float17,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictPayload {
    pub provenance: Provenance,
    pub n: usize,
    pub alpha: ExactRational,
    pub rows: Vec<PredictRow>,
    pub c0: ProductPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestPayload {
    pub provenance: Provenance,
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheckReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupPayload {
    pub provenance: Provenance,
    pub descriptor: GroupDescriptor,
    pub order: u64,
    pub exponent: u64,
    pub abelianization: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub naive_b: Option<i64>,
}

/// CSV for the tabular payloads; other payloads have no tabular form.
pub fn to_csv(payload: &Payload) -> Option<String> {
    match payload {
        Payload::Count(c) => {
            let mut out = String::from("n,mode,x,count\n");
            let mode = serde_json::to_value(c.mode).ok()?.as_str()?.to_string();
            for row in &c.rows {
                out.push_str(&format!("{},{},{},{}\n", c.n, mode, row.x, row.count));
            }
            Some(out)
        }
        Payload::Predict(p) => {
            let mut out = String::from("n,x,value,ln_value,prime_bound\n");
            for row in &p.rows {
                out.push_str(&format!("{},{},{},{},{}\n", p.n, row.x, row.value, row.ln_value, p.c0.truncation_bound));
            }
            Some(out)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        for x in [0.1, 1.0 / 3.0, 6.579251212010101, 1e-300, 12345.678] {
            let text = Float17(x).to_string();
            let digits = text.split('e').next().unwrap().replace(['.', '-'], "");
            assert_eq!(digits.len(), 17, "{text}");
            assert_eq!(text.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn provenance_strings() {
        for p in [Provenance::Exact, Provenance::Float, Provenance::Truncated(100_000)] {
            assert_eq!(p.to_string().parse::<Provenance>().unwrap(), p);
        }
        assert_eq!(Provenance::Truncated(7).to_string(), "truncated:7");
        assert!("truncated:x".parse::<Provenance>().is_err());
    }
}
