//! The single JSON report document written to standard output.

use crate::config::JobConfig;
use etale_core::spectral::Verdict;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Serialize)]
pub struct OracleResult {
    pub suite: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

#[derive(Debug, Serialize)]
pub struct CohomologyDump {
    pub rank: usize,
    pub antisymmetrization: Vec<Vec<etale_core::ExactAngle>>,
    pub bicharacter_representative: Vec<Vec<etale_core::ExactAngle>>,
    pub centre_basis: Vec<Vec<i64>>,
    pub omega_prime: Vec<Vec<etale_core::ExactAngle>>,
    pub quotient_orders: Vec<String>,
    pub quotient_pairing: Vec<Vec<etale_core::ExactAngle>>,
    pub twisted_group_algebra_simple: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyDump>,
    pub oracle_results: Vec<OracleResult>,
    /// Per-stage wall-clock milliseconds; excluded from the determinism
    /// contract.
    pub timings: BTreeMap<String, u128>,
    pub input_echo: JobConfig,
}

impl Report {
    pub fn new(input_echo: JobConfig) -> Self {
        Self {
            verdict: None,
            cohomology: None,
            oracle_results: Vec::new(),
            timings: BTreeMap::new(),
            input_echo,
        }
    }
}
