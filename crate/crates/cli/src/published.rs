//! Reference values shipped with the tool. They are compared against, never recomputed.

use std::sync::OnceLock;

use serde::Deserialize;

const DATA: &str = include_str!("../data/published.json");

#[derive(Debug, Clone, Deserialize)]
pub struct Published {
    pub linear_table: LinearTable,
    pub nonlinear_tan_table: NonlinearTable,
    pub exp_reference: ExpReference,
    pub cos_pair: CosPair,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LinearTable {
    pub source: String,
    pub rows: Vec<LinearRow>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LinearRow {
    pub function: String,
    pub m: usize,
    pub n: usize,
    #[serde(deserialize_with = "number")]
    pub abs: f64,
    #[serde(deserialize_with = "number")]
    pub rel: f64,
    #[serde(deserialize_with = "number")]
    pub rel_min: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NonlinearTable {
    pub source: String,
    pub m: usize,
    pub n: usize,
    #[serde(deserialize_with = "number")]
    pub best_abs: f64,
    pub rows: Vec<NonlinearRow>,
    pub pairs: Vec<NonlinearPair>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NonlinearRow {
    pub taylor_degree: usize,
    #[serde(deserialize_with = "number")]
    pub cond: f64,
    #[serde(deserialize_with = "number")]
    pub abs: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NonlinearPair {
    pub first: usize,
    pub second: usize,
    #[serde(deserialize_with = "number")]
    pub error_approximant_abs: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Errors {
    #[serde(deserialize_with = "number")]
    pub abs: f64,
    #[serde(deserialize_with = "number")]
    pub rel: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ErrorsWithCond {
    #[serde(deserialize_with = "number")]
    pub abs: f64,
    #[serde(deserialize_with = "number")]
    pub rel: f64,
    #[serde(deserialize_with = "number")]
    pub cond: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct NormalizationEffect {
    pub b0: ErrorsWithCond,
    pub bm: ErrorsWithCond,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct MethodComparison {
    pub linear: Errors,
    pub nonlinear: Errors,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExpReference {
    pub source: String,
    #[serde(deserialize_with = "number")]
    pub classical_pade_2_2_abs_at_1: f64,
    #[serde(deserialize_with = "number")]
    pub linear_2_2_abs: f64,
    #[serde(deserialize_with = "number")]
    pub best_2_2_abs: f64,
    pub normalization_15_0: NormalizationEffect,
    pub method_3_3: MethodComparison,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoefficientSet {
    /// Decimal literals, so they can be parsed at any precision.
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CosPair {
    pub source: String,
    #[serde(deserialize_with = "number")]
    pub abs: f64,
    #[serde(deserialize_with = "number")]
    pub rel: f64,
    #[serde(deserialize_with = "number")]
    pub error_approximant_abs: f64,
    pub first: CoefficientSet,
    pub second: CoefficientSet,
}

fn number<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

/// The shipped table, parsed once.
pub fn published() -> &'static Published {
    static CELL: OnceLock<Published> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(DATA).expect("shipped data file is valid"))
}

/// Ratio of `got` to `want`, folded so that it is at least 1.
pub fn fold_ratio(got: f64, want: f64) -> f64 {
    let r = got / want;
    if r >= 1.0 {
        r
    } else {
        1.0 / r
    }
}
