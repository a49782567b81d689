//! Serializable report records. Field names and order are part of the output
//! format; see the README for the schemas.

use serde::Serialize;
use zerogap_core::euler::EulerProductResult;
use zerogap_core::moments::GapConfig;
use zerogap_core::num_bigint::BigInt;
use zerogap_core::optimize::{SearchResult, TraceEntry};
use zerogap_core::ratio::RatioReport;
use zerogap_core::rational::{format_decimal_exact, Rational};
use zerogap_core::real::sci_upper;

use crate::error::{CliError, CliResult};

/// `q` rounded half away from zero to `digits` decimals.
pub fn round_decimal(q: &Rational, digits: u32) -> String {
    let scale = Rational::from_integer(num_pow10(digits));
    let scaled = q * &scale;
    let rounded = scaled.round();
    format_fixed(&rounded.to_integer(), digits)
}

/// Smallest decimal with `digits` places that is `>= q`.
pub fn ceil_decimal(q: &Rational, digits: u32) -> String {
    let scaled = q * Rational::from_integer(num_pow10(digits));
    format_fixed(&scaled.ceil().to_integer(), digits)
}

fn num_pow10(digits: u32) -> BigInt {
    let mut p = BigInt::from(1u8);
    for _ in 0..digits {
        p *= 10u8;
    }
    p
}

fn format_fixed(n: &BigInt, digits: u32) -> String {
    let negative = n.sign() == zerogap_core::num_bigint::Sign::Minus;
    let mut body = n.magnitude().to_string();
    let places = digits as usize;
    if places == 0 {
        return if negative { format!("-{body}") } else { body };
    }
    if body.len() <= places {
        body = format!("{}{body}", "0".repeat(places + 1 - body.len()));
    }
    let split = body.len() - places;
    format!(
        "{}{}.{}",
        if negative { "-" } else { "" },
        &body[..split],
        &body[split..]
    )
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ConfigRecord {
    pub r: u32,
    pub eta: String,
    #[serde(rename = "J")]
    pub truncation: u32,
    pub precision: u32,
    pub p0: String,
    pub p2: String,
}

impl ConfigRecord {
    pub fn new(cfg: &GapConfig) -> Self {
        Self {
            r: cfg.r(),
            eta: format_decimal_exact(cfg.eta()),
            truncation: cfg.truncation(),
            precision: cfg.precision(),
            p0: cfg.p0().to_string(),
            p2: cfg.p2().to_string(),
        }
    }

    pub const CSV_HEADER: [&'static str; 6] = ["r", "eta", "J", "precision", "p0", "p2"];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.r.to_string(),
            self.eta.clone(),
            self.truncation.to_string(),
            self.precision.to_string(),
            self.p0.clone(),
            self.p2.clone(),
        ]
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RatioRecord {
    /// Exact `c/π`.
    pub c_over_pi: String,
    pub c_over_pi_decimal: String,
    pub f_value: String,
    pub f_radius: String,
    pub tail_bound: String,
    pub tail_bound_h: String,
    pub tail_bound_k: String,
    pub certified_upper: String,
    pub admissible: bool,
    pub lambda_bound: Option<String>,
    pub h_alternates: bool,
}

impl RatioRecord {
    pub fn new(rep: &RatioReport) -> Self {
        Self {
            c_over_pi: format_decimal_exact(&rep.c_multiple),
            c_over_pi_decimal: round_decimal(&rep.c_multiple, 20),
            f_value: rep.f_decimal(),
            f_radius: sci_upper(&rep.f_value.radius(), 3),
            tail_bound: sci_upper(&rep.tail.total(), 3),
            tail_bound_h: sci_upper(&rep.tail.h_part, 3),
            tail_bound_k: sci_upper(&rep.tail.k_part, 3),
            certified_upper: ceil_decimal(&rep.certified_upper(), rep.precision),
            admissible: rep.admissible,
            lambda_bound: rep.lambda_bound.as_ref().map(format_decimal_exact),
            h_alternates: rep.h_alternates,
        }
    }

    pub const CSV_HEADER: [&'static str; 11] = [
        "c_over_pi",
        "c_over_pi_decimal",
        "f_value",
        "f_radius",
        "tail_bound",
        "tail_bound_h",
        "tail_bound_k",
        "certified_upper",
        "admissible",
        "lambda_bound",
        "h_alternates",
    ];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.c_over_pi.clone(),
            self.c_over_pi_decimal.clone(),
            self.f_value.clone(),
            self.f_radius.clone(),
            self.tail_bound.clone(),
            self.tail_bound_h.clone(),
            self.tail_bound_k.clone(),
            self.certified_upper.clone(),
            self.admissible.to_string(),
            self.lambda_bound.clone().unwrap_or_default(),
            self.h_alternates.to_string(),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct RatioDocument {
    pub command: &'static str,
    pub config: ConfigRecord,
    pub report: RatioRecord,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ScanRow {
    pub c_over_pi: String,
    pub c_over_pi_decimal: String,
    pub f_value: String,
    pub tail_bound: String,
    pub admissible: bool,
}

impl ScanRow {
    pub fn new(rep: &RatioReport) -> Self {
        Self {
            c_over_pi: format_decimal_exact(&rep.c_multiple),
            c_over_pi_decimal: round_decimal(&rep.c_multiple, 20),
            f_value: rep.f_decimal(),
            tail_bound: sci_upper(&rep.tail.total(), 3),
            admissible: rep.admissible,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ScanDocument {
    pub command: &'static str,
    pub config: ConfigRecord,
    pub rows: Vec<ScanRow>,
    /// Largest certified admissible point in the scan interval, from the
    /// grid-and-bisection search.
    pub max_admissible: Option<RatioRecord>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerifyRow {
    pub name: String,
    pub required: bool,
    pub config: ConfigRecord,
    pub c_over_pi: String,
    pub displayed: String,
    pub f_value: String,
    pub difference: String,
    pub tail_bound_h: String,
    pub tail_bound_k: String,
    pub admissible: bool,
    pub status: &'static str,
}

#[derive(Debug, Serialize)]
pub struct VerifyDocument {
    pub command: &'static str,
    pub tolerance: String,
    pub passed: bool,
    pub rows: Vec<VerifyRow>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TraceRow {
    pub step: usize,
    pub candidate: String,
    pub r: u32,
    pub p0_degree: u32,
    pub p2_degree: u32,
    pub p2_coeff: String,
    pub c_star: Option<String>,
    pub best_so_far: Option<String>,
}

impl TraceRow {
    pub fn new(step: usize, t: &TraceEntry) -> Self {
        Self {
            step,
            candidate: t.candidate.summary(),
            r: t.candidate.r,
            p0_degree: t.candidate.p0_degree,
            p2_degree: t.candidate.p2_degree,
            p2_coeff: format_decimal_exact(&t.candidate.p2_coeff),
            c_star: t.c_star.as_ref().map(format_decimal_exact),
            best_so_far: t.best_so_far.as_ref().map(format_decimal_exact),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizeDocument {
    pub command: &'static str,
    pub spec: String,
    pub evaluations: u32,
    pub best_candidate: String,
    pub best_config: ConfigRecord,
    pub best_report: RatioRecord,
    pub trace: Vec<TraceRow>,
}

impl OptimizeDocument {
    pub fn new(spec_text: String, res: &SearchResult) -> Self {
        Self {
            command: "optimize",
            spec: spec_text,
            evaluations: res.evaluations,
            best_candidate: res.best_candidate.summary(),
            best_config: ConfigRecord::new(&res.best_config),
            best_report: RatioRecord::new(&res.best_report),
            trace: res
                .trace
                .iter()
                .enumerate()
                .map(|(i, t)| TraceRow::new(i, t))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EulerDocument {
    pub command: &'static str,
    pub r: u32,
    pub prime_cutoff: u64,
    pub primes_used: usize,
    pub value: String,
    pub truncated_value: String,
    pub tail_estimate: String,
}

impl EulerDocument {
    pub fn new(res: &EulerProductResult) -> Self {
        Self {
            command: "euler",
            r: res.r,
            prime_cutoff: res.prime_cutoff,
            primes_used: res.primes_used,
            value: format!("{:.15e}", res.value),
            truncated_value: format!("{:.15e}", res.truncated_value),
            tail_estimate: format!("{:.3e}", res.tail_estimate),
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> CliResult<Vec<u8>> {
    let mut bytes =
        serde_json::to_vec_pretty(doc).map_err(|e| CliError::Internal(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for row in rows {
        w.write_record(row).map_err(internal)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))
}
