//! Regression of the two displayed reference values. The table is plain
//! text: `name | r | eta | J | p0 | p2 | c/pi | displayed f | required`.
//! Rows marked `required = no` are reported but do not affect the verdict.

use std::collections::BTreeMap;

use num_traits::Signed;
use zerogap_core::moments::GapConfig;
use zerogap_core::poly::Polynomial;
use zerogap_core::ratio::GapSeries;
use zerogap_core::rational::{format_decimal_exact, parse_rational, Rational};
use zerogap_core::real::sci_upper;

use crate::error::{CliError, CliResult};
use crate::parallel::build_series;
use crate::report::{round_decimal, ConfigRecord, VerifyDocument, VerifyRow};

pub const BUILTIN_TABLE: &str = include_str!("verify_table.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyCase {
    pub name: String,
    pub config: GapConfig,
    pub c_multiple: Rational,
    pub displayed: Rational,
    pub required: bool,
}

/// Parses a verification table; any malformed row is an internal error since
/// the table ships with the binary.
pub fn parse_table(text: &str) -> CliResult<Vec<VerifyCase>> {
    let bad = |line: usize, msg: String| {
        CliError::Internal(format!("verification table line {line}: {msg}"))
    };
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        let [name, r, eta, j, p0, p2, c, shown, required] = cols[..] else {
            return Err(bad(
                i + 1,
                format!("expected 9 columns, got {}", cols.len()),
            ));
        };
        let num = |s: &str| parse_rational(s).map_err(|e| bad(i + 1, e.to_string()));
        let poly = |s: &str| Polynomial::parse(s).map_err(|e| bad(i + 1, e.to_string()));
        let r: u32 = r.parse().map_err(|_| bad(i + 1, format!("bad r `{r}`")))?;
        let j: u32 = j.parse().map_err(|_| bad(i + 1, format!("bad J `{j}`")))?;
        let config = GapConfig::new(r, num(eta)?, poly(p0)?, poly(p2)?)
            .map_err(|e| bad(i + 1, e.to_string()))?
            .with_truncation(j);
        let required = match required {
            "yes" => true,
            "no" => false,
            other => {
                return Err(bad(
                    i + 1,
                    format!("required must be yes or no, got `{other}`"),
                ))
            }
        };
        cases.push(VerifyCase {
            name: name.to_string(),
            config,
            c_multiple: num(c)?,
            displayed: num(shown)?,
            required,
        });
    }
    if cases.is_empty() {
        return Err(CliError::Internal("verification table has no rows".into()));
    }
    Ok(cases)
}

/// Evaluates every case; each distinct configuration is built once.
pub fn run_cases(
    cases: &[VerifyCase],
    tolerance: &Rational,
    precision: Option<u32>,
) -> CliResult<VerifyDocument> {
    let mut built: BTreeMap<String, GapSeries> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut passed = true;
    for case in cases {
        let cfg = match precision {
            Some(p) => case.config.clone().with_precision(p)?,
            None => case.config.clone(),
        };
        let key = crate::config::format_gap_config(&cfg);
        if !built.contains_key(&key) {
            built.insert(key.clone(), build_series(&cfg)?);
        }
        let rep = built[&key].f_series(&case.c_multiple)?;
        let diff = rep.f_value.midpoint() - &case.displayed;
        let ok = diff.abs() <= *tolerance;
        if case.required && !ok {
            passed = false;
        }
        rows.push(VerifyRow {
            name: case.name.clone(),
            required: case.required,
            config: ConfigRecord::new(&cfg),
            c_over_pi: format_decimal_exact(&case.c_multiple),
            displayed: format_decimal_exact(&case.displayed),
            f_value: rep.f_decimal(),
            difference: round_decimal(&diff, 12),
            tail_bound_h: sci_upper(&rep.tail.h_part, 3),
            tail_bound_k: sci_upper(&rep.tail.k_part, 3),
            admissible: rep.admissible,
            status: if ok { "PASS" } else { "FAIL" },
        });
    }
    Ok(VerifyDocument {
        command: "verify",
        tolerance: format_decimal_exact(tolerance),
        passed,
        rows,
    })
}

impl VerifyRow {
    pub const CSV_HEADER: [&'static str; 16] = [
        "name",
        "required",
        "c_over_pi",
        "displayed",
        "f_value",
        "difference",
        "tail_bound_h",
        "tail_bound_k",
        "admissible",
        "status",
        "r",
        "eta",
        "J",
        "precision",
        "p0",
        "p2",
    ];

    pub fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![
            self.name.clone(),
            self.required.to_string(),
            self.c_over_pi.clone(),
            self.displayed.clone(),
            self.f_value.clone(),
            self.difference.clone(),
            self.tail_bound_h.clone(),
            self.tail_bound_k.clone(),
            self.admissible.to_string(),
            self.status.to_string(),
        ];
        out.extend(self.config.csv_fields());
        out
    }
}
