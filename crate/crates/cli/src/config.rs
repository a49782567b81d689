//! Flat `key = value` text files for [`GapConfig`] and [`FamilySpec`].
//!
//! Blank lines and lines starting with `#` are ignored. Numbers are integers,
//! `p/q` fractions or finite decimals, all read exactly. Polynomials are
//! `degree:coefficient` lists, e.g. `p2 = 165:-31.4`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use zerogap_core::moments::GapConfig;
use zerogap_core::optimize::FamilySpec;
use zerogap_core::poly::Polynomial;
use zerogap_core::rational::{format_decimal_exact, parse_rational, ratio, Rational};

use crate::error::{CliError, CliResult};

/// Parsed `key = value` pairs with their line numbers.
#[derive(Debug)]
pub struct KeyValues {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(path: &Path, text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(
                    path,
                    i + 1,
                    format!("expected `key = value`, got `{line}`"),
                ));
            };
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), (i + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(config_error(path, i + 1, format!("duplicate key `{key}`")));
            }
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadInput {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(path, &text)
    }

    fn error(&self, key: &str, message: impl Into<String>) -> CliError {
        let line = self.entries.get(key).map_or(0, |(l, _)| *l);
        config_error(&self.path, line, message.into())
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn required(&self, key: &str) -> CliResult<&str> {
        self.raw(key)
            .ok_or_else(|| config_error(&self.path, 0, format!("missing key `{key}`")))
    }

    fn check_keys(&self, allowed: &[&str]) -> CliResult<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(self.error(k, format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }

    fn rational(&self, key: &str) -> CliResult<Option<Rational>> {
        self.raw(key)
            .filter(|v| !v.is_empty())
            .map(|v| parse_rational(v).map_err(|e| self.error(key, e.to_string())))
            .transpose()
    }

    fn integer<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| self.error(key, format!("`{v}` is not a valid integer")))
            })
            .transpose()
    }

    fn integer_list(&self, key: &str) -> CliResult<Vec<u32>> {
        self.required(key)?
            .split([',', ' ', '\t'])
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| self.error(key, format!("`{s}` is not a nonnegative integer")))
            })
            .collect()
    }

    fn polynomial(&self, key: &str) -> CliResult<Polynomial> {
        Polynomial::parse(self.required(key)?).map_err(|e| self.error(key, e.to_string()))
    }
}

fn config_error(path: &Path, line: usize, message: String) -> CliError {
    CliError::Config {
        path: path.to_path_buf(),
        line,
        message,
    }
}

const CONFIG_KEYS: [&str; 6] = ["r", "eta", "J", "precision", "p0", "p2"];

/// Reads a [`GapConfig`]; `eta`, `J` and `precision` are optional.
pub fn gap_config_from(kv: &KeyValues) -> CliResult<GapConfig> {
    kv.check_keys(&CONFIG_KEYS)?;
    let r: u32 = kv
        .integer("r")?
        .ok_or_else(|| kv.error("r", "missing key `r`"))?;
    let eta = kv.rational("eta")?.unwrap_or_else(|| ratio(1, 2));
    let cfg = GapConfig::new(r, eta, kv.polynomial("p0")?, kv.polynomial("p2")?)
        .map_err(|e| kv.error("r", e.to_string()))?;
    let cfg = cfg.with_truncation(kv.integer("J")?.unwrap_or(GapConfig::DEFAULT_TRUNCATION));
    let precision = kv
        .integer("precision")?
        .unwrap_or(GapConfig::DEFAULT_PRECISION);
    cfg.with_precision(precision)
        .map_err(|e| kv.error("precision", e.to_string()))
}

pub fn read_gap_config(path: &Path) -> CliResult<GapConfig> {
    gap_config_from(&KeyValues::read(path)?)
}

pub fn parse_gap_config(text: &str) -> CliResult<GapConfig> {
    gap_config_from(&KeyValues::parse(Path::new("<text>"), text)?)
}

/// Canonical text form; parses back to an identical config.
pub fn format_gap_config(cfg: &GapConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "r = {}", cfg.r());
    let _ = writeln!(out, "eta = {}", format_decimal_exact(cfg.eta()));
    let _ = writeln!(out, "J = {}", cfg.truncation());
    let _ = writeln!(out, "precision = {}", cfg.precision());
    let _ = writeln!(out, "p0 = {}", cfg.p0());
    let _ = writeln!(out, "p2 = {}", cfg.p2());
    out
}

const SPEC_KEYS: [&str; 15] = [
    "r_values",
    "p0_degrees",
    "p2_degrees",
    "p2_coeff_lo",
    "p2_coeff_hi",
    "p2_initial",
    "coeff_resolution",
    "golden_steps",
    "budget",
    "eta",
    "J",
    "precision",
    "c_lo",
    "c_hi",
    "tol",
];

/// Reads a [`FamilySpec`]; everything except the lists and the coefficient
/// range has a default.
pub fn family_spec_from(kv: &KeyValues) -> CliResult<FamilySpec> {
    kv.check_keys(&SPEC_KEYS)?;
    let lo = kv
        .rational("p2_coeff_lo")?
        .ok_or_else(|| kv.error("p2_coeff_lo", "missing key `p2_coeff_lo`"))?;
    let hi = kv
        .rational("p2_coeff_hi")?
        .ok_or_else(|| kv.error("p2_coeff_hi", "missing key `p2_coeff_hi`"))?;
    let mut spec = FamilySpec::new(
        kv.integer_list("r_values")?,
        kv.integer_list("p0_degrees")?,
        kv.integer_list("p2_degrees")?,
        (lo, hi),
    );
    spec.p2_initial = kv.rational("p2_initial")?;
    if let Some(v) = kv.rational("coeff_resolution")? {
        spec.coeff_resolution = v;
    }
    if let Some(v) = kv.integer("golden_steps")? {
        spec.golden_steps = v;
    }
    if let Some(v) = kv.integer("budget")? {
        spec.budget = v;
    }
    if let Some(v) = kv.rational("eta")? {
        spec.eta = v;
    }
    if let Some(v) = kv.integer("J")? {
        spec.truncation = v;
    }
    if let Some(v) = kv.integer("precision")? {
        spec.precision = v;
    }
    if let Some(v) = kv.rational("c_lo")? {
        spec.c_lo = v;
    }
    if let Some(v) = kv.rational("c_hi")? {
        spec.c_hi = v;
    }
    if let Some(v) = kv.rational("tol")? {
        spec.tol = v;
    }
    spec.validate()
        .map_err(|e| config_error(&kv.path, 0, e.to_string()))?;
    Ok(spec)
}

pub fn read_family_spec(path: &Path) -> CliResult<FamilySpec> {
    family_spec_from(&KeyValues::read(path)?)
}

pub fn parse_family_spec(text: &str) -> CliResult<FamilySpec> {
    family_spec_from(&KeyValues::parse(Path::new("<text>"), text)?)
}

pub fn format_family_spec(spec: &FamilySpec) -> String {
    let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    let _ = writeln!(out, "r_values = {}", list(&spec.r_values));
    let _ = writeln!(out, "p0_degrees = {}", list(&spec.p0_degrees));
    let _ = writeln!(out, "p2_degrees = {}", list(&spec.p2_degrees));
    let _ = writeln!(
        out,
        "p2_coeff_lo = {}",
        format_decimal_exact(&spec.p2_coeff_range.0)
    );
    let _ = writeln!(
        out,
        "p2_coeff_hi = {}",
        format_decimal_exact(&spec.p2_coeff_range.1)
    );
    if let Some(t) = &spec.p2_initial {
        let _ = writeln!(out, "p2_initial = {}", format_decimal_exact(t));
    }
    let _ = writeln!(
        out,
        "coeff_resolution = {}",
        format_decimal_exact(&spec.coeff_resolution)
    );
    let _ = writeln!(out, "golden_steps = {}", spec.golden_steps);
    let _ = writeln!(out, "budget = {}", spec.budget);
    let _ = writeln!(out, "eta = {}", format_decimal_exact(&spec.eta));
    let _ = writeln!(out, "J = {}", spec.truncation);
    let _ = writeln!(out, "precision = {}", spec.precision);
    let _ = writeln!(out, "c_lo = {}", format_decimal_exact(&spec.c_lo));
    let _ = writeln!(out, "c_hi = {}", format_decimal_exact(&spec.c_hi));
    let _ = writeln!(out, "tol = {}", format_decimal_exact(&spec.tol));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str =
        "# two monomials\nr = 2\neta = 1/2\nJ = 30\nprecision = 50\np0 = 30:1\np2 = 165:-31.4\n";

    #[test]
    fn parses_sample() {
        let cfg = parse_gap_config(SAMPLE).unwrap();
        assert_eq!(cfg.r(), 2);
        assert_eq!(cfg.p2().coeffs()[165], ratio(-157, 5));
        assert_eq!(cfg.truncation(), 30);
    }

    #[test]
    fn round_trip() {
        let cfg = parse_gap_config(SAMPLE).unwrap();
        let text = format_gap_config(&cfg);
        assert_eq!(parse_gap_config(&text).unwrap(), cfg);
        assert_eq!(format_gap_config(&parse_gap_config(&text).unwrap()), text);
    }

    #[test]
    fn defaults_apply() {
        let cfg = parse_gap_config("r = 2\np0 = 30:1\np2 = 0\n").unwrap();
        assert_eq!(cfg.eta(), &ratio(1, 2));
        assert_eq!(cfg.truncation(), GapConfig::DEFAULT_TRUNCATION);
        assert!(cfg.p2().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "r = 2\np0 = 30:1\n",
            "r = 2\np0 = 30:1\np2 = 0\nfoo = 1\n",
            "r = 2\nr = 3\np0 = 1:1\np2 = 0\n",
            "r = two\np0 = 1:1\np2 = 0\n",
            "r = 2\np0 = 1:0.3.3\np2 = 0\n",
            "r = 2\neta = 3/4\np0 = 1:1\np2 = 0\n",
            "r = 2\np0 = 1:1/3\np2 = 0\nprecision = 0\n",
            "just text\n",
        ] {
            let err = parse_gap_config(bad).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{bad:?}: {err}");
        }
    }

    #[test]
    fn non_terminating_decimals_are_rejected() {
        assert!(parse_gap_config("r = 2\np0 = 1:0.333...\np2 = 0\n").is_err());
    }

    #[test]
    fn spec_round_trip() {
        let text = "r_values = 2\np0_degrees = 30, 40\np2_degrees = 165\np2_coeff_lo = -40\np2_coeff_hi = 0\nbudget = 5\n";
        let spec = parse_family_spec(text).unwrap();
        assert_eq!(spec.p0_degrees, vec![30, 40]);
        assert_eq!(spec.budget, 5);
        let again = parse_family_spec(&format_family_spec(&spec)).unwrap();
        assert_eq!(again, spec);
        assert!(parse_family_spec(
            "r_values = 2\np0_degrees = 30\np2_degrees = 1\np2_coeff_lo = 1\np2_coeff_hi = 0\n"
        )
        .is_err());
    }
}
