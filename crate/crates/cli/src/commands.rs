use std::path::{Path, PathBuf};

use zerogap_core::euler::a_const;
use zerogap_core::moments::GapConfig;
use zerogap_core::optimize::optimize_with;
use zerogap_core::ratio::scan_grid;
use zerogap_core::rational::{parse_rational, Rational};
use zerogap_core::Error as CoreError;

use crate::cli::{Cli, Command, Format};
use crate::config::{format_family_spec, read_family_spec, read_gap_config};
use crate::error::{CliError, CliResult};
use crate::output::emit;
use crate::parallel::{build_series, eval_points, max_admissible, Parallel};
use crate::report::VerifyRow;
use crate::report::{
    to_csv, to_json, ConfigRecord, EulerDocument, OptimizeDocument, RatioDocument, RatioRecord,
    ScanDocument, ScanRow, TraceRow,
};
use crate::verify::{parse_table, run_cases, BUILTIN_TABLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Ratio,
    Scan,
    Optimize,
    Euler,
}

/// What a run reads and writes, resolved before any computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub command: CommandKind,
    pub config_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunManifest {
    pub fn from_cli(cli: &Cli) -> Self {
        let (command, config_path) = match &cli.command {
            Command::Verify { .. } => (CommandKind::Verify, None),
            Command::Ratio { config, .. } => (CommandKind::Ratio, Some(config.clone())),
            Command::Scan { config, .. } => (CommandKind::Scan, Some(config.clone())),
            Command::Optimize { config } => (CommandKind::Optimize, Some(config.clone())),
            Command::Euler { .. } => (CommandKind::Euler, None),
        };
        Self {
            command,
            config_path,
            output_path: cli.out.clone(),
            format: cli.format,
        }
    }
}

fn number(flag: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn load_config(path: &Path, precision: Option<u32>) -> CliResult<GapConfig> {
    let cfg = read_gap_config(path)?;
    Ok(match precision {
        Some(p) => cfg.with_precision(p)?,
        None => cfg,
    })
}

/// Runs one command and writes its report. A failed verification still
/// writes the report before returning [`CliError::Verification`].
pub fn run(cli: &Cli) -> CliResult<()> {
    let manifest = RunManifest::from_cli(cli);
    let out = manifest.output_path.as_deref();
    let bytes = match &cli.command {
        Command::Verify { tol, table } => {
            let tolerance = number("tol", tol)?;
            let text = match table {
                Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::ReadInput {
                    path: p.clone(),
                    source,
                })?,
                None => BUILTIN_TABLE.to_string(),
            };
            let cases = parse_table(&text)?;
            let doc = run_cases(&cases, &tolerance, cli.precision)?;
            let bytes = match manifest.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => {
                    let rows: Vec<_> = doc.rows.iter().map(VerifyRow::csv_fields).collect();
                    to_csv(&VerifyRow::CSV_HEADER, &rows)?
                }
            };
            emit(out, &bytes)?;
            if !doc.passed {
                let failed: Vec<_> = doc
                    .rows
                    .iter()
                    .filter(|r| r.required && r.status == "FAIL")
                    .map(|r| r.name.as_str())
                    .collect();
                return Err(CliError::Verification(failed.join(", ")));
            }
            return Ok(());
        }
        Command::Ratio { config, c } => {
            let cfg = load_config(config, cli.precision)?;
            let c = number("c", c)?;
            if c <= Rational::from_integer(0.into()) {
                return Err(CliError::Usage("--c must be positive".into()));
            }
            let rep = build_series(&cfg)?.f_series(&c)?;
            let doc = RatioDocument {
                command: "ratio",
                config: ConfigRecord::new(&cfg),
                report: RatioRecord::new(&rep),
            };
            match manifest.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => {
                    let header: Vec<&str> = RatioRecord::CSV_HEADER
                        .iter()
                        .chain(ConfigRecord::CSV_HEADER.iter())
                        .copied()
                        .collect();
                    let mut row = doc.report.csv_fields();
                    row.extend(doc.config.csv_fields());
                    to_csv(&header, &[row])?
                }
            }
        }
        Command::Scan {
            config,
            c_lo,
            c_hi,
            steps,
            tol,
        } => {
            let cfg = load_config(config, cli.precision)?;
            let (lo, hi, tol) = (
                number("c-lo", c_lo)?,
                number("c-hi", c_hi)?,
                number("tol", tol)?,
            );
            if *steps < 2 || lo >= hi || lo <= Rational::from_integer(0.into()) {
                return Err(CliError::Usage(
                    "scan needs 0 < c-lo < c-hi and at least 2 steps".into(),
                ));
            }
            let series = build_series(&cfg)?;
            let reports = eval_points(&series, &scan_grid(&lo, &hi, *steps))?;
            let rows: Vec<ScanRow> = reports.iter().map(ScanRow::new).collect();
            match manifest.format {
                Format::Json => {
                    let best = match max_admissible(&series, &lo, &hi, &tol) {
                        Ok(rep) => Some(RatioRecord::new(&rep)),
                        Err(CoreError::NoAdmissiblePoint) => None,
                        Err(e) => return Err(e.into()),
                    };
                    to_json(&ScanDocument {
                        command: "scan",
                        config: ConfigRecord::new(&cfg),
                        rows,
                        max_admissible: best,
                    })?
                }
                Format::Csv => {
                    let header: Vec<&str> = [
                        "c_over_pi",
                        "c_over_pi_decimal",
                        "f_value",
                        "tail_bound",
                        "admissible",
                    ]
                    .iter()
                    .chain(ConfigRecord::CSV_HEADER.iter())
                    .copied()
                    .collect();
                    let cfg_fields = ConfigRecord::new(&cfg).csv_fields();
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            let mut v = vec![
                                r.c_over_pi.clone(),
                                r.c_over_pi_decimal.clone(),
                                r.f_value.clone(),
                                r.tail_bound.clone(),
                                r.admissible.to_string(),
                            ];
                            v.extend(cfg_fields.iter().cloned());
                            v
                        })
                        .collect();
                    to_csv(&header, &table)?
                }
            }
        }
        Command::Optimize { config } => {
            let mut spec = read_family_spec(config)?;
            if let Some(p) = cli.precision {
                spec.precision = p;
            }
            let result = optimize_with(&spec, &mut Parallel)?;
            let doc = OptimizeDocument::new(format_family_spec(&spec), &result);
            match manifest.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => {
                    let header = [
                        "step",
                        "candidate",
                        "r",
                        "p0_degree",
                        "p2_degree",
                        "p2_coeff",
                        "c_star",
                        "best_so_far",
                    ];
                    let rows: Vec<Vec<String>> = doc.trace.iter().map(trace_fields).collect();
                    to_csv(&header, &rows)?
                }
            }
        }
        Command::Euler { r, cutoff } => {
            let doc = EulerDocument::new(&a_const(*r, *cutoff)?);
            match manifest.format {
                Format::Json => to_json(&doc)?,
                Format::Csv => to_csv(
                    &[
                        "r",
                        "prime_cutoff",
                        "primes_used",
                        "value",
                        "truncated_value",
                        "tail_estimate",
                    ],
                    &[vec![
                        doc.r.to_string(),
                        doc.prime_cutoff.to_string(),
                        doc.primes_used.to_string(),
                        doc.value.clone(),
                        doc.truncated_value.clone(),
                        doc.tail_estimate.clone(),
                    ]],
                )?,
            }
        }
    };
    emit(out, &bytes)
}

fn trace_fields(t: &TraceRow) -> Vec<String> {
    vec![
        t.step.to_string(),
        t.candidate.clone(),
        t.r.to_string(),
        t.p0_degree.to_string(),
        t.p2_degree.to_string(),
        t.p2_coeff.clone(),
        t.c_star.clone().unwrap_or_default(),
        t.best_so_far.clone().unwrap_or_default(),
    ]
}
