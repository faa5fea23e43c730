//! Command-line front end: model listing, generating-function expansion,
//! χ_y/Euler computation, Hodge-relation reports, and the
//! pipeline-vs-catalog verification sweep.
//!
//! Exit codes: `0` success, `1` verification failure, `2` usage error.
//! `--output` (or the `STRINGY_CHI_OUTPUT` environment variable) selects
//! text or JSON output for the polynomial-valued commands.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::catalog::{builtin_models, find_model, load_models, WeierstrassModel};
use crate::graded::GradedPoly;
use crate::pipeline::{
    chi_y, hodge_relations, qy, specialize_at, verify_model, HodgeReport, QySource,
};
use crate::{Error, Result};

/// Environment variable holding the default output format.
pub const OUTPUT_ENV_VAR: &str = "STRINGY_CHI_OUTPUT";

/// Highest expansion degree the CLI accepts.
const MAX_DEGREE: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "stringy-chi",
    version,
    about = "Stringy characteristic classes of singular Weierstrass fibrations"
)]
struct Cli {
    /// Replace the builtin model catalog with a TOML model file.
    #[arg(long, global = true, value_name = "PATH")]
    models_file: Option<PathBuf>,
    /// Output format; defaults to $STRINGY_CHI_OUTPUT, then text.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    Pipeline,
    Catalog,
}

impl From<Source> for QySource {
    fn from(s: Source) -> QySource {
        match s {
            Source::Pipeline => QySource::Pipeline,
            Source::Catalog => QySource::Catalog,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the cataloged models.
    List,
    /// Expand a model's generating function Q_Y through a total degree.
    Qy {
        /// Gauge label (SU2, ..., E8, SMOOTH).
        #[arg(long)]
        model: String,
        /// Expand through this total degree (0..=8).
        #[arg(long)]
        degree: usize,
        /// Derive through the resolution pipeline or expand the stored
        /// closed form.
        #[arg(long, value_enum, default_value_t = Source::Pipeline)]
        source: Source,
    },
    /// The χ_y-genus coefficient for a base of the given dimension.
    Chi {
        /// Gauge label (SU2, ..., E8, SMOOTH).
        #[arg(long)]
        model: String,
        /// Base dimension (1..=8).
        #[arg(long)]
        dim: usize,
        /// Impose the Calabi-Yau condition (substitutes L -> c1).
        #[arg(long)]
        calabi_yau: bool,
        /// Evaluate at a rational y (e.g. -1 for the stringy Euler
        /// characteristic); `symbolic` or omitted keeps y symbolic.
        #[arg(long, value_name = "RATIONAL|symbolic", allow_hyphen_values = true)]
        at_y: Option<String>,
    },
    /// Hodge-number relations for the Calabi-Yau fourfold case.
    Hodge {
        /// Gauge label (SU2, ..., E8).
        #[arg(long)]
        model: String,
        /// h^{1,1} of the base; resolves h^{1,1}_str numerically.
        #[arg(long)]
        h11_base: Option<i64>,
        /// h^{1,2} of the fourfold; resolves the h^{1,3}/h^{2,2}
        /// relations as far as the χ coefficients allow.
        #[arg(long)]
        h12: Option<i64>,
    },
    /// Check the pipeline derivation against the closed-form catalog.
    Verify {
        /// Compare through this total degree.
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Restrict to one model (default: every model with a closed form).
        #[arg(long)]
        model: Option<String>,
    },
}

/// Structured output for the polynomial-valued commands.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub command: String,
    pub model: String,
    pub dim: usize,
    pub flags: BTreeMap<String, String>,
    pub terms: Vec<TermRecord>,
    pub version: String,
}

/// One monomial with its coefficient in ℚ(y), numerator and denominator
/// rendered as y-polynomial strings.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub monomial: BTreeMap<String, u32>,
    pub coeff: CoeffRecord,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub num: String,
    pub den: String,
}

/// Convert a graded polynomial into term records in canonical order.
pub fn term_records(poly: &GradedPoly) -> Vec<TermRecord> {
    poly.iter_terms()
        .map(|(_, mono, c)| TermRecord {
            monomial: mono.iter().map(|(v, e)| (v.name(), *e)).collect(),
            coeff: CoeffRecord {
                num: c.numerator().to_string(),
                den: c.denominator().to_string(),
            },
        })
        .collect()
}

/// Build the JSON document for a polynomial result.
pub fn output_document(
    command: &str,
    model: &str,
    dim: usize,
    flags: &[(&str, String)],
    poly: &GradedPoly,
) -> OutputDocument {
    OutputDocument {
        command: command.to_string(),
        model: model.to_string(),
        dim,
        flags: flags.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        terms: term_records(poly),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::UnknownModel(_) | Error::UnknownGenerator(_) | Error::CatalogFormat(_) => 2,
        _ => 1,
    }
}

/// Parse arguments from the process environment and run; returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let format = cli.output.unwrap_or_else(|| {
        match std::env::var(OUTPUT_ENV_VAR).ok().as_deref() {
            Some("json") => OutputFormat::Json,
            _ => OutputFormat::Text,
        }
    });
    match dispatch(&cli, format) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn load_catalog(cli: &Cli) -> Result<Vec<WeierstrassModel>> {
    match &cli.models_file {
        None => Ok(builtin_models()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::CatalogFormat(format!("{}: {e}", path.display()))
            })?;
            load_models(&text)
        }
    }
}

/// A command-line usage problem: reported on stderr with exit code 2.
#[derive(Debug)]
struct UsageError(String);

fn check_degree(name: &str, value: usize, min: usize) -> std::result::Result<(), UsageError> {
    if value < min || value > MAX_DEGREE {
        return Err(UsageError(format!(
            "{name} must be between {min} and {MAX_DEGREE}, got {value}"
        )));
    }
    Ok(())
}

fn parse_at_y(text: &str) -> std::result::Result<Option<BigRational>, UsageError> {
    if text == "symbolic" {
        return Ok(None);
    }
    BigRational::from_str(text)
        .map(Some)
        .map_err(|_| UsageError(format!("--at-y expects a rational, got `{text}`")))
}

fn report_usage(e: UsageError) -> i32 {
    eprintln!("error: {}", e.0);
    2
}

fn dispatch(cli: &Cli, format: OutputFormat) -> Result<i32> {
    let models = load_catalog(cli)?;
    match &cli.command {
        Command::List => {
            cmd_list(&models);
            Ok(0)
        }
        Command::Qy { model, degree, source } => {
            if let Err(e) = check_degree("--degree", *degree, 0) {
                return Ok(report_usage(e));
            }
            let m = find_model(&models, model)?;
            let poly = qy(m, *degree, (*source).into())?;
            let source_name = match source {
                Source::Pipeline => "pipeline",
                Source::Catalog => "catalog",
            };
            emit_poly(
                format,
                "qy",
                model,
                *degree,
                &[("degree", degree.to_string()), ("source", source_name.to_string())],
                &poly,
            );
            Ok(0)
        }
        Command::Chi { model, dim, calabi_yau, at_y } => {
            if let Err(e) = check_degree("--dim", *dim, 1) {
                return Ok(report_usage(e));
            }
            let y0 = match at_y.as_deref() {
                None => None,
                Some(text) => match parse_at_y(text) {
                    Ok(v) => v,
                    Err(e) => return Ok(report_usage(e)),
                },
            };
            let m = find_model(&models, model)?;
            let chi = chi_y(m, *dim, *calabi_yau, QySource::Pipeline)?;
            let poly = match &y0 {
                None => chi.chi_poly,
                Some(v) => specialize_at(&chi.chi_poly, v)?,
            };
            let mut flags: Vec<(&str, String)> =
                vec![("calabi_yau", calabi_yau.to_string())];
            if let Some(v) = &y0 {
                flags.push(("at_y", v.to_string()));
            }
            emit_poly(format, "chi", model, *dim, &flags, &poly);
            Ok(0)
        }
        Command::Hodge { model, h11_base, h12 } => {
            let m = find_model(&models, model)?;
            let report = hodge_relations(m, QySource::Pipeline)?;
            print_hodge(&report, *h11_base, *h12);
            Ok(0)
        }
        Command::Verify { max_degree, model } => {
            if let Err(e) = check_degree("--max-degree", *max_degree, 0) {
                return Ok(report_usage(e));
            }
            cmd_verify(&models, *max_degree, model.as_deref())
        }
    }
}

fn cmd_list(models: &[WeierstrassModel]) {
    println!("{:<8} {:>8}  {}", "MODEL", "BLOWUPS", "S-RELATION");
    for m in models {
        let relation = match m.s_relation {
            Some(k) => format!("S={k}L"),
            None => "-".to_string(),
        };
        println!("{:<8} {:>8}  {}", m.gauge_label, m.n_blowups(), relation);
    }
}

fn emit_poly(
    format: OutputFormat,
    command: &str,
    model: &str,
    dim: usize,
    flags: &[(&str, String)],
    poly: &GradedPoly,
) {
    match format {
        OutputFormat::Text => println!("{poly}"),
        OutputFormat::Json => {
            let doc = output_document(command, model, dim, flags, poly);
            println!("{}", serde_json::to_string(&doc).expect("document serializes"));
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Render `value` as a signed continuation of a formula string.
fn signed(value: &BigRational) -> String {
    if value < &BigRational::default() {
        format!("- {}", -value.clone())
    } else {
        format!("+ {value}")
    }
}

fn print_hodge(report: &HodgeReport, h11_base: Option<i64>, h12: Option<i64>) {
    println!(
        "model {} ({} blowup{})",
        report.model,
        report.n_blowups,
        if report.n_blowups == 1 { "" } else { "s" }
    );
    for (k, chi_k) in report.chi.iter().enumerate() {
        println!("chi{k} = {chi_k}");
    }
    println!("chi_str = {}", report.chi_str);
    println!("palindromic: {}", yes_no(report.palindromic));
    println!("chi0 = chi4 = 2: {}", yes_no(report.chi0_is_two && report.chi4_is_two));
    println!("chi1 = chi3: {}", yes_no(report.chi1_eq_chi3));
    if let Some((a, b)) = &report.chi2_affine_in_chi1 {
        println!("chi2 = {a}*chi1 {}", signed(b));
    }
    let scaled_chi1 = |a: &BigRational| {
        if a < &BigRational::default() {
            format!("- {}*({})", -a.clone(), report.chi[1])
        } else {
            format!("+ {a}*({})", report.chi[1])
        }
    };
    let shift = 1 + report.n_blowups as i64;
    match h11_base {
        Some(h11) => println!("h11_str = {h11}+{shift} = {}", h11 + shift),
        None => println!("h11_str = h11(B) + {shift}"),
    }
    let h11_str = h11_base.map(|h11| h11 + shift);
    match (h12, h11_str) {
        (Some(h12), Some(h11)) => {
            println!("h13 = {} - ({})", h12 - h11, report.chi[1]);
        }
        _ => println!("h13 = h12 - h11_str - ({})", report.chi[1]),
    }
    let h22_tail = match &report.chi2_affine_in_chi1 {
        Some((a, b)) => format!("{} {}", scaled_chi1(a), signed(b)),
        None => format!("+ ({})", report.chi[2]),
    };
    match h12 {
        Some(h12) => println!("h22 = {} {h22_tail}", 2 * h12),
        None => println!("h22 = 2*h12 {h22_tail}"),
    }
}

fn cmd_verify(
    models: &[WeierstrassModel],
    max_degree: usize,
    only: Option<&str>,
) -> Result<i32> {
    let selected: Vec<&WeierstrassModel> = match only {
        Some(label) => vec![find_model(models, label)?],
        None => models.iter().filter(|m| m.closed_form.is_some()).collect(),
    };
    let mut passed = 0usize;
    let mut failed = 0usize;
    for m in selected {
        let report = verify_model(m, max_degree)?;
        if report.equal {
            passed += 1;
            println!("PASS {} (degree {})", report.model, report.cap);
        } else {
            failed += 1;
            let (monomial, pipeline, catalog) = report.first_mismatch.unwrap();
            println!(
                "FAIL {} (degree {}): first mismatch at {monomial}: pipeline={pipeline}, catalog={catalog}",
                report.model, report.cap
            );
        }
    }
    println!("{passed}/{} pass", passed + failed);
    Ok(if failed == 0 { 0 } else { 1 })
}
