//! Command-line front end shared by the `wignerlab` binary and the tests.
//!
//! Exit codes: 0 success, 1 an enabled check failed, 2 configuration or
//! usage error, 3 capacity or resource error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ensemble::EntryDistribution;
use crate::error::LabError;
use crate::harness::{
    evaluate_checks, run_monte_carlo_with, CheckKind, ExperimentConfig, SummaryRow,
};
use crate::merge::{check_merge, merge_words};
use crate::moments::{MomentTable, OracleMethod};
use crate::spectral::{AnalyticKind, TestFunction};
use crate::words::{class_counts, classify, Word, WordClass, DEFAULT_CLASS_CAP};
use crate::words::{dyck_to_wigner, enumerate_dyck, wigner_to_dyck};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// Overrides `[output] directory` of a config file.
pub const OUTPUT_DIR_ENV: &str = "WIGNERLAB_OUTPUT_DIR";

/// First line of every record file.
pub const RECORD_FORMAT: &str = "wigner-lab/records";

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CAPACITY,
            message: message.into(),
        }
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        let code = match e {
            LabError::Capacity(_) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "wignerlab",
    version,
    about = "Wigner-matrix moment oracles and Monte Carlo checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run(RunArgs),
    /// Word enumeration, classification, merging and Dyck paths.
    #[command(subcommand)]
    Words(WordsCommand),
    /// Exact E[Tr W^k] by enumeration.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    config: PathBuf,
    /// Worker threads; 0 uses all cores. Does not change any output.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug, Subcommand)]
enum WordsCommand {
    /// Class counts of closed words per length, as CSV.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        min_length: usize,
        #[arg(long, default_value_t = 9)]
        max_length: usize,
    },
    /// Print the class of a word such as `1,2,1,2,1`.
    Classify {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Splice `inner` into `frame` along their first shared edge.
    Merge {
        #[arg(allow_hyphen_values = true)]
        inner: String,
        #[arg(allow_hyphen_values = true)]
        frame: String,
    },
    /// All Dyck paths of semilength k.
    Dyck {
        #[arg(long)]
        k: usize,
        /// Also print the canonical Wigner word of each path.
        #[arg(long)]
        words: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Classes,
    Both,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// `gaussian`, `rademacher`, `uniform`, or `offdiag/diag`.
    #[arg(long, default_value = "gaussian")]
    dist: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
    method: MethodArg,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a.config, a.workers, out),
        Command::Words(w) => cmd_words(w, out),
        Command::Oracle(o) => cmd_oracle(&o, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// One entry of `[[functions]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Polynomial { coefficients: Vec<f64> },
    Exp { order: usize },
    Cos { order: usize },
    Resolvent { pole: f64, order: usize },
}

impl FunctionSpec {
    fn to_function(&self) -> CliResult<TestFunction> {
        let analytic = |kind, order: usize| {
            if order == 0 {
                Err(CliError::usage(
                    "invalid configuration: functions: order must be at least 1",
                ))
            } else {
                Ok(TestFunction::Analytic { kind, order })
            }
        };
        match *self {
            FunctionSpec::Polynomial { ref coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(CliError::usage(
                        "invalid configuration: functions: polynomial needs finite coefficients",
                    ));
                }
                Ok(TestFunction::Polynomial(coefficients.clone()))
            }
            FunctionSpec::Exp { order } => analytic(AnalyticKind::Exp, order),
            FunctionSpec::Cos { order } => analytic(AnalyticKind::Cos, order),
            FunctionSpec::Resolvent { pole, order } => {
                if !(pole.abs() > 1.0 && pole.is_finite()) {
                    return Err(CliError::usage(format!(
                        "invalid configuration: functions: resolvent pole {pole} must satisfy |pole| > 1"
                    )));
                }
                analytic(AnalyticKind::Resolvent { pole }, order)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub directory: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

/// TOML experiment description. Every key except `seed`, `dimensions`
/// and `replicas` is optional; unknown keys are rejected.
///
/// ```toml
/// ensemble = "gaussian"
/// dimensions = [40]
/// replicas = 50
/// seed = 7
/// checks = ["semicircle"]
///
/// [[functions]]
/// kind = "exp"
/// order = 12
///
/// [output]
/// directory = "out"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default = "default_ensemble")]
    pub ensemble: String,
    /// Law of the diagonal entries when it differs from the off-diagonal one.
    pub diagonal: Option<String>,
    pub dimensions: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub truncation_orders: Vec<usize>,
    #[serde(default)]
    pub powers: Vec<u32>,
    #[serde(default)]
    pub edge_times: Vec<f64>,
    #[serde(default = "default_edge_count")]
    pub edge_count: usize,
    #[serde(default)]
    pub checks: Vec<String>,
    pub compare_ensemble: Option<String>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_ensemble() -> String {
    "gaussian".into()
}

fn default_edge_count() -> usize {
    1
}

fn distribution(key: &str, name: &str) -> CliResult<EntryDistribution> {
    EntryDistribution::from_name(name)
        .map_err(|e| CliError::usage(format!("invalid configuration: {key}: {e}")))
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::usage(format!("invalid configuration: {e}")))
    }

    /// Builds and validates the experiment.
    pub fn to_experiment(&self, workers: usize) -> CliResult<ExperimentConfig> {
        let mut ensemble = distribution("ensemble", &self.ensemble)?;
        if let Some(d) = &self.diagonal {
            let diag = distribution("diagonal", d)?;
            if diag.diagonal.is_some() {
                return Err(CliError::usage(
                    "invalid configuration: diagonal: expected a single law",
                ));
            }
            ensemble.diagonal = Some(diag.offdiag);
        }
        let mut config =
            ExperimentConfig::new(ensemble, self.dimensions.clone(), self.replicas, self.seed);
        config.functions = self
            .functions
            .iter()
            .map(FunctionSpec::to_function)
            .collect::<CliResult<_>>()?;
        config.truncation_orders = self.truncation_orders.clone();
        config.powers = self.powers.clone();
        config.edge_times = self.edge_times.clone();
        config.edge_count = self.edge_count;
        config.checks = self
            .checks
            .iter()
            .map(|c| c.parse::<CheckKind>())
            .collect::<Result<_, _>>()?;
        config.compare_ensemble = self
            .compare_ensemble
            .as_deref()
            .map(|c| distribution("compare_ensemble", c))
            .transpose()?;
        config.workers = workers;
        config.validate()?;
        Ok(config)
    }

    /// Record and summary paths, with [`OUTPUT_DIR_ENV`] taking precedence
    /// over `[output] directory`.
    pub fn output_paths(&self) -> (PathBuf, PathBuf) {
        let dir = std::env::var_os(OUTPUT_DIR_ENV)
            .map(PathBuf::from)
            .or_else(|| self.output.directory.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        let records = self
            .output
            .records
            .clone()
            .unwrap_or_else(|| "records.jsonl".into());
        let summary = self
            .output
            .summary
            .clone()
            .unwrap_or_else(|| "summary.csv".into());
        (dir.join(records), dir.join(summary))
    }
}

#[derive(Serialize)]
struct RecordHeader<'a> {
    format: &'a str,
    version: &'a str,
    config_sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::resource(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_error(path, e))
}

/// Writes the summary CSV with columns `check,n,statistic,value,tolerance,stderr,pass`.
pub fn write_summary(rows: &[SummaryRow], w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "check,n,statistic,value,tolerance,stderr,pass")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.check,
            r.n,
            r.statistic,
            r.value,
            r.tolerance,
            r.stderr,
            if r.pass { "pass" } else { "fail" }
        )?;
    }
    Ok(())
}

/// Runs the config at `path`, writing records and the summary CSV.
pub fn cmd_run(path: &Path, workers: usize, out: &mut dyn Write) -> CliResult<i32> {
    let bytes = fs::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::usage(format!("{}: not UTF-8", path.display())))?;
    let file = ConfigFile::parse(text)?;
    let config = file.to_experiment(workers)?;
    let (records_path, summary_path) = file.output_paths();

    let mut records_out = create(&records_path)?;
    let header = RecordHeader {
        format: RECORD_FORMAT,
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: sha256_hex(&bytes),
    };
    let line = serde_json::to_string(&header).expect("header serializes");
    writeln!(records_out, "{line}").map_err(|e| io_error(&records_path, e))?;

    let records = run_monte_carlo_with(&config, |batch| {
        for r in batch {
            let line = serde_json::to_string(r).expect("records serialize");
            writeln!(records_out, "{line}")
                .map_err(|e| LabError::Capacity(format!("{}: {e}", records_path.display())))?;
        }
        records_out
            .flush()
            .map_err(|e| LabError::Capacity(format!("{}: {e}", records_path.display())))
    })?;

    let rows = evaluate_checks(&config, &records)?;
    let mut summary_out = create(&summary_path)?;
    write_summary(&rows, &mut summary_out)
        .and_then(|_| summary_out.flush())
        .map_err(|e| io_error(&summary_path, e))?;
    write_summary(&rows, out).map_err(|e| CliError::resource(e.to_string()))?;

    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn parse_word(s: &str) -> CliResult<Word> {
    s.parse::<Word>().map_err(CliError::from)
}

fn emit(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> CliResult<()> {
    out.write_fmt(text)
        .map_err(|e| CliError::resource(e.to_string()))
}

fn cmd_words(cmd: WordsCommand, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        WordsCommand::Enumerate {
            min_length,
            max_length,
        } => {
            if min_length == 0 || min_length > max_length {
                return Err(CliError::usage(format!(
                    "empty length range {min_length}..={max_length}"
                )));
            }
            if max_length > DEFAULT_CLASS_CAP {
                return Err(LabError::Capacity(format!(
                    "length {max_length} exceeds the enumeration cap {DEFAULT_CLASS_CAP}"
                ))
                .into());
            }
            let names: Vec<&str> = WordClass::ALL.iter().map(|c| c.name()).collect();
            emit(out, format_args!("length,{},total\n", names.join(",")))?;
            for l in min_length..=max_length {
                let counts = class_counts(l)?;
                let cols: Vec<String> = WordClass::ALL
                    .iter()
                    .map(|c| counts.get(c).copied().unwrap_or(0).to_string())
                    .collect();
                let total: usize = counts.values().sum();
                emit(out, format_args!("{l},{},{total}\n", cols.join(",")))?;
            }
        }
        WordsCommand::Classify { word } => {
            let w = parse_word(&word)?;
            emit(out, format_args!("{}\n", classify(&w)))?;
        }
        WordsCommand::Merge { inner, frame } => {
            let (w1, w2) = (parse_word(&inner)?, parse_word(&frame)?);
            let merged = merge_words(&w1, &w2)?;
            let report = check_merge(&w1, &w2, &merged);
            emit(out, format_args!("{merged}\n"))?;
            let ok = |b: bool| if b { "ok" } else { "FAILED" };
            emit(out, format_args!("closed: {}\n", ok(report.closed)))?;
            emit(out, format_args!("length: {}\n", ok(report.length_ok)))?;
            emit(out, format_args!("multiset: {}\n", ok(report.multiset_ok)))?;
            emit(out, format_args!("support: {}\n", ok(report.support_ok)))?;
            emit(out, format_args!("frame: {}\n", ok(report.frame_ok)))?;
            if !report.all_ok() {
                return Ok(EXIT_CHECK_FAILED);
            }
        }
        WordsCommand::Dyck { k, words } => {
            for path in enumerate_dyck(k)? {
                if words {
                    let w = dyck_to_wigner(&path);
                    debug_assert_eq!(wigner_to_dyck(&w).as_ref(), Ok(&path));
                    emit(out, format_args!("{path}\t{w}\n"))?;
                } else {
                    emit(out, format_args!("{path}\n"))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CliResult<i32> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let dist = EntryDistribution::from_name(&args.dist)?;
    let table = MomentTable::for_distribution(&dist);
    let methods: &[OracleMethod] = match args.method {
        MethodArg::Direct => &[OracleMethod::Direct],
        MethodArg::Classes => &[OracleMethod::Classes],
        MethodArg::Both => &[OracleMethod::Direct, OracleMethod::Classes],
    };
    let values = methods
        .iter()
        .map(|m| m.evaluate(args.n, args.k, &table))
        .collect::<Result<Vec<f64>, _>>()?;
    emit(out, format_args!("n,k,value,method\n"))?;
    for (m, v) in methods.iter().zip(&values) {
        emit(
            out,
            format_args!("{},{},{v},{}\n", args.n, args.k, m.name()),
        )?;
    }
    if let [a, b] = values[..] {
        emit(
            out,
            format_args!("{},{},{},abs_diff\n", args.n, args.k, (a - b).abs()),
        )?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["wignerlab"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let e =
            ConfigFile::parse("dimensions=[4]\nreplicas=3\nseed=1\ncolour=\"red\"\n").unwrap_err();
        assert_eq!(e.code, EXIT_USAGE);
        assert!(e.message.contains("colour"), "{}", e.message);
    }

    #[test]
    fn missing_seed_is_rejected() {
        let e = ConfigFile::parse("dimensions=[4]\nreplicas=3\n").unwrap_err();
        assert!(e.message.contains("seed"), "{}", e.message);
    }

    #[test]
    fn function_specs() {
        let f = ConfigFile::parse(
            "dimensions=[4]\nreplicas=3\nseed=1\n\
             [[functions]]\nkind=\"polynomial\"\ncoefficients=[0,0,0,1]\n\
             [[functions]]\nkind=\"resolvent\"\npole=1.5\norder=20\n",
        )
        .unwrap();
        let c = f.to_experiment(0).unwrap();
        assert_eq!(c.functions[0], TestFunction::monomial(3));
        assert!(c.functions[1].has_generator());
    }

    #[test]
    fn oracle_and_words() {
        let (code, out, _) = run(&["oracle", "--n", "4", "--k", "2", "--method", "both"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n,k,value,method\n4,2,1,direct\n4,2,1,classes\n4,2,0,abs_diff\n"
        );
        let (code, _, err) = run(&["oracle", "--n", "2", "--k", "20"]);
        assert_eq!(code, EXIT_CAPACITY, "{err}");
        let (code, out, _) = run(&["words", "classify", "1,2,1,2,1"]);
        assert_eq!((code, out.as_str()), (0, "critical_weak_wigner\n"));
        let (code, _, _) = run(&["words", "classify", "1,x,1"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run(&["bogus"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
