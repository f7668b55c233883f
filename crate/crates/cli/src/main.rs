//! `fbct` — connectivity tables over GF(2^n) from the command line.
//!
//! Subcommands: `tables` (full DDT/BCT/FBCT dumps), `spectrum` (FBCT
//! spectra), `verify` (closed-form check for x^(2^(n-2)-1)) and
//! `kloosterman` (K_n(1), direct and closed form). Output is JSON or CSV on
//! stdout or `--out`. Exit codes: 0 success/pass, 1 verification mismatch,
//! 2 usage error, 3 capacity refusal.

use std::path::PathBuf;
use std::process::exit;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fbct_core::analysis::{
    bct_table, ddt_table, fbct_spectrum_bruteforce, fbct_spectrum_power, fbct_table, spectrum_csv,
    FunctionMeta,
};
use fbct_core::closedform::{kloosterman_carlitz, kloosterman_direct, target_exponent, verify_closed_form};
use fbct_core::field::{format_hex, parse_hex};
use fbct_core::{BoxedFunction, Error, FieldSpec};

/// Full 2^n x 2^n dumps are quadratic in size; past this the output stops
/// being useful and the BCT scan stops being quick.
const TABLE_DUMP_CAP: u32 = 8;
/// Carlitz-only Kloosterman evaluation works beyond the field cap.
const KLOOSTERMAN_CAP: u32 = 64;

#[derive(Parser)]
#[command(
    name = "fbct",
    version,
    about = "DDT/BCT/FBCT tables and spectra over GF(2^n), with closed-form FBCT verification for x^(2^(n-2)-1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a full DDT, BCT or FBCT matrix (n <= 8)
    Tables(TablesCmd),
    /// Compute the FBCT spectrum of a function
    Spectrum(SpectrumCmd),
    /// Check the closed-form FBCT of x^(2^(n-2)-1) against direct computation
    Verify(VerifyCmd),
    /// Evaluate the Kloosterman sum K_n(1), directly and in closed form
    Kloosterman(KloostermanCmd),
}

#[derive(Args)]
struct CommonOpts {
    /// Field degree n of GF(2^n)
    #[arg(long)]
    n: u32,
    /// Modulus polynomial as a hex integer, bit i = coefficient of x^i
    /// (default: smallest irreducible polynomial of degree n)
    #[arg(long)]
    modulus: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Worker threads (default: SBOX_DEFAULT_THREADS, then available
    /// parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Write the output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TablesCmd {
    #[command(flatten)]
    common: CommonOpts,
    /// Function: `paper` for x^(2^(n-2)-1), a decimal exponent d for x^d,
    /// or @<path> to a lookup-table file (one hex element per line)
    #[arg(long)]
    function: FunctionArg,
    /// Which table to dump
    #[arg(long, value_enum)]
    table: TableKind,
}

#[derive(Args)]
struct SpectrumCmd {
    #[command(flatten)]
    common: CommonOpts,
    /// Function: `paper` for x^(2^(n-2)-1), a decimal exponent d for x^d,
    /// or @<path> to a lookup-table file (one hex element per line)
    #[arg(long)]
    function: FunctionArg,
}

#[derive(Args)]
struct VerifyCmd {
    #[command(flatten)]
    common: CommonOpts,
    /// Only `paper` (x^(2^(n-2)-1)) can be verified
    #[arg(long, default_value = "paper")]
    function: FunctionArg,
}

#[derive(Args)]
struct KloostermanCmd {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Ddt,
    Bct,
    Fbct,
}

impl TableKind {
    fn name(self) -> &'static str {
        match self {
            TableKind::Ddt => "ddt",
            TableKind::Bct => "bct",
            TableKind::Fbct => "fbct",
        }
    }
}

#[derive(Clone)]
enum FunctionArg {
    Paper,
    Exponent(u64),
    TablePath(PathBuf),
}

impl FromStr for FunctionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "paper" {
            return Ok(FunctionArg::Paper);
        }
        if let Some(path) = s.strip_prefix('@') {
            if path.is_empty() {
                return Err("@ must be followed by a file path".into());
            }
            return Ok(FunctionArg::TablePath(PathBuf::from(path)));
        }
        s.parse::<u64>()
            .map(FunctionArg::Exponent)
            .map_err(|_| format!("expected `paper`, a decimal exponent, or @<path>, got {s:?}"))
    }
}

enum CliError {
    Usage(String),
    Capacity(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Capacity(_) => 3,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Capacity(m) | CliError::Io(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => CliError::Capacity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Tables(cmd) => run_tables(cmd),
        Command::Spectrum(cmd) => run_spectrum(cmd),
        Command::Verify(cmd) => run_verify(cmd),
        Command::Kloosterman(cmd) => run_kloosterman(cmd),
    }
}

fn build_spec(common: &CommonOpts) -> Result<FieldSpec, CliError> {
    match &common.modulus {
        Some(text) => Ok(FieldSpec::new(common.n, parse_hex(text)?)?),
        None => Ok(FieldSpec::with_default_modulus(common.n)?),
    }
}

fn resolve_threads(common: &CommonOpts) -> Result<usize, CliError> {
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        return Ok(t);
    }
    if let Ok(value) = std::env::var("SBOX_DEFAULT_THREADS") {
        return match value.parse::<usize>() {
            Ok(t) if t >= 1 => Ok(t),
            _ => Err(CliError::Usage(format!(
                "SBOX_DEFAULT_THREADS must be a positive integer, got {value:?}"
            ))),
        };
    }
    Ok(std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1))
}

fn resolve_function(arg: &FunctionArg, spec: FieldSpec) -> Result<BoxedFunction, CliError> {
    match arg {
        FunctionArg::Paper => {
            if spec.degree() < 3 {
                return Err(CliError::Usage(
                    "--function paper requires n >= 3".into(),
                ));
            }
            Ok(BoxedFunction::power(spec, target_exponent(spec.degree()))?)
        }
        FunctionArg::Exponent(d) => Ok(BoxedFunction::power(spec, *d)?),
        FunctionArg::TablePath(path) => load_table(path, spec),
    }
}

/// Lookup-table file: one hex element per line, line index = the input
/// element's encoding, exactly 2^n lines (blank lines ignored).
fn load_table(path: &PathBuf, spec: FieldSpec) -> Result<BoxedFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bits = parse_hex(line)
            .map_err(|e| CliError::Usage(format!("{} line {}: {e}", path.display(), idx + 1)))?;
        entries.push(spec.element(bits).map_err(|e| {
            CliError::Usage(format!("{} line {}: {e}", path.display(), idx + 1))
        })?);
    }
    Ok(BoxedFunction::from_table(spec, entries)?)
}

fn write_output(common: &CommonOpts, mut text: String) -> Result<(), CliError> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct TableDocument {
    n: u32,
    modulus: String,
    function: FunctionMeta,
    table: &'static str,
    rows: Vec<Vec<u64>>,
}

fn run_tables(cmd: TablesCmd) -> Result<i32, CliError> {
    if cmd.common.n > TABLE_DUMP_CAP {
        return Err(CliError::Capacity(format!(
            "full table dumps are capped at n <= {TABLE_DUMP_CAP}, got n = {}",
            cmd.common.n
        )));
    }
    let spec = build_spec(&cmd.common)?;
    let function = resolve_function(&cmd.function, spec)?;
    let rows = match cmd.table {
        TableKind::Ddt => ddt_table(&function)?,
        TableKind::Bct => bct_table(&function)?,
        TableKind::Fbct => fbct_table(&function)?,
    };
    let text = match cmd.common.output {
        OutputFormat::Json => {
            let doc = TableDocument {
                n: spec.degree(),
                modulus: format_hex(spec.modulus()),
                function: function.meta(),
                table: cmd.table.name(),
                rows,
            };
            serde_json::to_string(&doc).expect("table documents always serialize")
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            for row in rows {
                let line: Vec<String> = row.iter().map(u64::to_string).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
    };
    write_output(&cmd.common, text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SpectrumOutput {
    n: u32,
    modulus: String,
    function: FunctionMeta,
    path: &'static str,
    spectrum: Vec<(u64, u64)>,
}

fn run_spectrum(cmd: SpectrumCmd) -> Result<i32, CliError> {
    let spec = build_spec(&cmd.common)?;
    let threads = resolve_threads(&cmd.common)?;
    let function = resolve_function(&cmd.function, spec)?;
    let (spectrum, path) = match function.exponent() {
        Some(d) => (fbct_spectrum_power(spec, d, threads)?, "ratio-reduced"),
        None => (fbct_spectrum_bruteforce(&function, threads)?, "brute-force"),
    };
    let text = match cmd.common.output {
        OutputFormat::Json => {
            let doc = SpectrumOutput {
                n: spec.degree(),
                modulus: format_hex(spec.modulus()),
                function: function.meta(),
                path,
                spectrum: spectrum.entries(),
            };
            serde_json::to_string(&doc).expect("spectrum documents always serialize")
        }
        OutputFormat::Csv => {
            eprintln!("path: {path}");
            spectrum_csv(&spectrum)
        }
    };
    write_output(&cmd.common, text)?;
    Ok(0)
}

fn run_verify(cmd: VerifyCmd) -> Result<i32, CliError> {
    if !matches!(cmd.function, FunctionArg::Paper) {
        return Err(CliError::Usage(
            "verify supports only --function paper".into(),
        ));
    }
    if cmd.common.output == OutputFormat::Csv {
        return Err(CliError::Usage(
            "verify emits a JSON report; --output csv is not supported".into(),
        ));
    }
    if cmd.common.n < 3 {
        return Err(CliError::Usage(
            "--function paper requires n >= 3".into(),
        ));
    }
    let spec = build_spec(&cmd.common)?;
    let threads = resolve_threads(&cmd.common)?;
    let report = verify_closed_form(spec, threads);
    let text = serde_json::to_string(&report).expect("reports always serialize");
    write_output(&cmd.common, text)?;
    Ok(if report.pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct KloostermanOutput {
    n: u32,
    direct: Option<i64>,
    carlitz: i64,
    agree: Option<bool>,
    multiple_of_4: bool,
    in_weil_range: bool,
}

fn run_kloosterman(cmd: KloostermanCmd) -> Result<i32, CliError> {
    let n = cmd.common.n;
    if n > KLOOSTERMAN_CAP {
        return Err(CliError::Usage(format!(
            "kloosterman supports n <= {KLOOSTERMAN_CAP}, got {n}"
        )));
    }
    let carlitz = kloosterman_carlitz(n)?;
    let direct = if n <= fbct_core::field::MAX_DEGREE {
        Some(kloosterman_direct(build_spec(&cmd.common)?))
    } else {
        if cmd.common.modulus.is_some() {
            return Err(CliError::Usage(format!(
                "--modulus requires n <= {}; larger degrees are closed-form only",
                fbct_core::field::MAX_DEGREE
            )));
        }
        None
    };
    let agree = direct.map(|d| d == carlitz);
    // Weil bound, checked exactly: K in [1 - 2^(n/2+1), 1 + 2^(n/2+1)]
    // iff (K-1)^2 <= 2^(n+2).
    let diff = i128::from(carlitz) - 1;
    let out = KloostermanOutput {
        n,
        direct,
        carlitz,
        agree,
        multiple_of_4: carlitz.rem_euclid(4) == 0,
        in_weil_range: diff * diff <= 1i128 << (n + 2),
    };
    let text = match cmd.common.output {
        OutputFormat::Json => {
            serde_json::to_string(&out).expect("kloosterman output always serializes")
        }
        OutputFormat::Csv => {
            let fmt_opt = |v: Option<String>| v.unwrap_or_default();
            format!(
                "n,direct,carlitz,agree,multiple_of_4,in_weil_range\n{},{},{},{},{},{}\n",
                out.n,
                fmt_opt(out.direct.map(|v| v.to_string())),
                out.carlitz,
                fmt_opt(out.agree.map(|v| v.to_string())),
                out.multiple_of_4,
                out.in_weil_range
            )
        }
    };
    write_output(&cmd.common, text)?;
    Ok(if agree == Some(false) { 1 } else { 0 })
}
