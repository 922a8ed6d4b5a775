//! `btcprof` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 data/parse error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, IsTerminal, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::activity::{analyze_with_cycles, ActivityReport};
use crate::bits::{Radix, Word};
use crate::btc;
use crate::encoders::{encode_trace, Encoding};
use crate::error::Error;
use crate::generators::{
    generate, Boundary, GeneratorConfig, GeneratorKind, Taps, DEFAULT_TAPS_16, REFERENCE_SEED,
};
use crate::power::{
    dynamic_power, static_power, to_microwatts, DynamicPowerParams, StaticPowerParams,
    VoltageExponent,
};
use crate::tables::{self, Style};
use crate::trace_io::{read_report_json, read_trace, write_report, write_trace, ReportFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "btcprof",
    version,
    about = "Bit transition counter and switching-activity profiler"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a stimulus trace.
    Gen(GenArgs),
    /// Count transitions in a trace and report switching activity.
    Analyze(AnalyzeArgs),
    /// Estimate dynamic (and optionally static) power.
    Power(PowerArgs),
    /// Reproduce the counter and pattern-generator activity tables.
    Tables,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// lfsr_internal, lfsr_external, ca90, ca150, binary or gray.
    #[arg(long)]
    pub kind: String,
    /// Register width in bits. Defaults to the seed length, or 16.
    #[arg(long)]
    pub width: Option<usize>,
    /// Initial state, binary MSB first (or hex with a 0x prefix).
    #[arg(long)]
    pub seed: Option<String>,
    /// Comma-separated LFSR tap positions, e.g. 16,14,13,11.
    #[arg(long)]
    pub taps: Option<String>,
    /// CA boundary: null or cyclic.
    #[arg(long, default_value = "null")]
    pub boundary: String,
    /// Clock cycles; the trace holds cycles + 1 words.
    #[arg(long)]
    pub cycles: usize,
    /// Radix used in the trace file.
    #[arg(long, default_value = "bin")]
    pub radix: String,
    /// Output path; stdout if omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Trace file; `-` or omitted reads stdin.
    pub trace: Option<PathBuf>,
    /// Re-encode the trace before counting: gray or businvert.
    #[arg(long)]
    pub encode: Option<String>,
    /// json, csv or table.
    #[arg(long, default_value = "table")]
    pub format: String,
    /// Include per-transfer counts in JSON output.
    #[arg(long)]
    pub per_cycle: bool,
    /// Print the counter's cycle-by-cycle outputs after the report.
    #[arg(long)]
    pub btc: bool,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Switching activity in [0, 1].
    #[arg(
        long,
        conflicts_with = "from_report",
        required_unless_present = "from_report"
    )]
    pub tau: Option<f64>,
    /// Take τ from a JSON activity report.
    #[arg(long)]
    pub from_report: Option<PathBuf>,
    /// Load capacitance, farads.
    #[arg(long)]
    pub cap: f64,
    /// Supply voltage, volts.
    #[arg(long)]
    pub vdd: f64,
    /// Clock frequency, hertz.
    #[arg(long)]
    pub freq: f64,
    /// Power of V_dd in the dynamic term (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub vdd_exponent: u32,
    /// Reverse saturation current, amperes. Enables the static estimate.
    #[arg(long, requires = "vdiode")]
    pub isat: Option<f64>,
    /// Diode voltage, volts.
    #[arg(long, requires = "isat", allow_hyphen_values = true)]
    pub vdiode: Option<f64>,
    /// Temperature, kelvin.
    #[arg(long, default_value_t = 300.0)]
    pub temp: f64,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn data(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }

    fn io(e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

/// Read failures on trace input are data errors unless the OS failed us.
fn data_or_io(e: Error) -> CliError {
    match e {
        Error::Io(io) => CliError::io(io),
        other => CliError::data(other),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out, err),
        Command::Analyze(a) => cmd_analyze(&a, &mut io::stdin().lock(), out),
        Command::Power(a) => cmd_power(&a, out),
        Command::Tables => cmd_tables(out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "btcprof: {}", e.message);
            e.code
        }
    }
}

fn parse_seed(text: &str, width: usize) -> crate::error::Result<Word> {
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Word::parse(hex, Radix::Hex, width)
    } else {
        Word::parse(text, Radix::Binary, width)
    }
}

/// Builds the generator configuration described by `gen` flags.
pub fn gen_config(a: &GenArgs) -> CliResult<GeneratorConfig> {
    let kind: GeneratorKind = a.kind.parse().map_err(CliError::usage)?;
    let width = match (a.width, &a.seed) {
        (Some(w), _) => w,
        (None, Some(s)) if !s.starts_with("0x") && !s.starts_with("0X") => s.len(),
        _ => 16,
    };
    let seed = match &a.seed {
        Some(s) => parse_seed(s, width).map_err(|e| CliError::usage(format!("--seed: {e}")))?,
        None => match kind {
            GeneratorKind::Binary | GeneratorKind::Gray => {
                Word::zero(width).map_err(CliError::usage)?
            }
            _ if width == 16 => Word::parse(REFERENCE_SEED, Radix::Binary, 16).expect("valid"),
            _ => {
                return Err(CliError::usage(format!(
                    "--seed is required for {kind} at width {width}"
                )))
            }
        },
    };
    let taps = if kind.is_lfsr() {
        Some(match &a.taps {
            Some(t) => {
                Taps::parse(width, t).map_err(|e| CliError::usage(format!("--taps: {e}")))?
            }
            None if width == 16 => Taps::new(16, &DEFAULT_TAPS_16).expect("valid"),
            None => {
                return Err(CliError::usage(format!(
                    "--taps is required for {kind} at width {width}"
                )))
            }
        })
    } else {
        None
    };
    let boundary: Boundary = a.boundary.parse().map_err(CliError::usage)?;
    GeneratorConfig::new(kind, seed, taps, boundary).map_err(CliError::usage)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let config = gen_config(a)?;
    let radix: Radix = a.radix.parse().map_err(CliError::usage)?;
    let trace = generate(&config, a.cycles);
    match &a.output {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            write_trace(io::BufWriter::new(file), &trace, radix).map_err(CliError::io)?;
            writeln!(out, "{} words written to {}", trace.len(), path.display())
                .map_err(CliError::io)?;
        }
        None => {
            write_trace(&mut *out, &trace, radix).map_err(CliError::io)?;
            writeln!(err, "{} words", trace.len()).map_err(CliError::io)?;
        }
    }
    Ok(())
}

pub fn cmd_analyze(a: &AnalyzeArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> CliResult<()> {
    let format: ReportFormat = a.format.parse().map_err(CliError::usage)?;
    let encoding: Option<Encoding> = a
        .encode
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(CliError::usage)?;

    let (source, trace) = match a.trace.as_deref().filter(|p| p.as_os_str() != "-") {
        Some(path) => {
            let file =
                File::open(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            let t = read_trace(BufReader::new(file))
                .map_err(data_or_io)
                .map_err(|e| CliError {
                    message: format!("{}: {}", path.display(), e.message),
                    ..e
                })?;
            (path.display().to_string(), t)
        }
        None => {
            let t = read_trace(BufReader::new(stdin))
                .map_err(data_or_io)
                .map_err(|e| CliError {
                    message: format!("<stdin>: {}", e.message),
                    ..e
                })?;
            ("<stdin>".to_string(), t)
        }
    };
    let trace = match encoding {
        Some(enc) => encode_trace(&trace, enc).map_err(CliError::data)?,
        None => trace,
    };
    let mut report =
        analyze_with_cycles(&trace).map_err(|e| CliError::data(format!("{source}: {e}")))?;
    if !a.per_cycle {
        report.per_cycle = None;
    }
    out.write_all(&write_report(&report, format).map_err(CliError::io)?)
        .map_err(CliError::io)?;
    if a.btc {
        let records = btc::run(&trace, true).map_err(CliError::data)?;
        writeln!(out).map_err(CliError::io)?;
        out.write_all(tables::render_waveform(&records).as_bytes())
            .map_err(CliError::io)?;
    }
    Ok(())
}

fn tau_from_report(path: &PathBuf) -> CliResult<f64> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let report: ActivityReport =
        read_report_json(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok(report.tau)
}

pub fn cmd_power(a: &PowerArgs, out: &mut dyn Write) -> CliResult<()> {
    let tau = match (&a.tau, &a.from_report) {
        (Some(t), _) => *t,
        (None, Some(path)) => tau_from_report(path)?,
        (None, None) => return Err(CliError::usage("one of --tau or --from-report is required")),
    };
    let exponent = VoltageExponent::from_power(a.vdd_exponent).map_err(CliError::usage)?;
    let params =
        DynamicPowerParams::new(tau, a.cap, a.vdd, a.freq, exponent).map_err(CliError::usage)?;
    let p_dyn = dynamic_power(&params);
    let mut lines = vec![
        format!("tau            {tau}"),
        format!("dynamic power  {p_dyn:e} W ({} uW)", to_microwatts(p_dyn)),
    ];
    if let (Some(isat), Some(vdiode)) = (a.isat, a.vdiode) {
        let p_static = static_power(&StaticPowerParams {
            saturation_current: isat,
            diode_voltage: vdiode,
            temperature: a.temp,
            supply_voltage: a.vdd,
        })
        .map_err(CliError::usage)?;
        lines.push(format!(
            "static power   {p_static:e} W ({} uW)",
            to_microwatts(p_static)
        ));
        let total = p_dyn + p_static;
        lines.push(format!(
            "total power    {total:e} W ({} uW)",
            to_microwatts(total)
        ));
    }
    for l in lines {
        writeln!(out, "{l}").map_err(CliError::io)?;
    }
    Ok(())
}

/// Color only when stdout is a terminal and `NO_COLOR` is unset or empty.
pub fn color_enabled() -> bool {
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    !no_color && io::stdout().is_terminal()
}

pub fn cmd_tables(out: &mut dyn Write) -> CliResult<()> {
    let style = Style {
        color: color_enabled(),
    };
    out.write_all(tables::render_all(style).as_bytes())
        .map_err(CliError::io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("btcprof").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn gen_gray_16_lines() {
        let (code, out, err) = run_capture(&[
            "gen", "--kind", "gray", "--width", "4", "--seed", "0000", "--cycles", "15",
        ]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 17); // header + 16 words
        assert!(err.contains("16 words"));
    }

    #[test]
    fn gen_zero_lfsr_seed() {
        let (code, _, err) = run_capture(&[
            "gen",
            "--kind",
            "lfsr_external",
            "--seed",
            "0000000000000000",
            "--cycles",
            "4",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("all-zero LFSR seed"), "{err}");
    }

    #[test]
    fn gen_needs_taps_off_16() {
        let (code, _, err) = run_capture(&[
            "gen",
            "--kind",
            "lfsr_internal",
            "--seed",
            "1000",
            "--cycles",
            "4",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--taps"));
    }

    #[test]
    fn seed_width_inferred() {
        let a = GenArgs {
            kind: "lfsr_external".into(),
            width: None,
            seed: Some("1000".into()),
            taps: Some("4,3".into()),
            boundary: "null".into(),
            cycles: 3,
            radix: "bin".into(),
            output: None,
        };
        assert_eq!(gen_config(&a).unwrap().width(), 4);
    }

    #[test]
    fn analyze_from_reader() {
        let a = AnalyzeArgs {
            trace: None,
            encode: None,
            format: "json".into(),
            per_cycle: true,
            btc: false,
        };
        let mut input = "width=16 radix=hex\n0000\n0303\n0F03\n".as_bytes();
        let mut out = Vec::new();
        cmd_analyze(&a, &mut input, &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["total_transitions"], 6);
        assert_eq!(v["per_cycle"], serde_json::json!([4, 2]));
    }

    #[test]
    fn analyze_parse_error_is_data_error() {
        let a = AnalyzeArgs {
            trace: None,
            encode: None,
            format: "table".into(),
            per_cycle: false,
            btc: false,
        };
        let mut input = "width=16 radix=hex\n0000\nG3\n".as_bytes();
        let e = cmd_analyze(&a, &mut input, &mut Vec::new()).unwrap_err();
        assert_eq!(e.code, EXIT_DATA);
        assert!(e.message.contains("line 3"), "{}", e.message);
    }

    #[test]
    fn power_outputs() {
        let (code, out, _) = run_capture(&[
            "power", "--tau", "0.25", "--cap", "1e-12", "--vdd", "1", "--freq", "1e6",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("2.5e-7 W"), "{out}");
        assert!(out.contains("(0.25 uW)"), "{out}");
        let (code, out, _) = run_capture(&[
            "power", "--tau", "0", "--cap", "1e-12", "--vdd", "1", "--freq", "1e6",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("dynamic power  0e0 W"), "{out}");
        let (code, _, err) = run_capture(&[
            "power", "--tau", "1.5", "--cap", "1e-12", "--vdd", "1", "--freq", "1e6",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("tau"));
    }

    #[test]
    fn power_with_static() {
        let (code, out, err) = run_capture(&[
            "power", "--tau", "0.5", "--cap", "1e-12", "--vdd", "1.2", "--freq", "1e6", "--isat",
            "1e-12", "--vdiode", "-0.5",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("static power"));
        assert!(out.contains("total power"));
    }

    #[test]
    fn missing_subcommand_is_usage() {
        let (code, _, _) = run_capture(&[]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["power", "--cap", "1", "--vdd", "1", "--freq", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
