//! Trace files and report serialization.
//!
//! A trace file is plain text:
//!
//! ```text
//! # optional comments
//! width=16 radix=hex
//! 0000
//! 0303
//! 0F03
//! ```
//!
//! `#` starts a comment anywhere on a line. Blank lines are skipped and
//! surrounding whitespace is ignored.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::activity::{ActivityReport, Rounding};
use crate::bits::{check_width, Radix, Trace, Word};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceFileHeader {
    pub width: usize,
    pub radix: Radix,
}

impl FromStr for TraceFileHeader {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::InvalidHeader(line.to_string());
        let mut width = None;
        let mut radix = None;
        for field in line.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "width" if width.is_none() => {
                    let w: usize = value.parse().map_err(|_| bad())?;
                    check_width(w)?;
                    width = Some(w);
                }
                "radix" if radix.is_none() => {
                    radix = Some(match value {
                        "bin" => Radix::Binary,
                        "hex" => Radix::Hex,
                        _ => return Err(bad()),
                    })
                }
                _ => return Err(bad()),
            }
        }
        Ok(TraceFileHeader {
            width: width.ok_or_else(bad)?,
            radix: radix.ok_or_else(bad)?,
        })
    }
}

impl fmt::Display for TraceFileHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "width={} radix={}", self.width, self.radix.name())
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(body, _)| body).trim()
}

/// Reads a whole trace. Errors carry the 1-based line number.
pub fn read_trace<R: BufRead>(input: R) -> Result<Trace> {
    let mut header: Option<TraceFileHeader> = None;
    let mut trace: Option<Trace> = None;
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = strip_comment(&line);
        if body.is_empty() {
            continue;
        }
        match (&header, &mut trace) {
            (None, _) => {
                let h: TraceFileHeader = body.parse().map_err(|e: Error| e.at_line(lineno))?;
                trace = Some(Trace::empty(h.width)?);
                header = Some(h);
            }
            (Some(h), Some(t)) => {
                let w = Word::parse(body, h.radix, h.width).map_err(|e| e.at_line(lineno))?;
                t.push(w)?;
            }
            (Some(_), None) => unreachable!("trace created with header"),
        }
    }
    match trace {
        None => Err(Error::MissingHeader),
        Some(t) if t.is_empty() => Err(Error::EmptyTrace),
        Some(t) => Ok(t),
    }
}

pub fn parse_trace(text: &str) -> Result<Trace> {
    read_trace(text.as_bytes())
}

pub fn write_trace<W: Write>(mut out: W, trace: &Trace, radix: Radix) -> Result<()> {
    let header = TraceFileHeader {
        width: trace.width(),
        radix,
    };
    writeln!(out, "{header}")?;
    for w in trace.words() {
        writeln!(out, "{}", w.render(radix))?;
    }
    Ok(())
}

pub fn render_trace(trace: &Trace, radix: Radix) -> String {
    let mut buf = Vec::new();
    write_trace(&mut buf, trace, radix).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("trace text is ASCII")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            _ => Err(Error::UnknownName {
                what: "format",
                value: s.to_string(),
            }),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    width: usize,
    transfers: u64,
    total_transitions: u64,
    tau: f64,
    tau_display: String,
    per_bit_toggles: &'a [u64],
    #[serde(skip_serializing_if = "Option::is_none")]
    per_cycle: Option<&'a [u64]>,
}

pub fn write_report(report: &ActivityReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            let view = JsonReport {
                width: report.width,
                transfers: report.transfers,
                total_transitions: report.total_transitions,
                tau: report.tau,
                tau_display: report.tau_display(),
                per_bit_toggles: &report.per_bit_toggles,
                per_cycle: report.per_cycle.as_deref(),
            };
            let mut out = serde_json::to_vec_pretty(&view)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["line", "toggles", "activity"])?;
            for (i, &n) in report.per_bit_toggles.iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    n.to_string(),
                    report.line_activity(i).to_string(),
                ])?;
            }
            w.write_record([
                "total".to_string(),
                report.total_transitions.to_string(),
                report.tau.to_string(),
            ])?;
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        ReportFormat::Table => Ok(render_report_table(report).into_bytes()),
    }
}

fn render_report_table(r: &ActivityReport) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "width              {}", r.width);
    let _ = writeln!(s, "transfers          {}", r.transfers);
    let _ = writeln!(s, "transitions        {}", r.total_transitions);
    let _ = writeln!(
        s,
        "switching activity {}  ({})",
        r.tau_display(),
        r.tau_rounded(3, Rounding::HalfUp)
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "line  toggles  activity");
    for (i, &n) in r.per_bit_toggles.iter().enumerate().rev() {
        let _ = writeln!(s, "{i:>4}  {n:>7}  {:>8.2}", r.line_activity(i));
    }
    s
}

/// Parses a JSON report as written by [`write_report`]. The derived
/// `tau_display` field is ignored.
pub fn read_report_json(text: &str) -> Result<ActivityReport> {
    Ok(serde_json::from_str(text)?)
}
