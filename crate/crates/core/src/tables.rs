//! Reproduction of the published counter and pattern-generator activity
//! tables, plus the three-word counter waveform.

use std::fmt::Write as _;

use crate::activity::{
    analyze_trace, compare_reports, format_ratio, ActivityReport, Reduction, Rounding,
};
use crate::bits::{Radix, Trace, Word};
use crate::btc::{self, CycleRecord};
use crate::generators::{generate, CounterKind, GeneratorConfig, GeneratorKind};

/// One published address-counter row.
#[derive(Clone, Copy, Debug)]
pub struct CounterReference {
    pub label: &'static str,
    pub kind: CounterKind,
    pub width: usize,
    pub transitions: u64,
    /// τ exactly as printed.
    pub tau: &'static str,
}

pub const COUNTER_REFERENCE: [CounterReference; 4] = [
    CounterReference {
        label: "Binary Counter (4-bit)",
        kind: CounterKind::Binary,
        width: 4,
        transitions: 26,
        tau: "0.43",
    },
    CounterReference {
        label: "Gray Counter (4-bit)",
        kind: CounterKind::Gray,
        width: 4,
        transitions: 15,
        tau: "0.25",
    },
    CounterReference {
        label: "Binary Counter (8-bit)",
        kind: CounterKind::Binary,
        width: 8,
        transitions: 502,
        tau: "0.246",
    },
    CounterReference {
        label: "Gray Counter (8-bit)",
        kind: CounterKind::Gray,
        width: 8,
        transitions: 255,
        tau: "0.125",
    },
];

/// Clock-cycle columns of the pattern-generator table.
pub const GENERATOR_CYCLES: [usize; 3] = [8, 16, 32];

/// Width of every pattern generator in the published experiment.
pub const GENERATOR_WIDTH: usize = 16;

/// One published pattern-generator row.
#[derive(Clone, Copy, Debug)]
pub struct GeneratorReference {
    pub label: &'static str,
    pub kind: GeneratorKind,
    pub transitions: [u64; 3],
    pub tau: [&'static str; 3],
}

pub const GENERATOR_REFERENCE: [GeneratorReference; 4] = [
    GeneratorReference {
        label: "Internal LFSR",
        kind: GeneratorKind::LfsrInternal,
        transitions: [66, 114, 236],
        tau: ["0.51", "0.44", "0.46"],
    },
    GeneratorReference {
        label: "External LFSR",
        kind: GeneratorKind::LfsrExternal,
        transitions: [88, 163, 266],
        tau: ["0.68", "0.63", "0.51"],
    },
    GeneratorReference {
        label: "CA-90",
        kind: GeneratorKind::Ca90,
        transitions: [66, 138, 276],
        tau: ["0.51", "0.53", "0.53"],
    },
    GeneratorReference {
        label: "CA150",
        kind: GeneratorKind::Ca150,
        transitions: [67, 135, 259],
        tau: ["0.52", "0.52", "0.50"],
    },
];

/// The published pattern-generator τ column is consistent with truncating
/// `count / (16 * cycles)` to two decimals, not with rounding half-up.
pub const GENERATOR_TAU_ROUNDING: Rounding = Rounding::Truncate;

/// Decimal places of a τ string as printed.
pub fn decimals_of(printed: &str) -> u32 {
    printed
        .split_once('.')
        .map_or(0, |(_, frac)| frac.len() as u32)
}

#[derive(Clone, Debug)]
pub struct CounterRow {
    pub reference: CounterReference,
    pub report: ActivityReport,
    /// Computed τ rendered with the printed number of decimals, half-up.
    pub tau_text: String,
}

impl CounterRow {
    pub fn matches(&self) -> bool {
        self.report.total_transitions == self.reference.transitions
            && self.tau_text == self.reference.tau
    }
}

/// Full-period trace of a counter started at zero (`2^width - 1` transfers).
pub fn counter_trace(kind: CounterKind, width: usize) -> Trace {
    let cfg = GeneratorConfig::counter(kind, width).expect("valid counter width");
    generate(&cfg, (1usize << width) - 1)
}

pub fn counter_rows() -> Vec<CounterRow> {
    COUNTER_REFERENCE
        .iter()
        .map(|&reference| {
            let report = analyze_trace(&counter_trace(reference.kind, reference.width))
                .expect("counter trace has at least 2 words");
            let tau_text = report.tau_rounded(decimals_of(reference.tau), Rounding::HalfUp);
            CounterRow {
                reference,
                report,
                tau_text,
            }
        })
        .collect()
}

/// Gray-vs-binary reduction for the 4-bit and 8-bit counters.
pub fn counter_reductions() -> [(usize, Reduction); 2] {
    [4, 8].map(|w| {
        let bin = analyze_trace(&counter_trace(CounterKind::Binary, w)).expect("valid trace");
        let gray = analyze_trace(&counter_trace(CounterKind::Gray, w)).expect("valid trace");
        (
            w,
            compare_reports(&bin, &gray).expect("binary counter is active"),
        )
    })
}

#[derive(Clone, Debug)]
pub struct GeneratorCell {
    pub cycles: usize,
    pub report: ActivityReport,
    pub reference_transitions: u64,
    pub reference_tau: &'static str,
}

impl GeneratorCell {
    /// Computed τ with the published rounding rule.
    pub fn tau_text(&self) -> String {
        self.report.tau_rounded(2, GENERATOR_TAU_ROUNDING)
    }

    pub fn count_matches(&self) -> bool {
        self.report.total_transitions == self.reference_transitions
    }

    /// Whether the published count and published τ agree with each other.
    pub fn reference_consistent(&self) -> bool {
        reference_tau_from_count(self.reference_transitions, self.cycles) == self.reference_tau
    }
}

/// `count / (16 * cycles)` with the published rounding rule.
pub fn reference_tau_from_count(count: u64, cycles: usize) -> String {
    format_ratio(
        count,
        (GENERATOR_WIDTH * cycles) as u128,
        2,
        GENERATOR_TAU_ROUNDING,
    )
}

#[derive(Clone, Debug)]
pub struct GeneratorRow {
    pub reference: GeneratorReference,
    pub config: GeneratorConfig,
    pub cells: Vec<GeneratorCell>,
}

/// Runs each reference generator for 8, 16 and 32 clocks from the reference
/// seed. Transfers equal the clock count and the seed is word 0.
pub fn generator_rows() -> Vec<GeneratorRow> {
    GENERATOR_REFERENCE
        .iter()
        .map(|&reference| generator_row(reference, GeneratorConfig::reference(reference.kind)))
        .collect()
}

pub fn generator_row(reference: GeneratorReference, config: GeneratorConfig) -> GeneratorRow {
    let cells = GENERATOR_CYCLES
        .iter()
        .enumerate()
        .map(|(i, &cycles)| GeneratorCell {
            cycles,
            report: analyze_trace(&generate(&config, cycles)).expect("cycles > 0"),
            reference_transitions: reference.transitions[i],
            reference_tau: reference.tau[i],
        })
        .collect();
    GeneratorRow {
        reference,
        config,
        cells,
    }
}

/// Counter outputs for the 0000 (reset), 0303, 0F03 stimulus.
pub fn waveform_records() -> Vec<CycleRecord> {
    let words = [0x0000, 0x0303, 0x0F03]
        .map(|v| Word::from_u64(16, v).expect("fits in 16 bits"))
        .to_vec();
    let trace = Trace::new(16, words).expect("uniform width");
    btc::run(&trace, true).expect("non-empty trace")
}

/// Terminal styling for match markers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn mark(&self, ok: bool) -> String {
        let (text, code) = if ok {
            ("match", "32")
        } else {
            ("differs", "33")
        };
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

pub fn render_counter_table(rows: &[CounterRow], style: Style) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Switching activity of binary and gray counters");
    let _ = writeln!(
        s,
        "{:<24} {:>11} {:>9} {:>11} {:>9}  ",
        "Module", "Transitions", "Activity", "Published", ""
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<24} {:>11} {:>9} {:>11} {:>9}  {}",
            r.reference.label,
            r.report.total_transitions,
            r.tau_text,
            r.reference.transitions,
            r.reference.tau,
            style.mark(r.matches()),
        );
    }
    for (w, red) in counter_reductions() {
        let _ = writeln!(
            s,
            "gray vs binary ({w}-bit): activity reduced by {:.1}%",
            red.percent()
        );
    }
    s
}

pub fn render_generator_table(rows: &[GeneratorRow], style: Style) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Switching activity of pattern generators (16-bit, seed 1011001010110110)"
    );
    let taps = rows
        .iter()
        .find_map(|r| r.config.taps())
        .map_or_else(|| "-".to_string(), |t| t.to_string());
    let boundary = rows
        .iter()
        .find(|r| r.config.kind().ca_rule().is_some())
        .map_or_else(|| "-".to_string(), |r| r.config.boundary().to_string());
    let _ = writeln!(
        s,
        "LFSR taps {taps}; CA boundary {boundary}; activity truncated to 2 decimals"
    );
    let _ = writeln!(
        s,
        "{:<14} {:>6} {:>11} {:>9} {:>11} {:>9} {:>10}  Count",
        "Module", "Cycles", "Transitions", "Activity", "Published", "", "Consistent"
    );
    for row in rows {
        for c in &row.cells {
            let _ = writeln!(
                s,
                "{:<14} {:>6} {:>11} {:>9} {:>11} {:>9} {:>10}  {}",
                row.reference.label,
                c.cycles,
                c.report.total_transitions,
                c.tau_text(),
                c.reference_transitions,
                c.reference_tau,
                if c.reference_consistent() {
                    "yes"
                } else {
                    "no"
                },
                style.mark(c.count_matches()),
            );
        }
    }
    s
}

pub fn render_waveform(records: &[CycleRecord]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Bit transition counter, cycle by cycle");
    let _ = writeln!(
        s,
        "{:>5} {:>5} {:>6} {:>7} {:>14} {:>16}",
        "cycle", "reset", "datain", "dataout", "one_transition", "total_transition"
    );
    for r in records {
        let _ = writeln!(
            s,
            "{:>5} {:>5} {:>6} {:>7} {:>14} {:>16}",
            r.cycle,
            u8::from(r.reset),
            r.datain.render(Radix::Hex),
            r.dataout.render(Radix::Hex),
            format!("{:02X}", r.one_transition),
            format!("{:02X}", r.total_transition),
        );
    }
    s
}

/// All three blocks, as printed by `btcprof tables`.
pub fn render_all(style: Style) -> String {
    format!(
        "{}\n{}\n{}",
        render_counter_table(&counter_rows(), style),
        render_generator_table(&generator_rows(), style),
        render_waveform(&waveform_records()),
    )
}
