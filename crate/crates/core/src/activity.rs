//! Switching activity: observed transitions divided by the number of bit
//! transfers (`width * transfers`).

use serde::{Deserialize, Serialize};

use crate::bits::Trace;
use crate::error::{Error, Result};

/// `total_transitions / (width * transfers)`.
pub fn switching_activity(total_transitions: u64, width: usize, transfers: u64) -> Result<f64> {
    if width == 0 {
        return Err(Error::WidthOutOfRange(0));
    }
    if transfers == 0 {
        return Err(Error::ZeroTransfers);
    }
    let capacity = width as u128 * transfers as u128;
    if total_transitions as u128 > capacity {
        return Err(Error::TransitionsExceedCapacity {
            transitions: total_transitions,
            capacity,
        });
    }
    Ok(total_transitions as f64 / capacity as f64)
}

/// How a ratio is cut down to a fixed number of decimals for display.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    HalfUp,
    Truncate,
}

/// Renders `num / den` with `decimals` digits after the point using exact
/// integer arithmetic, so results never depend on binary float artifacts.
pub fn format_ratio(num: u64, den: u128, decimals: u32, rounding: Rounding) -> String {
    assert!(den > 0, "zero denominator");
    let scale = 10u128.pow(decimals);
    let scaled = num as u128 * scale;
    let mut q = scaled / den;
    if rounding == Rounding::HalfUp && 2 * (scaled % den) >= den {
        q += 1;
    }
    let int = q / scale;
    if decimals == 0 {
        int.to_string()
    } else {
        format!("{int}.{:0width$}", q % scale, width = decimals as usize)
    }
}

/// Result of analyzing one bus trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivityReport {
    pub width: usize,
    pub transfers: u64,
    pub total_transitions: u64,
    pub tau: f64,
    /// Toggle count per line, index 0 = LSB.
    pub per_bit_toggles: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_cycle: Option<Vec<u64>>,
}

impl ActivityReport {
    fn capacity(&self) -> u128 {
        self.width as u128 * self.transfers as u128
    }

    /// τ as text with `decimals` digits, computed from the exact counts.
    pub fn tau_rounded(&self, decimals: u32, rounding: Rounding) -> String {
        if self.transfers == 0 {
            return format_ratio(0, 1, decimals, rounding);
        }
        format_ratio(self.total_transitions, self.capacity(), decimals, rounding)
    }

    /// Two-decimal, round-half-up rendering used in reports.
    pub fn tau_display(&self) -> String {
        self.tau_rounded(2, Rounding::HalfUp)
    }

    /// Toggle rate of one line, `toggles / transfers`.
    pub fn line_activity(&self, line: usize) -> f64 {
        if self.transfers == 0 {
            0.0
        } else {
            self.per_bit_toggles[line] as f64 / self.transfers as f64
        }
    }
}

/// Counts transitions between consecutive words of `trace`.
pub fn analyze_trace(trace: &Trace) -> Result<ActivityReport> {
    let mut report = analyze_with_cycles(trace)?;
    report.per_cycle = None;
    Ok(report)
}

/// Like [`analyze_trace`], keeping the per-transfer counts.
pub fn analyze_with_cycles(trace: &Trace) -> Result<ActivityReport> {
    if trace.len() < 2 {
        return Err(Error::TraceTooShort(trace.len()));
    }
    let width = trace.width();
    let mut per_bit = vec![0u64; width];
    let mut per_cycle = Vec::with_capacity(trace.transfers());
    for (a, b) in trace.pairs() {
        let diff = a.xor(b)?;
        for (i, toggled) in diff.iter_bits().enumerate() {
            per_bit[i] += u64::from(toggled);
        }
        per_cycle.push(diff.popcount() as u64);
    }
    let total: u64 = per_cycle.iter().sum();
    let transfers = trace.transfers() as u64;
    Ok(ActivityReport {
        width,
        transfers,
        total_transitions: total,
        tau: switching_activity(total, width, transfers)?,
        per_bit_toggles: per_bit,
        per_cycle: Some(per_cycle),
    })
}

/// How much `improved` lowers switching activity relative to `baseline`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reduction {
    /// `(baseline.tau - improved.tau) / baseline.tau`.
    pub relative: f64,
    pub tau_delta: f64,
    pub transitions_delta: i128,
}

impl Reduction {
    pub fn percent(&self) -> f64 {
        self.relative * 100.0
    }
}

pub fn compare_reports(baseline: &ActivityReport, improved: &ActivityReport) -> Result<Reduction> {
    if baseline.width != improved.width {
        return Err(Error::WidthMismatch {
            expected: baseline.width,
            found: improved.width,
        });
    }
    if baseline.tau == 0.0 {
        return Err(Error::ZeroReferenceActivity);
    }
    let tau_delta = baseline.tau - improved.tau;
    Ok(Reduction {
        relative: tau_delta / baseline.tau,
        tau_delta,
        transitions_delta: baseline.total_transitions as i128 - improved.total_transitions as i128,
    })
}
