//! Bit transition counting and switching-activity analysis.
//!
//! The crate models a bit transition counter placed on a bus, the stimulus
//! generators it is typically attached to (LFSRs, rule 90/150 cellular
//! automata, binary and gray address counters), low-transition bus encodings,
//! and the power models that consume the measured switching activity.

pub mod activity;
pub mod bits;
pub mod btc;
pub mod cli;
pub mod encoders;
pub mod error;
pub mod generators;
pub mod power;
pub mod tables;
pub mod trace_io;

pub use activity::{analyze_trace, compare_reports, switching_activity, ActivityReport, Reduction};
pub use bits::{Radix, Trace, Word};
pub use btc::{Btc, CycleRecord};
pub use error::{Error, Result};
pub use generators::{generate, Boundary, GeneratorConfig, GeneratorKind, Taps};
