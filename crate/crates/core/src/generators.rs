//! Deterministic stimulus sources: Galois and Fibonacci LFSRs, rule 90/150
//! cellular automata, and binary/gray address counters.
//!
//! Every register shifts toward the LSB. An LFSR tap set `{w, t1, t2, ...}`
//! names the feedback polynomial `x^w + x^t1 + x^t2 + ... + 1`; for example
//! `{16, 14, 13, 11}` is `x^16 + x^14 + x^13 + x^11 + 1`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{check_width, Trace, Word};
use crate::encoders::{gray_decode, gray_encode};
use crate::error::{Error, Result};

/// Default 16-bit taps, a maximal-length polynomial (x^16 + x^14 + x^13 + x^11 + 1).
pub const DEFAULT_TAPS_16: [usize; 4] = [16, 14, 13, 11];

/// Seed used for every pattern-generator experiment.
pub const REFERENCE_SEED: &str = "1011001010110110";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    LfsrInternal,
    LfsrExternal,
    Ca90,
    Ca150,
    Binary,
    Gray,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::LfsrInternal,
        GeneratorKind::LfsrExternal,
        GeneratorKind::Ca90,
        GeneratorKind::Ca150,
        GeneratorKind::Binary,
        GeneratorKind::Gray,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::LfsrInternal => "lfsr_internal",
            GeneratorKind::LfsrExternal => "lfsr_external",
            GeneratorKind::Ca90 => "ca90",
            GeneratorKind::Ca150 => "ca150",
            GeneratorKind::Binary => "binary",
            GeneratorKind::Gray => "gray",
        }
    }

    pub fn is_lfsr(self) -> bool {
        matches!(
            self,
            GeneratorKind::LfsrInternal | GeneratorKind::LfsrExternal
        )
    }

    pub fn ca_rule(self) -> Option<CaRule> {
        match self {
            GeneratorKind::Ca90 => Some(CaRule::Rule90),
            GeneratorKind::Ca150 => Some(CaRule::Rule150),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase().replace('-', "_"))
            .ok_or_else(|| Error::UnknownName {
                what: "generator kind",
                value: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaRule {
    Rule90,
    Rule150,
}

/// What a cellular automaton's edge cells see beyond the register.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Constant 0 outside the register.
    #[default]
    Null,
    /// The register wraps around.
    Cyclic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "null" | "zero" => Ok(Boundary::Null),
            "cyclic" | "periodic" => Ok(Boundary::Cyclic),
            _ => Err(Error::UnknownName {
                what: "boundary",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Null => "null",
            Boundary::Cyclic => "cyclic",
        })
    }
}

/// Validated LFSR tap set for a given width.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Taps {
    width: usize,
    positions: Vec<usize>,
}

impl Taps {
    /// Positions must lie in 1..=width and include `width`.
    pub fn new(width: usize, positions: &[usize]) -> Result<Self> {
        check_width(width)?;
        if let Some(&tap) = positions.iter().find(|&&t| t == 0 || t > width) {
            return Err(Error::InvalidTap { tap, width });
        }
        if !positions.contains(&width) {
            return Err(Error::MissingTopTap(width));
        }
        let mut positions = positions.to_vec();
        positions.sort_unstable_by(|a, b| b.cmp(a));
        positions.dedup();
        Ok(Taps { width, positions })
    }

    /// Parses a comma-separated list such as `16,14,13,11`.
    pub fn parse(width: usize, text: &str) -> Result<Self> {
        let positions = text
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| Error::UnknownName {
                    what: "tap position",
                    value: p.trim().to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Taps::new(width, &positions)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Positions in descending order.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    fn check(&self, state: &Word) -> Result<()> {
        if state.width() == self.width {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                expected: self.width,
                found: state.width(),
            })
        }
    }
}

impl fmt::Display for Taps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Fibonacci (external XOR) LFSR step: the feedback bit enters at the MSB
/// while everything shifts toward the LSB.
///
/// The feedback is the outgoing LSB XOR bit `t` for every tap `t < width`,
/// which realizes the recurrence `s[n+w] = s[n] + sum(s[n+t])`.
pub fn lfsr_external_step(state: &Word, taps: &Taps) -> Result<Word> {
    taps.check(state)?;
    let width = state.width();
    let feedback = taps
        .positions()
        .iter()
        .map(|&t| if t == width { 0 } else { t })
        .fold(false, |acc, i| acc ^ state.bit(i));
    let mut next = state.shr1();
    next.set_bit(state.width() - 1, feedback);
    Ok(next)
}

/// Galois (internal XOR) LFSR step: the bit shifted out of the LSB re-enters
/// at the MSB and is XORed into bit `t - 1` for every tap `t < width`.
pub fn lfsr_internal_step(state: &Word, taps: &Taps) -> Result<Word> {
    taps.check(state)?;
    let width = state.width();
    let out = state.lsb();
    let mut next = state.shr1();
    next.set_bit(width - 1, out);
    if out {
        for &t in taps.positions().iter().filter(|&&t| t < width) {
            let i = t - 1;
            let flipped = !next.bit(i);
            next.set_bit(i, flipped);
        }
    }
    Ok(next)
}

fn neighbours(state: &Word, i: usize, boundary: Boundary) -> (bool, bool) {
    let w = state.width();
    let left = if i + 1 < w {
        state.bit(i + 1)
    } else {
        boundary == Boundary::Cyclic && state.bit(0)
    };
    let right = if i > 0 {
        state.bit(i - 1)
    } else {
        boundary == Boundary::Cyclic && state.bit(w - 1)
    };
    (left, right)
}

/// One step of a uniform rule 90 or rule 150 automaton.
pub fn ca_step(state: &Word, rule: CaRule, boundary: Boundary) -> Word {
    let mut next = Word::zero(state.width()).expect("width already valid");
    for i in 0..state.width() {
        let (l, r) = neighbours(state, i, boundary);
        let v = match rule {
            CaRule::Rule90 => l ^ r,
            CaRule::Rule150 => l ^ state.bit(i) ^ r,
        };
        next.set_bit(i, v);
    }
    next
}

/// One step of a hybrid automaton; `rules[i]` governs cell `i`.
pub fn ca_hybrid_step(state: &Word, rules: &[CaRule], boundary: Boundary) -> Result<Word> {
    if rules.len() != state.width() {
        return Err(Error::WidthMismatch {
            expected: state.width(),
            found: rules.len(),
        });
    }
    let mut next = Word::zero(state.width())?;
    for (i, rule) in rules.iter().enumerate() {
        let (l, r) = neighbours(state, i, boundary);
        let self_term = *rule == CaRule::Rule150 && state.bit(i);
        next.set_bit(i, l ^ r ^ self_term);
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterKind {
    Binary,
    Gray,
}

pub fn counter_step(state: &Word, kind: CounterKind) -> Word {
    match kind {
        CounterKind::Binary => state.wrapping_increment(),
        CounterKind::Gray => gray_encode(&gray_decode(state).wrapping_increment()),
    }
}

/// Everything needed to reproduce a stimulus stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    kind: GeneratorKind,
    seed: Word,
    taps: Option<Taps>,
    boundary: Boundary,
}

impl GeneratorConfig {
    /// `taps` is required for LFSR kinds and ignored otherwise.
    pub fn new(
        kind: GeneratorKind,
        seed: Word,
        taps: Option<Taps>,
        boundary: Boundary,
    ) -> Result<Self> {
        let taps = if kind.is_lfsr() {
            let taps = taps.ok_or(Error::MissingTaps)?;
            if taps.width() != seed.width() {
                return Err(Error::WidthMismatch {
                    expected: seed.width(),
                    found: taps.width(),
                });
            }
            if seed.is_zero() {
                return Err(Error::ZeroLfsrSeed);
            }
            Some(taps)
        } else {
            None
        };
        Ok(GeneratorConfig {
            kind,
            seed,
            taps,
            boundary,
        })
    }

    /// The pattern-generator setup used for the reference experiments:
    /// 16-bit reference seed, default taps, null boundary.
    pub fn reference(kind: GeneratorKind) -> Self {
        let seed = Word::parse(REFERENCE_SEED, crate::bits::Radix::Binary, 16)
            .expect("reference seed is valid");
        let taps = Taps::new(16, &DEFAULT_TAPS_16).expect("default taps are valid");
        GeneratorConfig::new(kind, seed, Some(taps), Boundary::Null)
            .expect("reference config is valid")
    }

    /// Address counter starting from zero.
    pub fn counter(kind: CounterKind, width: usize) -> Result<Self> {
        let kind = match kind {
            CounterKind::Binary => GeneratorKind::Binary,
            CounterKind::Gray => GeneratorKind::Gray,
        };
        GeneratorConfig::new(kind, Word::zero(width)?, None, Boundary::Null)
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.seed.width()
    }

    pub fn seed(&self) -> &Word {
        &self.seed
    }

    pub fn taps(&self) -> Option<&Taps> {
        self.taps.as_ref()
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    fn step(&self, state: &Word) -> Word {
        let taps = || self.taps.as_ref().expect("LFSR config carries taps");
        match self.kind {
            GeneratorKind::LfsrInternal => lfsr_internal_step(state, taps()),
            GeneratorKind::LfsrExternal => lfsr_external_step(state, taps()),
            GeneratorKind::Ca90 => Ok(ca_step(state, CaRule::Rule90, self.boundary)),
            GeneratorKind::Ca150 => Ok(ca_step(state, CaRule::Rule150, self.boundary)),
            GeneratorKind::Binary => Ok(counter_step(state, CounterKind::Binary)),
            GeneratorKind::Gray => Ok(counter_step(state, CounterKind::Gray)),
        }
        .expect("config widths validated at construction")
    }
}

/// A running generator. Yields the seed first, then one new pattern per clock.
#[derive(Clone, Debug)]
pub struct Generator {
    config: GeneratorConfig,
    next: Word,
}

impl Generator {
    pub fn new(config: GeneratorConfig) -> Self {
        let next = config.seed.clone();
        Generator { config, next }
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }
}

impl Iterator for Generator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let following = self.config.step(&self.next);
        Some(std::mem::replace(&mut self.next, following))
    }
}

/// The seed followed by `cycles` clocked patterns (`cycles + 1` words).
pub fn generate(config: &GeneratorConfig, cycles: usize) -> Trace {
    let words = Generator::new(config.clone()).take(cycles + 1).collect();
    Trace::new(config.width(), words).expect("generator preserves width")
}
