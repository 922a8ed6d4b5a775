//! Low-transition bus encodings: reflected gray code and bus-invert.

use crate::bits::{Trace, Word};
use crate::error::{Error, Result};

/// `w XOR (w >> 1)`.
pub fn gray_encode(w: &Word) -> Word {
    w.xor(&w.shr1()).expect("same width")
}

/// Prefix-XOR from the MSB down; inverse of [`gray_encode`].
pub fn gray_decode(g: &Word) -> Word {
    let mut out = g.clone();
    let mut acc = false;
    for i in (0..g.width()).rev() {
        acc ^= g.bit(i);
        out.set_bit(i, acc);
    }
    out
}

/// Values currently driven on a bus-invert coded bus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BusLineState {
    pub word: Word,
    pub invert: bool,
}

impl BusLineState {
    /// Idle bus: all data lines low, invert line low.
    pub fn idle(width: usize) -> Result<Self> {
        Ok(BusLineState {
            word: Word::zero(width)?,
            invert: false,
        })
    }

    /// Data lines plus the invert line as the new MSB.
    pub fn to_wide_word(&self) -> Result<Word> {
        let mut bits: Vec<bool> = self.word.iter_bits().collect();
        bits.push(self.invert);
        Word::from_bits_lsb_first(&bits)
    }

    /// Inverse of [`BusLineState::to_wide_word`].
    pub fn from_wide_word(wide: &Word) -> Result<Self> {
        if wide.width() < 2 {
            return Err(Error::WidthOutOfRange(wide.width() - 1));
        }
        let bits: Vec<bool> = wide.iter_bits().collect();
        let (data, invert) = bits.split_at(bits.len() - 1);
        Ok(BusLineState {
            word: Word::from_bits_lsb_first(data)?,
            invert: invert[0],
        })
    }

    /// Lines that toggle moving from `self` to `next`, invert line included.
    pub fn line_flips(&self, next: &BusLineState) -> Result<usize> {
        Ok(self.word.hamming_distance(&next.word)? + usize::from(self.invert != next.invert))
    }
}

/// Picks what to drive next. If more than half the data lines would toggle,
/// the complement is sent with the invert line high. A tie at exactly half
/// does not invert.
pub fn bus_invert_encode(prev: &BusLineState, next_raw: &Word) -> Result<BusLineState> {
    let width = next_raw.width();
    let distance = prev.word.hamming_distance(next_raw)?;
    Ok(if 2 * distance > width {
        BusLineState {
            word: next_raw.not(),
            invert: true,
        }
    } else {
        BusLineState {
            word: next_raw.clone(),
            invert: false,
        }
    })
}

pub fn bus_invert_decode(line: &BusLineState) -> Word {
    if line.invert {
        line.word.not()
    } else {
        line.word.clone()
    }
}

/// Trace encodings selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    Gray,
    BusInvert,
}

impl std::str::FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gray" => Ok(Encoding::Gray),
            "businvert" | "bus-invert" | "bus_invert" => Ok(Encoding::BusInvert),
            _ => Err(Error::UnknownName {
                what: "encoding",
                value: s.to_string(),
            }),
        }
    }
}

pub fn gray_encode_trace(trace: &Trace) -> Trace {
    let words = trace.words().iter().map(gray_encode).collect();
    Trace::new(trace.width(), words).expect("gray code preserves width")
}

/// Bus-invert codes `trace` starting from an idle bus. The result is
/// `width + 1` bits wide with the invert line as its MSB.
pub fn bus_invert_encode_trace(trace: &Trace) -> Result<Trace> {
    let mut line = BusLineState::idle(trace.width())?;
    let mut out = Trace::empty(trace.width() + 1)?;
    for raw in trace.words() {
        line = bus_invert_encode(&line, raw)?;
        out.push(line.to_wide_word()?)?;
    }
    Ok(out)
}

/// Recovers the raw stream from a `width + 1` bit bus-invert trace.
pub fn bus_invert_decode_trace(encoded: &Trace) -> Result<Trace> {
    let mut out = Trace::empty(encoded.width() - 1)?;
    for w in encoded.words() {
        out.push(bus_invert_decode(&BusLineState::from_wide_word(w)?))?;
    }
    Ok(out)
}

pub fn encode_trace(trace: &Trace, encoding: Encoding) -> Result<Trace> {
    match encoding {
        Encoding::Gray => Ok(gray_encode_trace(trace)),
        Encoding::BusInvert => bus_invert_encode_trace(trace),
    }
}
