//! Fixed-width bit vectors and bus traces.
//!
//! Bit index 0 is the LSB, which is the rightmost character of the binary
//! text form. A [`Word`] never stores bits above its width, so equality and
//! hashing are plain structural comparisons.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported bus width.
pub const MAX_WIDTH: usize = 1024;

const LIMB_BITS: usize = 64;

pub(crate) fn check_width(width: usize) -> Result<()> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange(width))
    }
}

/// Text radix accepted by [`Word::parse`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Radix {
    Binary,
    Hex,
}

impl Radix {
    pub fn base(self) -> u32 {
        match self {
            Radix::Binary => 2,
            Radix::Hex => 16,
        }
    }

    /// Name used in trace file headers.
    pub fn name(self) -> &'static str {
        match self {
            Radix::Binary => "bin",
            Radix::Hex => "hex",
        }
    }
}

impl FromStr for Radix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bin" | "binary" | "2" => Ok(Radix::Binary),
            "hex" | "16" => Ok(Radix::Hex),
            other => Err(Error::InvalidRadix(other.to_string())),
        }
    }
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A fixed-width bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    width: usize,
    limbs: Vec<u64>,
}

impl Word {
    pub fn zero(width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(Word {
            width,
            limbs: vec![0; width.div_ceil(LIMB_BITS)],
        })
    }

    pub fn ones(width: usize) -> Result<Self> {
        Ok(Word::zero(width)?.not())
    }

    /// Builds a word from the low bits of `value`. Fails if `value` has set
    /// bits at or above `width`.
    pub fn from_u64(width: usize, value: u64) -> Result<Self> {
        let mut w = Word::zero(width)?;
        if width < LIMB_BITS && value >> width != 0 {
            return Err(Error::ValueTooWide { width });
        }
        w.limbs[0] = value;
        Ok(w)
    }

    /// Builds a word from bits listed LSB first.
    pub fn from_bits_lsb_first(bits: &[bool]) -> Result<Self> {
        let mut w = Word::zero(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            w.set_bit(i, b);
        }
        Ok(w)
    }

    /// Parses MSB-first text in the given radix into a word of `width` bits.
    ///
    /// Hex input may carry leading zeros beyond `ceil(width / 4)` digits as
    /// long as the value itself fits. An optional `0x`/`0b` prefix matching
    /// the radix is accepted, as are `_` separators.
    pub fn parse(text: &str, radix: Radix, width: usize) -> Result<Self> {
        check_width(width)?;
        let trimmed = text.trim();
        let body = match radix {
            Radix::Binary => trimmed
                .strip_prefix("0b")
                .or_else(|| trimmed.strip_prefix("0B"))
                .unwrap_or(trimmed),
            Radix::Hex => trimmed
                .strip_prefix("0x")
                .or_else(|| trimmed.strip_prefix("0X"))
                .unwrap_or(trimmed),
        };
        let digits: Vec<char> = body.chars().filter(|&c| c != '_').collect();
        if digits.is_empty() {
            return Err(Error::EmptyText);
        }
        let bits_per_digit = match radix {
            Radix::Binary => 1,
            Radix::Hex => 4,
        };
        let mut w = Word::zero(width)?;
        for (pos, &c) in digits.iter().rev().enumerate() {
            let value = c.to_digit(radix.base()).ok_or(Error::InvalidDigit {
                digit: c,
                radix: radix.base(),
            })?;
            for k in 0..bits_per_digit {
                if value >> k & 1 == 1 {
                    let idx = pos * bits_per_digit + k;
                    if idx >= width {
                        return Err(Error::ValueTooWide { width });
                    }
                    w.set_bit(idx, true);
                }
            }
        }
        Ok(w)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bit(&self, index: usize) -> bool {
        assert!(
            index < self.width,
            "bit index {index} out of range for width {}",
            self.width
        );
        self.limbs[index / LIMB_BITS] >> (index % LIMB_BITS) & 1 == 1
    }

    pub fn set_bit(&mut self, index: usize, value: bool) {
        assert!(
            index < self.width,
            "bit index {index} out of range for width {}",
            self.width
        );
        let mask = 1u64 << (index % LIMB_BITS);
        let limb = &mut self.limbs[index / LIMB_BITS];
        if value {
            *limb |= mask;
        } else {
            *limb &= !mask;
        }
    }

    /// Bits from LSB (index 0) to MSB.
    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.bit(i))
    }

    pub fn msb(&self) -> bool {
        self.bit(self.width - 1)
    }

    pub fn lsb(&self) -> bool {
        self.bit(0)
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// The value as `u64` if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.limbs[1..].iter().any(|&l| l != 0) {
            None
        } else {
            Some(self.limbs[0])
        }
    }

    /// Number of set bits.
    pub fn popcount(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Number of bit positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &Word) -> Result<usize> {
        self.same_width(other)?;
        Ok(self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        self.same_width(other)?;
        Ok(Word {
            width: self.width,
            limbs: self
                .limbs
                .iter()
                .zip(&other.limbs)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Bitwise complement.
    pub fn not(&self) -> Word {
        let mut w = Word {
            width: self.width,
            limbs: self.limbs.iter().map(|l| !l).collect(),
        };
        w.mask_top();
        w
    }

    /// Logical shift by one position toward the LSB; the MSB becomes 0.
    pub fn shr1(&self) -> Word {
        let mut limbs = self.limbs.clone();
        let n = limbs.len();
        for i in 0..n {
            let carry = if i + 1 < n {
                limbs[i + 1] << (LIMB_BITS - 1)
            } else {
                0
            };
            limbs[i] = (limbs[i] >> 1) | carry;
        }
        Word {
            width: self.width,
            limbs,
        }
    }

    /// Logical shift by one position toward the MSB; the LSB becomes 0 and the
    /// old MSB is dropped.
    pub fn shl1(&self) -> Word {
        let mut limbs = self.limbs.clone();
        for i in (0..limbs.len()).rev() {
            let carry = if i > 0 {
                limbs[i - 1] >> (LIMB_BITS - 1)
            } else {
                0
            };
            limbs[i] = (limbs[i] << 1) | carry;
        }
        let mut w = Word {
            width: self.width,
            limbs,
        };
        w.mask_top();
        w
    }

    /// `(self + 1) mod 2^width`.
    pub fn wrapping_increment(&self) -> Word {
        let mut w = self.clone();
        for limb in w.limbs.iter_mut() {
            let (sum, overflow) = limb.overflowing_add(1);
            *limb = sum;
            if !overflow {
                break;
            }
        }
        w.mask_top();
        w
    }

    /// MSB-first binary text, exactly `width` characters.
    pub fn to_binary_string(&self) -> String {
        (0..self.width)
            .rev()
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    /// Uppercase hex, zero-padded to `ceil(width / 4)` digits.
    pub fn to_hex_string(&self) -> String {
        let digits = self.width.div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|&k| {
                        let idx = d * 4 + k;
                        idx < self.width && self.bit(idx)
                    })
                    .fold(0u32, |acc, k| acc | 1 << k);
                char::from_digit(nibble, 16).unwrap().to_ascii_uppercase()
            })
            .collect()
    }

    pub fn render(&self, radix: Radix) -> String {
        match radix {
            Radix::Binary => self.to_binary_string(),
            Radix::Hex => self.to_hex_string(),
        }
    }

    fn same_width(&self, other: &Word) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            })
        }
    }

    fn mask_top(&mut self) {
        let rem = self.width % LIMB_BITS;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}'b{})", self.width, self.to_binary_string())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

/// Values of one bus over consecutive clock cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    width: usize,
    words: Vec<Word>,
}

impl Trace {
    pub fn new(width: usize, words: Vec<Word>) -> Result<Self> {
        check_width(width)?;
        if let Some(bad) = words.iter().find(|w| w.width() != width) {
            return Err(Error::WidthMismatch {
                expected: width,
                found: bad.width(),
            });
        }
        Ok(Trace { width, words })
    }

    pub fn empty(width: usize) -> Result<Self> {
        Trace::new(width, Vec::new())
    }

    pub fn push(&mut self, word: Word) -> Result<()> {
        if word.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: word.width(),
            });
        }
        self.words.push(word);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Number of word-to-word transfers.
    pub fn transfers(&self) -> usize {
        self.words.len().saturating_sub(1)
    }

    /// Consecutive `(previous, next)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.words.windows(2).map(|p| (&p[0], &p[1]))
    }

    pub fn into_words(self) -> Vec<Word> {
        self.words
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bin(s: &str) -> Word {
        Word::parse(s, Radix::Binary, s.len()).unwrap()
    }

    #[test]
    fn parse_hex_fig3_value() {
        let w = Word::parse("0303", Radix::Hex, 16).unwrap();
        assert_eq!(w.to_binary_string(), "0000001100000011");
        assert_eq!(w.to_hex_string(), "0303");
    }

    #[test]
    fn parse_seed_verbatim() {
        let w = Word::parse("1011001010110110", Radix::Binary, 16).unwrap();
        assert_eq!(w.to_binary_string(), "1011001010110110");
        assert!(w.msb());
        assert!(!w.lsb());
    }

    #[test]
    fn parse_zero_hex() {
        let w = Word::parse("0", Radix::Hex, 16).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.width(), 16);
        assert_eq!(w.to_hex_string(), "0000");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(
            Word::parse("G3", Radix::Hex, 16),
            Err(Error::InvalidDigit { digit: 'G', .. })
        ));
        assert!(matches!(
            Word::parse("102", Radix::Binary, 3),
            Err(Error::InvalidDigit { digit: '2', .. })
        ));
        assert!(matches!(
            Word::parse("10000", Radix::Binary, 4),
            Err(Error::ValueTooWide { width: 4 })
        ));
        // 0x1F needs 5 bits
        assert!(Word::parse("1F", Radix::Hex, 4).is_err());
        assert!(Word::parse("0F", Radix::Hex, 4).is_ok());
        assert!(Word::parse("000F", Radix::Hex, 4).is_ok());
        assert!(matches!(
            Word::parse("", Radix::Hex, 4),
            Err(Error::EmptyText)
        ));
        assert!(matches!(
            Word::parse("0", Radix::Hex, 0),
            Err(Error::WidthOutOfRange(0))
        ));
        assert!(matches!(
            Word::parse("0", Radix::Hex, 1025),
            Err(Error::WidthOutOfRange(1025))
        ));
    }

    #[test]
    fn hex_lowercase_accepted_rendered_upper() {
        let w = Word::parse("0f03", Radix::Hex, 16).unwrap();
        assert_eq!(w.to_hex_string(), "0F03");
    }

    #[test]
    fn hex_pads_odd_widths() {
        let w = Word::parse("11111", Radix::Binary, 5).unwrap();
        assert_eq!(w.to_hex_string(), "1F");
        let w = Word::from_u64(9, 0x1FF).unwrap();
        assert_eq!(w.to_hex_string(), "1FF");
    }

    #[test]
    fn hamming_worked_examples() {
        assert_eq!(
            bin("00111100").hamming_distance(&bin("11111101")).unwrap(),
            3
        );
        let a = Word::from_u64(16, 0x0000).unwrap();
        let b = Word::from_u64(16, 0x0303).unwrap();
        let c = Word::from_u64(16, 0x0F03).unwrap();
        assert_eq!(a.hamming_distance(&b).unwrap(), 4);
        assert_eq!(b.hamming_distance(&c).unwrap(), 2);
        assert_eq!(c.hamming_distance(&c).unwrap(), 0);
    }

    #[test]
    fn hamming_width_mismatch() {
        let a = Word::zero(8).unwrap();
        let b = Word::zero(9).unwrap();
        assert!(matches!(
            a.hamming_distance(&b),
            Err(Error::WidthMismatch {
                expected: 8,
                found: 9
            })
        ));
    }

    #[test]
    fn popcount_cases() {
        assert_eq!(Word::zero(16).unwrap().popcount(), 0);
        for w in [1, 7, 63, 64, 65, 128, 1024] {
            assert_eq!(Word::ones(w).unwrap().popcount(), w);
        }
        assert_eq!(bin("0000001100000011").popcount(), 4);
    }

    #[test]
    fn increment_wraps() {
        assert_eq!(bin("0111").wrapping_increment(), bin("1000"));
        assert_eq!(bin("1111").wrapping_increment(), bin("0000"));
        let w = Word::ones(64).unwrap().wrapping_increment();
        assert!(w.is_zero());
        let w = Word::from_u64(65, u64::MAX).unwrap().wrapping_increment();
        assert!(w.bit(64));
        assert_eq!(w.popcount(), 1);
    }

    #[test]
    fn shifts_across_limbs() {
        let mut w = Word::zero(70).unwrap();
        w.set_bit(64, true);
        let r = w.shr1();
        assert!(r.bit(63));
        assert_eq!(r.popcount(), 1);
        assert_eq!(r.shl1(), w);
        let top = {
            let mut t = Word::zero(70).unwrap();
            t.set_bit(69, true);
            t
        };
        assert!(top.shl1().is_zero());
    }

    #[test]
    fn trace_rejects_mixed_widths() {
        let words = vec![Word::zero(4).unwrap(), Word::zero(5).unwrap()];
        assert!(Trace::new(4, words).is_err());
        let t = Trace::new(4, vec![Word::zero(4).unwrap()]).unwrap();
        assert_eq!(t.transfers(), 0);
    }

    fn word_strategy() -> impl Strategy<Value = (Word, Word, Word)> {
        (1usize..200).prop_flat_map(|w| {
            let bits = proptest::collection::vec(any::<bool>(), w);
            (bits.clone(), bits.clone(), bits).prop_map(|(a, b, c)| {
                (
                    Word::from_bits_lsb_first(&a).unwrap(),
                    Word::from_bits_lsb_first(&b).unwrap(),
                    Word::from_bits_lsb_first(&c).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn hamming_matches_per_bit_loop((a, b, c) in word_strategy()) {
            let oracle = (0..a.width()).filter(|&i| a.bit(i) != b.bit(i)).count();
            let d = a.hamming_distance(&b).unwrap();
            prop_assert_eq!(d, oracle);
            prop_assert_eq!(d, a.xor(&b).unwrap().popcount());
            prop_assert_eq!(d, b.hamming_distance(&a).unwrap());
            prop_assert!(a.hamming_distance(&c).unwrap() <= d + b.hamming_distance(&c).unwrap());
            prop_assert!(d <= a.width());
            prop_assert_eq!(d == a.width(), b == a.not());
        }

        #[test]
        fn text_round_trip((a, _, _) in word_strategy()) {
            prop_assert_eq!(Word::parse(&a.to_binary_string(), Radix::Binary, a.width()).unwrap(), a.clone());
            prop_assert_eq!(Word::parse(&a.to_hex_string(), Radix::Hex, a.width()).unwrap(), a);
        }
    }
}
