//! Behavioral model of the bit transition counter.
//!
//! The counter sits on a bus and passes `datain` through to `dataout` one
//! clock later. Each cycle it reports how many lines toggled since the
//! previous cycle (`one_transition`) and the running sum since the last reset
//! (`total_transition`). Reset is synchronous and active-high.

use crate::bits::{check_width, Trace, Word};
use crate::error::{Error, Result};

/// Registers of one counter instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Btc {
    width: usize,
    prev_data: Word,
    total: u64,
    cycle: u64,
}

/// Outputs observed on one clock cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub cycle: u64,
    pub reset: bool,
    pub datain: Word,
    pub dataout: Word,
    pub one_transition: u32,
    pub total_transition: u64,
}

impl Btc {
    pub fn new(width: usize) -> Result<Self> {
        check_width(width)?;
        Ok(Btc {
            width,
            prev_data: Word::zero(width)?,
            total: 0,
            cycle: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Last registered `datain`.
    pub fn prev_data(&self) -> &Word {
        &self.prev_data
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Advances one clock edge.
    pub fn step(&mut self, reset: bool, datain: &Word) -> Result<CycleRecord> {
        if datain.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: datain.width(),
            });
        }
        let cycle = self.cycle;
        self.cycle += 1;

        let (one, dataout) = if reset {
            self.total = 0;
            (0, Word::zero(self.width)?)
        } else {
            let one = self.prev_data.hamming_distance(datain)?;
            self.total = self.total.saturating_add(one as u64);
            (one as u32, self.prev_data.clone())
        };
        self.prev_data = datain.clone();

        Ok(CycleRecord {
            cycle,
            reset,
            datain: datain.clone(),
            dataout,
            one_transition: one,
            total_transition: self.total,
        })
    }
}

/// Clocks every word of `trace` through a fresh counter.
///
/// With `reset_first`, cycle 0 is a reset cycle and the final total equals
/// the sum of Hamming distances between consecutive words.
pub fn run(trace: &Trace, reset_first: bool) -> Result<Vec<CycleRecord>> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut btc = Btc::new(trace.width())?;
    trace
        .words()
        .iter()
        .enumerate()
        .map(|(i, w)| btc.step(reset_first && i == 0, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hex16(v: u64) -> Word {
        Word::from_u64(16, v).unwrap()
    }

    #[test]
    fn new_state_is_zeroed() {
        for w in [4, 16] {
            let btc = Btc::new(w).unwrap();
            assert!(btc.prev_data().is_zero());
            assert_eq!(btc.prev_data().width(), w);
            assert_eq!(btc.total(), 0);
        }
        assert!(matches!(Btc::new(0), Err(Error::WidthOutOfRange(0))));
        assert!(Btc::new(1025).is_err());
    }

    #[test]
    fn fig3_sequence() {
        let mut btc = Btc::new(16).unwrap();
        let r0 = btc.step(true, &hex16(0x0000)).unwrap();
        assert_eq!((r0.one_transition, r0.total_transition), (0, 0));
        let r1 = btc.step(false, &hex16(0x0303)).unwrap();
        assert_eq!((r1.one_transition, r1.total_transition), (4, 4));
        assert_eq!(r1.dataout, hex16(0x0000));
        let r2 = btc.step(false, &hex16(0x0F03)).unwrap();
        assert_eq!((r2.one_transition, r2.total_transition), (2, 6));
        assert_eq!(r2.dataout, hex16(0x0303));
    }

    #[test]
    fn repeated_input_counts_nothing() {
        let mut btc = Btc::new(16).unwrap();
        btc.step(false, &hex16(0x00FF)).unwrap();
        let before = btc.total();
        let r = btc.step(false, &hex16(0x00FF)).unwrap();
        assert_eq!(r.one_transition, 0);
        assert_eq!(r.total_transition, before);
    }

    #[test]
    fn reset_zeroes_outputs_and_loads_datain() {
        let mut btc = Btc::new(8).unwrap();
        btc.step(false, &Word::from_u64(8, 0xFF).unwrap()).unwrap();
        let r = btc.step(true, &Word::from_u64(8, 0x0F).unwrap()).unwrap();
        assert_eq!(r.one_transition, 0);
        assert_eq!(r.total_transition, 0);
        assert!(r.dataout.is_zero());
        assert_eq!(btc.prev_data(), &Word::from_u64(8, 0x0F).unwrap());
        let r = btc.step(false, &Word::from_u64(8, 0x00).unwrap()).unwrap();
        assert_eq!(r.one_transition, 4);
    }

    #[test]
    fn step_rejects_width_mismatch() {
        let mut btc = Btc::new(8).unwrap();
        assert!(matches!(
            btc.step(false, &Word::zero(16).unwrap()),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn run_fig3_totals() {
        let t = Trace::new(16, vec![hex16(0), hex16(0x0303), hex16(0x0F03)]).unwrap();
        let totals: Vec<u64> = run(&t, true)
            .unwrap()
            .iter()
            .map(|r| r.total_transition)
            .collect();
        assert_eq!(totals, [0, 4, 6]);
    }

    #[test]
    fn run_constant_bus() {
        let t = Trace::new(16, vec![hex16(0xBEEF); 10]).unwrap();
        assert_eq!(run(&t, true).unwrap().last().unwrap().total_transition, 0);
    }

    #[test]
    fn run_empty_trace() {
        assert!(matches!(
            run(&Trace::empty(4).unwrap(), true),
            Err(Error::EmptyTrace)
        ));
    }

    fn trace_strategy() -> impl Strategy<Value = Trace> {
        (1usize..=64, 1usize..40).prop_flat_map(|(w, n)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), w), n).prop_map(
                move |rows| {
                    let words = rows
                        .iter()
                        .map(|b| Word::from_bits_lsb_first(b).unwrap())
                        .collect();
                    Trace::new(w, words).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn final_total_is_pairwise_sum(t in trace_strategy()) {
            let recs = run(&t, true).unwrap();
            let mut oracle = 0u64;
            for i in 1..t.len() {
                let (a, b) = (&t.words()[i - 1], &t.words()[i]);
                oracle += (0..t.width()).filter(|&k| a.bit(k) != b.bit(k)).count() as u64;
            }
            prop_assert_eq!(recs.last().unwrap().total_transition, oracle);
            for (k, r) in recs.iter().enumerate() {
                prop_assert!(r.one_transition as usize <= t.width());
                if k >= 1 {
                    prop_assert_eq!(&r.dataout, &t.words()[k - 1]);
                }
            }
        }

        #[test]
        fn reset_forgets_history(t in trace_strategy(), k in 0usize..40, junk in any::<u64>()) {
            let k = k % t.len();
            let mut a = Btc::new(t.width()).unwrap();
            let mut b = Btc::new(t.width()).unwrap();
            let mut noise = Word::zero(t.width()).unwrap();
            for i in 0..t.width().min(64) {
                noise.set_bit(i, junk >> i & 1 == 1);
            }
            for _ in 0..3 {
                b.step(false, &noise).unwrap();
                noise = noise.not();
            }
            for w in &t.words()[..k] {
                a.step(false, w).unwrap();
            }
            let tail = &t.words()[k..];
            let ra: Vec<_> = tail.iter().enumerate().map(|(i, w)| a.step(i == 0, w).unwrap()).collect();
            let rb: Vec<_> = tail.iter().enumerate().map(|(i, w)| b.step(i == 0, w).unwrap()).collect();
            for (x, y) in ra.iter().zip(&rb) {
                prop_assert_eq!(x.one_transition, y.one_transition);
                prop_assert_eq!(x.total_transition, y.total_transition);
                prop_assert_eq!(&x.dataout, &y.dataout);
            }
        }
    }
}
