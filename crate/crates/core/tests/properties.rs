use proptest::prelude::*;

use btc_core::activity::analyze_trace;
use btc_core::bits::{Trace, Word};
use btc_core::btc;
use btc_core::encoders::{bus_invert_encode_trace, gray_encode_trace};
use btc_core::generators::CounterKind;
use btc_core::tables::counter_trace;

/// Random walk where each line toggles with probability `p` per transfer.
fn biased_trace(width: usize, len: usize, p: f64, seed: u64) -> Trace {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut cur = Word::zero(width).unwrap();
    let mut words = vec![cur.clone()];
    for _ in 1..len {
        for i in 0..width {
            if rng.gen_bool(p) {
                let b = cur.bit(i);
                cur.set_bit(i, !b);
            }
        }
        words.push(cur.clone());
    }
    Trace::new(width, words).unwrap()
}

proptest! {
    #[test]
    fn analyze_matches_btc(width in 1usize..=64, len in 2usize..80, p in 0.0f64..1.0, seed in any::<u64>()) {
        let t = biased_trace(width, len, p, seed);
        let a = analyze_trace(&t).unwrap();
        let b = btc::run(&t, true).unwrap();
        prop_assert_eq!(a.total_transitions, b.last().unwrap().total_transition);
    }

    #[test]
    fn bus_invert_lowers_busy_buses(width in 1usize..=32, len in 2usize..80, p in 0.55f64..1.0, seed in any::<u64>()) {
        let t = biased_trace(width, len, p, seed);
        let raw = analyze_trace(&t).unwrap();
        prop_assume!(raw.tau > 0.5);
        let enc = analyze_trace(&bus_invert_encode_trace(&t).unwrap()).unwrap();
        prop_assert_eq!(enc.width, width + 1);
        prop_assert!(enc.tau <= raw.tau, "encoded {} > raw {}", enc.tau, raw.tau);
    }
}

#[test]
fn gray_encoded_address_bus_flips_once_per_step() {
    for w in 1..=10 {
        let t = counter_trace(CounterKind::Binary, w);
        let r = analyze_trace(&gray_encode_trace(&t)).unwrap();
        assert_eq!(r.tau, 1.0 / w as f64);
        assert_eq!(r.total_transitions, (1 << w) - 1);
    }
}
