use std::collections::HashSet;
use std::sync::Arc;

use proptest::prelude::*;

use pebbledepth::complexity::{
    canonical_fst, decode_fst, decode_pb, dk_fst_over, encode_fst, encode_pb, enumerate_fsts,
};
use pebbledepth::constructions::{
    build_cprime, witness_remark1_prefix, witness_thm4_prefix, cprime_block_output_len,
};
use pebbledepth::fst::{il_check, il_decode, FstMachine};
use pebbledepth::lz78::{lz78_decode, lz78_parse};
use pebbledepth::pebble::{
    naive_budget, pb_run, pb_run_naive, pb_step, Action, PbConfiguration, PbError, PebbleMachine, Symbol, Transition,
};
use pebbledepth::profiles::{profile, MeasureConfig};
use pebbledepth::pushdown::{pdc_il_check, pdc_il_decode, pdc_run, Input, PdcMachine, PdcRule, StackSym};
use pebbledepth::sequences::{
    pref_sequence, remark1_block, select_block, thm4_stage, FstImage, Remark1Params, Remark1Sequence, Selector,
    Thm4Params, Thm4Sequence,
};
use pebbledepth::words::{
    double, pref, reverse, BitStreamSource, BitWord, Champernowne, Periodic, SeededRandom,
};

fn word(max: usize) -> impl Strategy<Value = BitWord> + Clone {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(BitWord::from_bits)
}

fn fst(max_states: usize) -> impl Strategy<Value = FstMachine> {
    (1..=max_states).prop_flat_map(|n| {
        let slot = (0..n, word(2));
        prop::collection::vec((slot.clone(), slot), n).prop_map(|rows| {
            let next = rows.iter().map(|((a, _), (b, _))| [*a, *b]).collect();
            let out = rows.into_iter().map(|((_, u), (_, w))| [u, w]).collect();
            FstMachine::new(next, out).unwrap()
        })
    })
}

/// Random pebble machine with start 0 and one final state `n-1`; each
/// non-final (state, symbol, mask) entry is defined with probability ~3/4.
fn pebble(max_states: usize, max_pebbles: usize) -> impl Strategy<Value = PebbleMachine> {
    (2..=max_states, 0..=max_pebbles).prop_flat_map(|(n, k)| {
        let entries = (n - 1) * 4 * (1 << k);
        let entry = prop::option::weighted(0.75, (0..n, 0..4usize, word(1)));
        prop::collection::vec(entry, entries).prop_map(move |es| {
            let mut m = PebbleMachine::new(n, 0, &[n - 1], k).unwrap();
            let mut it = es.into_iter();
            for q in 0..n - 1 {
                for sym in Symbol::ALL {
                    for mask in 0..1 << k {
                        if let Some((next, a, out)) = it.next().unwrap() {
                            m.set(q, sym, mask, Transition::new(next, Action::ALL[a], out)).unwrap();
                        }
                    }
                }
            }
            m
        })
    })
}

fn pdc(unary: bool) -> impl Strategy<Value = PdcMachine> {
    (1..=3usize, 0..=2usize, any::<u64>()).prop_map(move |(n, c, seed)| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut m = PdcMachine::new(n, 0, c, unary).unwrap();
            let syms: Vec<StackSym> = m.stack_alphabet().to_vec();
            for q in 0..n {
                for &y in &syms {
                    let rule = |rng: &mut rand_chacha::ChaCha8Rng| {
                        let mut push: Vec<StackSym> = if y == StackSym::Bottom {
                            vec![StackSym::Bottom]
                        } else {
                            Vec::new()
                        };
                        for _ in 0..rng.gen_range(0..=2) {
                            let s = syms[rng.gen_range(0..syms.len())];
                            if s != StackSym::Bottom {
                                push.insert(0, s);
                            }
                        }
                        let out: BitWord = (0..rng.gen_range(0..=2)).map(|_| rng.gen::<bool>()).collect();
                        PdcRule::new(rng.gen_range(0..n), push, out)
                    };
                    if c > 0 && rng.gen_bool(0.3) {
                        let r = rule(&mut rng);
                        m.set(q, Input::Lambda, y, r).unwrap();
                    } else {
                        for b in [false, true] {
                            let r = rule(&mut rng);
                            m.set(q, Input::Bit(b), y, r).unwrap();
                        }
                    }
                }
            }
            if m.validate().is_ok() {
                return m;
            }
        }
    })
}

fn sources() -> Vec<Arc<dyn BitStreamSource>> {
    vec![
        Arc::new(Periodic::new(BitWord::from_bits(vec![false, true, true]))),
        Arc::new(Champernowne),
        Arc::new(SeededRandom::new(3)),
        Arc::new(pref_sequence(Champernowne)),
        Arc::new(Thm4Sequence::new(Thm4Params::new(3, 1).unwrap())),
        Arc::new(Thm4Sequence::new(Thm4Params::new(8, 4).unwrap())),
        Arc::new(Remark1Sequence::new(Remark1Params::new(9, 9, Selector::default(), 2).unwrap())),
        Arc::new(FstImage::new(Champernowne, FstMachine::doubler()).unwrap()),
    ]
}

#[test]
fn double_reverse_commute() {
    for x in pebbledepth::fst::words_up_to(12) {
        assert_eq!(double(&reverse(&x)), reverse(&double(&x)));
    }
}

#[test]
fn sources_are_prefix_consistent() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(100);
    for s in sources() {
        for _ in 0..100 {
            let a = rng.gen_range(0..3000);
            let b = rng.gen_range(0..3000);
            let (m, n) = (a.min(b), a.max(b));
            let long = s.prefix(n);
            assert_eq!(long.len(), n);
            assert_eq!(s.prefix(m).bits(), &long[..m], "{} at ({m}, {n})", s.label());
        }
    }
}

#[test]
fn thm4_zone_structure() {
    for (k, v) in [(3, 1), (3, 2), (4, 2), (5, 3)] {
        let p = Thm4Params::new(k, v).unwrap();
        for m in k..=12 {
            let st = thm4_stage(p, m);
            let words: usize = st.palindromes.len() + st.zones.iter().map(|z| 2 * z.xs.len()).sum::<usize>();
            let flags: usize = st.flag + st.zones.iter().map(|z| z.flag).sum::<usize>();
            assert_eq!(st.text().len(), m * words + flags);
            for z in st.zones.iter().filter(|z| !z.is_empty()) {
                // too few free pairs at k=3, v=2 for m <= 4
                let tiny = (k, v) == (3, 2) && m <= 4;
                assert!(tiny || z.has_boundary_zeros(), "k={k} v={v} m={m}");
                for (x, y) in z.xs.iter().rev().zip(z.ys()) {
                    assert_eq!(reverse(x), y);
                }
            }
            // every listed word avoids 1^k and appears once
            let mut seen = HashSet::new();
            for w in st.palindromes.iter().chain(st.zones.iter().flat_map(|z| z.xs.iter())) {
                assert!(!w.windows(k).any(|r| r.iter().all(|&b| b)));
                assert!(seen.insert(w.clone()));
            }
        }
    }
}

#[test]
fn remark1_blocks_avoid_runs_and_divide() {
    let p = Remark1Params::new(9, 3, Selector::FixedSeedHash, 4).unwrap();
    let threshold = p.threshold().unwrap();
    for j in 1..=12 {
        let r = select_block(&p, j);
        assert!(!r.windows(9).any(|w| w.iter().all(|&b| b)));
        if j >= threshold {
            assert_eq!(r.len() % p.v, 0);
        }
        assert_eq!(remark1_block(&r, p.k).len(), 2 * r.len() * r.len() + p.k);
    }
}

#[test]
fn profile_lengths_are_monotone() {
    let seq = Thm4Sequence::new(Thm4Params::new(4, 2).unwrap());
    let cfg = MeasureConfig {
        cprime: Some(Arc::new(build_cprime(2, 4, 2).unwrap())),
        ..Default::default()
    };
    let rows = profile(&seq, &[0, 10, 100, 1000, 5000], &cfg).unwrap();
    for r in &rows {
        assert_eq!(r.len_identity, r.n);
    }
    for w in rows.windows(2) {
        assert!(w[0].len_lz78_plain <= w[1].len_lz78_plain);
        assert!(w[0].len_lz78_gamma <= w[1].len_lz78_gamma);
        assert!(w[0].len_cprime <= w[1].len_cprime);
    }
}

#[test]
fn cprime_block_lengths() {
    let (k, v) = (9, 3);
    let seq = Remark1Sequence::new(Remark1Params::new(k, v, Selector::FixedSeedHash, 1).unwrap());
    let m = seq.counting_prefix_len().unwrap();
    let c = build_cprime(m, k, v).unwrap();
    let bounds = seq.boundaries(100_000);
    let x = seq.prefix(*bounds.last().unwrap());
    let whole = pdc_run(&c, &x).unwrap().output.len();
    let blocks = seq.blocks(bounds.len());
    let expect: usize = m + blocks[m.min(blocks.len())..]
        .iter()
        .map(|r| cprime_block_output_len(r.len(), k, v))
        .sum::<usize>();
    if m == 0 {
        assert_eq!(whole, expect);
    } else {
        assert!(whole >= expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pref_length(x in word(64)) {
        let n = x.len();
        prop_assert_eq!(pref(&x).len(), n * (n + 1) / 2);
    }

    #[test]
    fn fst_output_monotone(t in fst(4), x in word(12), b in any::<bool>()) {
        let (y, _) = t.run(&x);
        let mut xb = x.clone();
        xb.push(b);
        let (yb, _) = t.run(&xb);
        prop_assert!(y.is_prefix_of(&yb));
        prop_assert_eq!(t.run(&x), (y, t.run(&x).1));
    }

    #[test]
    fn il_decode_roundtrip(t in fst(3)) {
        if il_check(&t, 7).unwrap().is_injective() {
            for x in pebbledepth::fst::words_up_to(7) {
                let (y, q) = t.run(&x);
                prop_assert_eq!(il_decode(&t, &y, q, 7).unwrap(), x);
            }
        }
    }

    #[test]
    fn lz78_roundtrip_and_closure(x in word(256)) {
        let p = lz78_parse(&x);
        prop_assert_eq!(lz78_decode(&p.pairs()).unwrap(), x);
        let phrases: HashSet<&BitWord> = p.phrases.iter().collect();
        for ph in &p.phrases {
            let parent = ph.prefix(ph.len() - 1);
            prop_assert!(parent.is_empty() || phrases.contains(&parent));
        }
    }

    #[test]
    fn thm4_witness_matches_generator(len in 0usize..4000, which in 0usize..3) {
        let (k, v) = [(3, 1), (4, 2), (8, 4)][which];
        let w = witness_thm4_prefix(k, v, len).unwrap();
        let seq = Thm4Sequence::new(Thm4Params::new(k, v).unwrap());
        prop_assert_eq!(w.expected_output, seq.prefix(len));
    }

    #[test]
    fn remark1_witness_matches_generator(len in 0usize..30_000, seed in 0u64..4) {
        let seq = Remark1Sequence::new(Remark1Params::new(9, 9, Selector::FixedSeedHash, seed).unwrap());
        let w = witness_remark1_prefix(&seq, len).unwrap();
        prop_assert_eq!(w.expected_output, seq.prefix(len));
    }

    #[test]
    fn cprime_runs_keep_bottom(x in word(200), m in 0usize..4, k in 2usize..5, v in 1usize..4) {
        let c = build_cprime(m, k, v).unwrap();
        let r = pdc_run(&c, &x).unwrap();
        prop_assert_eq!(r.stack.last(), Some(&StackSym::Bottom));
        prop_assert_eq!(r.stack.iter().filter(|&&s| s == StackSym::Bottom).count(), 1);
    }

    #[test]
    fn pdc_runs_keep_bottom(m in pdc(false), x in word(24)) {
        if let Ok(r) = pdc_run(&m, &x) {
            prop_assert_eq!(r.stack.last(), Some(&StackSym::Bottom));
            prop_assert_eq!(r.stack.iter().filter(|&&s| s == StackSym::Bottom).count(), 1);
        }
    }

    #[test]
    fn pdc_il_decode_roundtrip(m in pdc(true)) {
        if pdc_il_check(&m, 6).unwrap().is_injective() {
            for x in pebbledepth::fst::words_up_to(6) {
                if let Ok(r) = pdc_run(&m, &x) {
                    prop_assert_eq!(pdc_il_decode(&m, &r.output, r.end_state, 6).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn pb_matches_naive(m in pebble(3, 1), x in word(4)) {
        let budget = naive_budget(&m, x.len());
        let fast = pb_run(&m, &x);
        match pb_run_naive(&m, &x, budget) {
            None => prop_assert!(matches!(fast, Err(PbError::Divergent { .. })), "{:?}", fast),
            Some(slow) => prop_assert_eq!(fast, slow),
        }
    }

    #[test]
    fn pb_steps_keep_stack_discipline(m in pebble(4, 3), x in word(6)) {
        let mut c = PbConfiguration::initial(&m);
        for _ in 0..10_000 {
            prop_assert!(c.is_stack_disciplined());
            if m.is_final(c.state) {
                break;
            }
            match pb_step(&m, &x, &c) {
                Ok(n) => c = n,
                Err(_) => break,
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fst_codec_roundtrip(t in fst(5)) {
        let code = encode_fst(&t);
        prop_assert_eq!(decode_fst(&code).unwrap(), t.clone());
        prop_assert_eq!(encode_fst(&canonical_fst(&t)).len(), code.len());
    }

    #[test]
    fn pb_codec_roundtrip(m in pebble(4, 2)) {
        prop_assert_eq!(decode_pb(&encode_pb(&m)).unwrap(), m);
    }
}

#[test]
fn dk_antimonotone_on_short_words() {
    let tables: Vec<Vec<FstMachine>> = (0..=14).map(|k| enumerate_fsts(k).unwrap()).collect();
    for x in pebbledepth::fst::words_up_to(7) {
        let vals: Vec<Option<usize>> = tables.iter().map(|ms| dk_fst_over(&x, ms).value).collect();
        for w in vals.windows(2) {
            assert!(w[1].is_some() || w[0].is_none());
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                assert!(b <= a, "x={x}");
            }
        }
    }
}
