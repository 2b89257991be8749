//! Randomised structural invariants across a pool of spec strings: metric axioms,
//! language closure properties, padding behaviour, hyperspace operator
//! algebra, and cross-checks between independently implemented searches.

use std::collections::BTreeSet;

use proptest::prelude::*;

use hypershift::analysis::{
    enumerate_periodic_words, mixing_certificate, sensitivity_witness, transitivity_certificate,
};
use hypershift::hyperspace::{dilatation, hausdorff_distance, induced_shift, TraceSet};
use hypershift::shiftspace::{metric_distance, Language, Rat, ShiftSpaceSpec, Symbol, Word};

fn word_strategy(k: u8, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k as Symbol, len).prop_map(Word::new)
}

fn trace_strategy(len: usize) -> impl Strategy<Value = TraceSet> {
    prop::collection::btree_set(word_strategy(2, len..len + 1), 1..6)
        .prop_map(|words| TraceSet::new(words).unwrap())
}

/// Mixed pool: full shifts, random small SFTs, two substitutions, and
/// tilde extensions of each flavour.
fn spec_strategy() -> impl Strategy<Value = ShiftSpaceSpec> {
    prop_oneof![
        (2u8..4).prop_map(|k| ShiftSpaceSpec::full(k).unwrap()),
        prop::collection::vec(word_strategy(2, 2..4), 1..3)
            .prop_map(|forbidden| ShiftSpaceSpec::finite_type(2, forbidden).unwrap()),
        Just(ShiftSpaceSpec::thue_morse()),
        Just(ShiftSpaceSpec::chacon()),
        Just(ShiftSpaceSpec::tilde(ShiftSpaceSpec::thue_morse()).unwrap()),
        Just(ShiftSpaceSpec::tilde(ShiftSpaceSpec::full(2).unwrap()).unwrap()),
    ]
}

fn union(a: &TraceSet, b: &TraceSet) -> TraceSet {
    TraceSet::new(a.words.iter().chain(b.words.iter()).cloned().collect::<BTreeSet<_>>()).unwrap()
}

fn is_subset(a: &TraceSet, b: &TraceSet) -> bool {
    a.words.is_subset(&b.words)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn spec_text_roundtrips(spec in spec_strategy()) {
        let rendered = spec.to_string();
        prop_assert_eq!(rendered.parse::<ShiftSpaceSpec>().unwrap(), spec);
    }

    #[test]
    fn metric_is_an_ultrametric(
        x in word_strategy(2, 6..7),
        y in word_strategy(2, 6..7),
        z in word_strategy(2, 6..7),
    ) {
        let zero = Rat::from_integer(0);
        let dxy = metric_distance(&x, &y).unwrap();
        prop_assert_eq!(dxy, metric_distance(&y, &x).unwrap());
        prop_assert_eq!(dxy == zero, x == y);
        let dxz = metric_distance(&x, &z).unwrap();
        let dyz = metric_distance(&y, &z).unwrap();
        prop_assert!(dxz <= dxy.max(dyz));
    }

    #[test]
    fn languages_are_factor_closed_and_extension_consistent(
        spec in spec_strategy(),
        n in 2usize..6,
    ) {
        let lang = Language::generate(&spec, 8).unwrap();
        for word in lang.words_of_length(n).unwrap() {
            for start in 0..word.len() {
                for end in start + 1..=word.len() {
                    prop_assert!(
                        lang.is_admissible(&word.slice(start, end)).unwrap(),
                        "factor {} of {} is inadmissible in {}",
                        word.slice(start, end), word, spec
                    );
                }
            }
            prop_assert!(
                lang.first_extension(&word, 8 - n).unwrap().is_some(),
                "{} does not extend to depth in {}", word, spec
            );
        }
    }

    #[test]
    fn full_shift_counts_are_exact_powers(k in 2u8..5, n in 1usize..8) {
        let lang = Language::generate(&ShiftSpaceSpec::full(k).unwrap(), 8).unwrap();
        let expected = (k as u128).pow(n as u32);
        prop_assert_eq!(lang.count(n).unwrap(), expected);
        prop_assert_eq!(lang.words_of_length(n).unwrap().len() as u128, expected);
    }

    #[test]
    fn padding_symbol_inserts_and_deletes_freely(word in word_strategy(3, 1..8)) {
        let tl = Language::generate(
            &ShiftSpaceSpec::tilde(ShiftSpaceSpec::thue_morse()).unwrap(),
            10,
        )
        .unwrap();
        let pad = tl.alphabet_size() - 1;
        if tl.is_admissible(&word).unwrap() {
            for slot in 0..=word.len() {
                let mut symbols = word.symbols().to_vec();
                symbols.insert(slot, pad);
                prop_assert!(
                    tl.is_admissible(&Word::new(symbols)).unwrap(),
                    "inserting padding at {slot} broke {word}"
                );
            }
            for slot in 0..word.len() {
                if word.symbols()[slot] == pad {
                    let mut symbols = word.symbols().to_vec();
                    symbols.remove(slot);
                    if !symbols.is_empty() {
                        prop_assert!(
                            tl.is_admissible(&Word::new(symbols)).unwrap(),
                            "deleting padding at {slot} broke {word}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hausdorff_axioms_hold(
        a in trace_strategy(8),
        b in trace_strategy(8),
        c in trace_strategy(8),
    ) {
        let zero = Rat::from_integer(0);
        let dab = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(dab, hausdorff_distance(&b, &a).unwrap());
        prop_assert_eq!(dab == zero, a == b);
        let dac = hausdorff_distance(&a, &c).unwrap();
        let dcb = hausdorff_distance(&c, &b).unwrap();
        prop_assert!(dab <= dac + dcb);
    }

    #[test]
    fn hausdorff_matches_mutual_dilatation(
        a in trace_strategy(8),
        b in trace_strategy(8),
        denom in 1i64..9,
    ) {
        let lang = Language::generate(&ShiftSpaceSpec::full(2).unwrap(), 8).unwrap();
        let eps = Rat::new(1, denom);
        // open-ball correspondence: strictly-within on both sides
        let within = hausdorff_distance(&a, &b).unwrap() < eps;
        let da = dilatation(&lang, &a, eps).unwrap();
        let db = dilatation(&lang, &b, eps).unwrap();
        prop_assert_eq!(within, is_subset(&a, &db) && is_subset(&b, &da));
    }

    #[test]
    fn induced_shift_distributes_over_union(a in trace_strategy(8), b in trace_strategy(8)) {
        let joined = union(&a, &b);
        let shifted = induced_shift(&joined).unwrap();
        prop_assert_eq!(
            &shifted,
            &union(&induced_shift(&a).unwrap(), &induced_shift(&b).unwrap())
        );
        prop_assert!(is_subset(&induced_shift(&a).unwrap(), &shifted));
    }

    #[test]
    fn mixing_bound_implies_transitivity_witness(
        spec in spec_strategy(),
        u_pick in 0usize..64,
        v_pick in 0usize..64,
    ) {
        let lang = Language::generate(&spec, 12).unwrap();
        let words = lang.words_of_length(2).unwrap();
        prop_assume!(!words.is_empty());
        let u = &words[u_pick % words.len()];
        let v = &words[v_pick % words.len()];
        if let Some(cert) = mixing_certificate(&lang, u, v, 6).unwrap() {
            prop_assert!(cert.n_bound <= 6);
            let hit = transitivity_certificate(&lang, u, v, 6).unwrap();
            prop_assert!(hit.is_some(), "mixing pair ({u},{v}) lost transitivity");
            prop_assert!(hit.unwrap().0 <= cert.n_bound);
        }
    }

    #[test]
    fn full_shift_mixing_bound_is_one(
        u in word_strategy(2, 1..4),
        v in word_strategy(2, 1..4),
    ) {
        let lang = Language::generate(&ShiftSpaceSpec::full(2).unwrap(), 12).unwrap();
        let cert = mixing_certificate(&lang, &u, &v, 5).unwrap().unwrap();
        prop_assert_eq!(cert.n_bound, 1);
    }

    #[test]
    fn deeper_truncation_preserves_mixing_bounds(
        u_pick in 0usize..16,
        v_pick in 0usize..16,
    ) {
        let spec: ShiftSpaceSpec = "sft:k=2;forbid=11".parse().unwrap();
        let shallow = Language::generate(&spec, 12).unwrap();
        let deep = Language::generate(&spec, 14).unwrap();
        let words = shallow.words_of_length(2).unwrap();
        let u = &words[u_pick % words.len()];
        let v = &words[v_pick % words.len()];
        let at_shallow = mixing_certificate(&shallow, u, v, 6).unwrap().map(|c| c.n_bound);
        let at_deep = mixing_certificate(&deep, u, v, 6).unwrap().map(|c| c.n_bound);
        prop_assert_eq!(at_shallow, at_deep);
    }

    #[test]
    fn sft_periodic_enumeration_matches_direct_oracle(
        forbidden in prop::collection::vec(word_strategy(2, 2..4), 1..3),
        p_max in 1usize..6,
    ) {
        let spec = ShiftSpaceSpec::finite_type(2, forbidden.clone()).unwrap();
        let lang = Language::generate(&spec, 10).unwrap();
        let got: BTreeSet<(String, usize)> = enumerate_periodic_words(&lang, p_max)
            .unwrap()
            .into_iter()
            .map(|p| (p.word.to_string(), p.period))
            .collect();

        // direct oracle: scan the periodic stream for forbidden factors
        let mut want = BTreeSet::new();
        for p in 1..=p_max {
            for code in 0..(1u32 << p) {
                let symbols: Vec<Symbol> = (0..p).map(|i| ((code >> i) & 1) as Symbol).collect();
                let word = Word::new(symbols);
                if !word.is_primitive() || word.canonical_rotation() != word {
                    continue;
                }
                let mut stream = Vec::new();
                while stream.len() < p + 10 {
                    stream.extend_from_slice(word.symbols());
                }
                let clean = (0..p).all(|offset| {
                    let window = &stream[offset..offset + 10];
                    forbidden.iter().all(|f| {
                        !window.windows(f.len()).any(|piece| piece == f.symbols())
                    })
                });
                if clean {
                    want.insert((word.to_string(), p));
                }
            }
        }
        prop_assert_eq!(got, want);
    }
}

#[test]
fn witness_payloads_keep_exact_arithmetic() {
    // rationals must serialize as strings, never floats
    let lang =
        Language::generate(&"sft:k=2;forbid=11".parse::<ShiftSpaceSpec>().unwrap(), 12).unwrap();
    let witness = sensitivity_witness(&lang, &"0".parse().unwrap(), 6).unwrap().unwrap();
    let value = serde_json::to_value(&witness).unwrap();
    assert!(value["separation"].is_string(), "separation must be a p/q string");
    assert_eq!(value["separation"].as_str().unwrap(), "1/2");
}
