//! The headline computation at full scale: over the three-letter
//! extension of the Thue–Morse language at depth 32, the induced shift
//! certifies periodic density and mixing while the base language refuses
//! periodic density conclusively.

use hypershift::analysis::{devaney_verdict, Verdict};
use hypershift::hyperspace::{
    hyper_mixing_corroboration, hyper_periodic_density_check, hyper_transitivity_witness,
    vietoris_member, VietorisBasic,
};
use hypershift::shiftspace::{generate_language, Language, ShiftSpaceSpec, Word};
use hypershift::tilde::{tilde_language, tilde_mixing_certificate, tilde_periodic_scan};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn flagship() -> Language {
    let inner = generate_language(&ShiftSpaceSpec::thue_morse(), 32).unwrap();
    tilde_language(&inner, 32).unwrap()
}

#[test]
fn induced_shift_has_dense_periodic_traces() {
    let tlang = flagship();
    let report = hyper_periodic_density_check(&tlang, 3, 8, 32).unwrap();
    assert_eq!(report.outcomes.len(), 25);
    assert!(report.outcomes.iter().all(|o| o.certificate.is_some()));
    let combined = report.combined.as_ref().unwrap();
    assert_eq!(combined.m_lcm, 11);
    assert!(combined.m_lcm < 32);
    // the fixed-point cylinder rides the periodic route, the rest share
    // the pinned construction period
    for o in &report.outcomes {
        let cert = o.certificate.as_ref().unwrap();
        if o.cylinder == w("222") {
            assert_eq!((cert.m, cert.route.as_str()), (1, "periodic-word"));
        } else {
            assert_eq!((cert.m, cert.route.as_str()), (11, "omega-limit"));
        }
        assert!(cert.trace.words.iter().all(|x| x.starts_with(&o.cylinder)));
    }
}

#[test]
fn base_language_refuses_periodic_density() {
    let tlang = flagship();
    let scan = tilde_periodic_scan(&tlang, 6).unwrap();
    assert!(scan.conclusive);
    assert_eq!(scan.found.len(), 1);
    assert_eq!(scan.found[0].word, w("2"));
    assert!(!scan.exclusions.is_empty());

    let verdict = devaney_verdict(&tlang, 3, 8, 6).unwrap();
    assert_eq!(verdict.verdict, Verdict::NotCertifiedAtResolution);
    assert!(verdict.transitive.is_some());
    assert!(verdict.periodically_dense.is_none());
    assert!(verdict.sensitive.is_some());
    assert!(verdict.refutation.is_none());
}

#[test]
fn extension_mixes_at_every_sampled_pair() {
    let tlang = flagship();
    let mut words = tlang.words_of_length(1).unwrap();
    words.extend(tlang.words_of_length(2).unwrap());
    assert_eq!(words.len(), 12);
    for u in &words {
        for v in &words {
            let cert = tilde_mixing_certificate(&tlang, u, v, 8).unwrap();
            let cert = cert.unwrap_or_else(|| panic!("no mixing bound for ({u}, {v})"));
            assert!(cert.n_bound <= 8);
        }
    }
}

#[test]
fn induced_shift_mixes_on_sampled_basics() {
    let tlang = flagship();
    let basics: Vec<VietorisBasic> = [
        vec!["0"],
        vec!["1"],
        vec!["2"],
        vec!["0", "1", "2"],
        vec!["01"],
        vec!["22"],
    ]
    .into_iter()
    .map(|cyls| VietorisBasic::new(cyls.into_iter().map(w).collect()).unwrap())
    .collect();
    let pairs: Vec<(VietorisBasic, VietorisBasic)> = basics
        .iter()
        .flat_map(|a| basics.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let report = hyper_mixing_corroboration(&tlang, &pairs, 8).unwrap();
    assert_eq!(report.pairs.len(), 36);
    for p in &report.pairs {
        assert!(
            p.hyper_n.is_some(),
            "no induced mixing bound for {} -> {}",
            p.u_basic,
            p.v_basic
        );
    }

    let from = VietorisBasic::new(vec![w("00"), w("2")]).unwrap();
    let to = VietorisBasic::new(vec![w("11")]).unwrap();
    let witness = hyper_transitivity_witness(&tlang, &from, &to, 8).unwrap().unwrap();
    assert!(vietoris_member(&witness.start, &from).unwrap());
}
