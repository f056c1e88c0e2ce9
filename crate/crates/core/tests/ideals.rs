use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use synchro_core::algebra::{AlgebraicStructure, PipelineConfig, Tolerances};
use synchro_core::automaton::{self, cerny};
use synchro_core::census::{census, CensusMode};
use synchro_core::ideal::{
    all_minimal_sections, is_core, minimal_core, sigma_classes, synthesize_with, IdealAnalysis, ZERO_CLASS,
};
use synchro_core::packing::packing_number;
use synchro_core::Automaton;

fn synchronizing_census(n: usize) -> Vec<Automaton> {
    census(n, 2, CensusMode::IsoReduced)
        .unwrap()
        .into_iter()
        .filter(automaton::is_synchronizing)
        .collect()
}

#[test]
fn ideal_laws_on_three_state_census() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for a in synchronizing_census(3).into_iter().chain([cerny(4).unwrap()]) {
        let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
        let wd = s.wedderburn(&Tolerances::default(), 1).unwrap();
        let an = IdealAnalysis::new(&s, &wd).unwrap();
        let mt = s.monoid();
        let fr = automaton::former_rank(&a).unwrap();
        assert!(fr <= *an.rnk().iter().min().unwrap());
        assert!(an.ideals.iter().all(|d| d.constant_rank()));
        assert!(is_core(&an.supports, an.core.members));
        for t in an.core.members.iter() {
            let smaller = synchro_core::algebra::Support(an.core.members.0 & !(1 << t));
            assert!(!is_core(&an.supports, smaller));
        }

        let sections = all_minimal_sections(mt, &an.supports);
        for sec in &sections {
            // zero propagation across the section
            for x in 0..mt.len() {
                let inside = sec.support.iter().filter(|&i| an.supports[x].contains(i)).count();
                assert!(inside == 0 || inside == sec.support.len());
            }
            for i in sec.support.iter() {
                let cm = &an.components[i];
                let sigma = sigma_classes(mt, cm, sec).unwrap();
                assert!(sigma.is_right_compatible(cm));
                // representative-product law
                for (x, reps) in sigma.representatives.iter().enumerate().skip(1) {
                    assert_eq!(sigma.ranks[x], an.ideals[i].rnk);
                    let m = reps[0];
                    for _ in 0..5 {
                        let l = rng.random_range(0..mt.len());
                        let r = rng.random_range(0..mt.len());
                        let composed = mt.product(mt.product(l, m), r);
                        let expected = cm.product(mt, cm.product(mt, cm.class_of(l), cm.class_of(m)), cm.class_of(r));
                        assert_eq!(cm.class_of(composed), expected);
                        if expected != ZERO_CLASS {
                            assert!(cm.in_minimal_ideal(expected));
                        }
                    }
                }
            }
        }
        if s.is_semisimple() {
            assert_eq!(fr, *an.rnk().iter().min().unwrap());
            let (w, cert) = synthesize_with(&s, &wd, &an).unwrap();
            assert_eq!(automaton::rank(&a, &w).unwrap(), 1);
            assert!(cert.holds());
            let bound = (a.states() - 1) * packing_number(fr, a.states()).unwrap();
            assert!(w.len() <= bound);
        }
    }
}

#[test]
fn core_of_single_component() {
    let a = cerny(3).unwrap();
    let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
    let wd = s.wedderburn(&Tolerances::default(), 0).unwrap();
    assert_eq!(wd.k, 1);
    let supports = synchro_core::ideal::element_supports(&s, &wd);
    let core = minimal_core(s.monoid(), &supports, 1).unwrap();
    assert_eq!(core.members.0, 1);
    assert_eq!(core.sections.len(), 1);
}

#[test]
fn synthesis_rejects_non_semisimple() {
    let a = synchronizing_census(3)
        .into_iter()
        .find(|a| !synchro_core::algebra::is_semisimple(a).unwrap())
        .unwrap();
    let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
    let wd = s.wedderburn(&Tolerances::default(), 0).unwrap();
    assert!(matches!(
        synchro_core::ideal::synthesize_reset_word(&s, &wd),
        Err(synchro_core::Error::NotSemisimple)
    ));
}
