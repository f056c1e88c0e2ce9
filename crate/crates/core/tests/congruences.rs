use proptest::prelude::*;
use synchro_core::automaton::{self, random_automaton};
use synchro_core::congruence::{
    inductive_synchronize, is_congruence, largest_congruence_below, principal_congruence, quotient,
    Partition,
};
use synchro_core::{AlgebraicStructure, Automaton, PipelineConfig, Word};

/// All set partitions of `[0, n)` as restricted growth strings.
fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition::from_labels(prefix));
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            rec(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

fn small_automaton() -> impl Strategy<Value = Automaton> {
    (2usize..=5, 1usize..=2, any::<u64>()).prop_map(|(n, m, seed)| random_automaton(n, m, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn principal_is_least_containing_pair(a in small_automaton(), x in 0usize..5, y in 0usize..5) {
        let n = a.states();
        let (q1, q2) = (x % n, y % n);
        let p = principal_congruence(&a, q1, q2).unwrap();
        prop_assert!(is_congruence(&a, &p).unwrap());
        prop_assert_eq!(p.block_of(q1), p.block_of(q2));
        for c in all_partitions(n) {
            if c.block_of(q1) == c.block_of(q2) && is_congruence(&a, &c).unwrap() {
                prop_assert!(p.refines(&c));
            }
        }
    }

    #[test]
    fn largest_below_matches_brute_force(a in small_automaton(), pick in any::<prop::sample::Index>()) {
        let parts = all_partitions(a.states());
        let p = pick.get(&parts);
        let sigma = largest_congruence_below(&a, p).unwrap();
        prop_assert!(sigma.refines(p));
        prop_assert!(is_congruence(&a, &sigma).unwrap());
        for c in &parts {
            if c.refines(p) && is_congruence(&a, c).unwrap() {
                prop_assert!(c.refines(&sigma));
            }
        }
    }

    #[test]
    fn quotient_projection_is_a_surjective_morphism(a in small_automaton(), x in 0usize..5, y in 0usize..5) {
        let n = a.states();
        let c = principal_congruence(&a, x % n, y % n).unwrap();
        let (b, proj) = quotient(&a, &c).unwrap();
        prop_assert_eq!(b.states(), c.blocks());
        let mut hit = vec![false; b.states()];
        for q in 0..n {
            hit[proj[q]] = true;
            for l in 0..a.letters() {
                prop_assert_eq!(proj[a.step(q, l)], b.step(proj[q], l));
            }
        }
        prop_assert!(hit.into_iter().all(|h| h));
    }
}

#[test]
fn radical_kernels_and_inductive_words_on_census() {
    let config = PipelineConfig::default();
    let mut checked = 0;
    for n in 2..=4 {
        for a in synchro_core::census::census(n, 2, synchro_core::census::CensusMode::IsoReduced).unwrap() {
            if !automaton::is_synchronizing(&a) {
                assert!(inductive_synchronize(&a).is_err());
                continue;
            }
            let w = inductive_synchronize(&a).unwrap();
            assert_eq!(automaton::rank(&a, &w).unwrap(), 1);
            let s = AlgebraicStructure::new(&a, &config).unwrap();
            let mt = s.monoid();
            for e in (0..mt.len()).filter(|&e| s.is_radical(e) && !mt.is_reset(e)) {
                let sigma = largest_congruence_below(&a, &Partition::kernel(mt.element(e))).unwrap();
                assert!(!sigma.is_identity(), "{}", a.to_aut());
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
    assert_eq!(inductive_synchronize(&Automaton::from_rows(&[vec![0]]).unwrap()).unwrap(), Word::empty());
}
