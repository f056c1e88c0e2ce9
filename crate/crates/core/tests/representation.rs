use num_traits::Zero;
use synchro_core::algebra::{rep_matrix, AlgebraicStructure, PipelineConfig, Tolerances};
use synchro_core::automaton::{self, cerny, random_automaton};
use synchro_core::ideal::element_supports;
use synchro_core::linalg::RationalMatrix;
use synchro_core::Automaton;

fn samples() -> Vec<Automaton> {
    let mut out = vec![cerny(3).unwrap(), cerny(4).unwrap()];
    let mut seed = 0;
    while out.len() < 14 {
        let a = random_automaton(3 + (seed % 2) as usize, 2, seed).unwrap();
        if automaton::is_synchronizing(&a) {
            out.push(a);
        }
        seed += 1;
    }
    out
}

#[test]
fn representation_is_multiplicative_and_kills_exactly_resets() {
    for a in samples() {
        let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
        let mt = s.monoid();
        let mats: Vec<RationalMatrix> = mt.elements().iter().map(|t| rep_matrix(&a, t).unwrap()).collect();
        for x in 0..mt.len() {
            assert_eq!(mats[x].is_zero(), mt.is_reset(x));
            for y in 0..mt.len() {
                assert_eq!(mats[x].mul(&mats[y]).unwrap(), mats[mt.product(x, y)]);
            }
        }
    }
}

#[test]
fn radical_is_a_nilpotent_ideal() {
    for a in samples() {
        let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
        let alg = s.algebra();
        let rad = s.radical();
        let d = alg.degree();
        for x in rad.subspace().basis() {
            let xm = alg.matrix_of(x);
            for b in alg.matrices() {
                assert!(alg.contains(&xm.mul(b).unwrap()).unwrap());
                assert!(alg.contains(&b.mul(&xm).unwrap()).unwrap());
                let xb = alg.coordinates(&xm.mul(b).unwrap()).unwrap();
                assert!(rad.contains_coords(&xb).unwrap());
            }
            let mut p = xm.clone();
            for _ in 1..d {
                p = p.mul(&xm).unwrap();
            }
            assert!(p.is_zero());
            assert!(xm.trace().is_zero());
        }
    }
}

#[test]
fn supports_agree_with_exact_radical() {
    for a in samples() {
        let s = AlgebraicStructure::new(&a, &PipelineConfig::default()).unwrap();
        let wd = s.wedderburn(&Tolerances::default(), 3).unwrap();
        let supports = element_supports(&s, &wd);
        let mut empty = 0;
        for e in 0..s.monoid().len() {
            assert_eq!(supports[e].is_empty(), s.is_radical(e));
            empty += supports[e].is_empty() as usize;
        }
        if s.is_semisimple() {
            let resets = (0..s.monoid().len()).filter(|&e| s.monoid().is_reset(e)).count();
            assert_eq!(empty, resets);
        }
        assert!(wd.residuals.idempotent < 1e-8 && wd.residuals.completeness < 1e-8);
        let sq: usize = wd.dims.iter().map(|n| n * n).sum();
        assert_eq!(sq, s.quotient().dim());
        assert!(wd.dims.iter().sum::<usize>() < a.states());
    }
}
