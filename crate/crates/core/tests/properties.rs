use std::sync::Arc;

use proptest::prelude::*;

use crossed_shift::crossed::{equals, expectation_f, main_redundancy, normal_form, CrossedElement};
use crossed_shift::cylfun::{CylFun, QuasiBasis};
use crossed_shift::measure::{InvariantMeasure, TransferWeights};
use crossed_shift::random::Sampler;
use crossed_shift::scalar::{RadScalar, Rational};
use crossed_shift::sft::{admissible_words, TransitionMatrix};

fn system(k: u8) -> Arc<TransitionMatrix> {
    Arc::new(match k % 4 {
        0 => TransitionMatrix::full(2),
        1 => TransitionMatrix::golden_mean(),
        2 => TransitionMatrix::cyclic_permutation(3),
        _ => TransitionMatrix::new(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).unwrap(),
    })
}

fn scalar() -> impl Strategy<Value = RadScalar> {
    (-6i64..=6, 1i64..=4, prop::sample::select(vec![1u64, 2, 3, 6]), any::<bool>()).prop_map(|(n, d, r, im)| {
        let mut x = RadScalar::ratio(n, d) * RadScalar::sqrt_int(r);
        if im {
            x = x * RadScalar::i();
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!((x.clone() + y.clone()).conj(), x.conj() + y.conj());
        let s = x.to_string();
        prop_assert_eq!(s.parse::<RadScalar>().unwrap(), x);
    }

    #[test]
    fn scalar_norm_is_nonnegative(x in scalar(), y in scalar()) {
        let z = x + y;
        prop_assert!((z.clone() * z.conj()).is_nonneg_real());
    }

    #[test]
    fn transfer_axiom_and_alpha(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let mut s = Sampler::new(&a, seed);
        let (f, g) = (s.cylfun(3), s.cylfun(3));
        prop_assert_eq!(f.mul(&g.alpha()).transfer(None), f.transfer(None).mul(&g));
        prop_assert_eq!(f.mul(&g).alpha(), f.alpha().mul(&g.alpha()));
        prop_assert_eq!(f.alpha().transfer(None), f.clone());
        prop_assert_eq!(f.refine(4), f);
    }

    #[test]
    fn transfer_is_positive(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let f = Sampler::new(&a, seed).cylfun(3);
        let p = f.conj().mul(&f).transfer(None);
        for (_, v) in p.entries() {
            prop_assert!(v.is_nonneg_real());
        }
    }

    #[test]
    fn invariant_measure_is_invariant(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let mu = InvariantMeasure::solve(&TransferWeights::uniform(&a));
        let total: Rational = mu.masses().iter().sum();
        prop_assert_eq!(total, Rational::from_integer(1.into()));
        let f = Sampler::new(&a, seed).cylfun(3);
        prop_assert_eq!(mu.phi(&f.transfer(None)), mu.phi(&f));
        prop_assert_eq!(mu.phi(&f.alpha()), mu.phi(&f));
    }

    #[test]
    fn quasi_basis_reconstructs(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let qb = QuasiBasis::new(&a);
        let f = Sampler::new(&a, seed).cylfun(3);
        prop_assert!(qb.check(&f));
        for w in admissible_words(&a, 2) {
            let expect = RadScalar::from_int(a.col_sum(w.0[1]) as i64);
            prop_assert_eq!(qb.lambda().value(&w), expect);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normal_form_ignores_presentation(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let mut s = Sampler::new(&a, seed);
        let x = s.element(3, 2, 2);
        prop_assert!(equals(&x, &x.raise_level()));
        prop_assert!(normal_form(&x.sub(&x.raise_level())).is_empty());
        prop_assert!(equals(&x.mul(&main_redundancy(&a)), &x));
        prop_assert!(equals(&x.adjoint().adjoint(), &x));
    }

    #[test]
    fn equals_is_an_equivalence(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let mut s = Sampler::new(&a, seed);
        let (x, y) = (s.element(2, 2, 2), s.element(2, 2, 2));
        prop_assert_eq!(equals(&x, &y), equals(&y, &x));
        prop_assert!(equals(&x.add(&y).sub(&y), &x));
        let f = CrossedElement::from_fun(&s.cylfun(2));
        prop_assert!(equals(&f.mul(&x.add(&y)), &f.mul(&x).add(&f.mul(&y))));
    }

    #[test]
    fn gauge_expectation_is_a_projection(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let mut s = Sampler::new(&a, seed);
        let x = s.element(3, 2, 2);
        let fx = expectation_f(&x);
        prop_assert!(equals(&expectation_f(&fx), &fx));
        let d = CrossedElement::from_fun(&s.cylfun(2));
        prop_assert!(equals(&expectation_f(&d.mul(&x)), &d.mul(&fx)));
    }

    #[test]
    fn isometry_relations(k in 0u8..4, seed in any::<u64>()) {
        let a = system(k);
        let f: CylFun = Sampler::new(&a, seed).cylfun(3);
        let s = CrossedElement::s(&a);
        let fe = CrossedElement::from_fun(&f);
        prop_assert!(equals(&s.adjoint().mul(&fe).mul(&s), &CrossedElement::from_fun(&f.transfer(None))));
        prop_assert!(equals(&s.mul(&fe), &CrossedElement::from_fun(&f.alpha()).mul(&s)));
        prop_assert!(equals(&s.adjoint().mul(&s), &CrossedElement::one(&a)));
    }
}
