//! Seeded generators for the verification suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crossed::{CrossedElement, Monomial};
use crate::cylfun::CylFun;
use crate::scalar::RadScalar;
use crate::sft::{admissible_words, TransitionMatrix, Word};

pub struct Sampler {
    rng: ChaCha8Rng,
    matrix: Arc<TransitionMatrix>,
}

impl Sampler {
    pub fn new(a: &Arc<TransitionMatrix>, seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), matrix: a.clone() }
    }

    pub fn matrix(&self) -> &Arc<TransitionMatrix> {
        &self.matrix
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    /// Small integers, halves, and occasional `√2`, `√3`, `i` factors.
    pub fn scalar(&mut self) -> RadScalar {
        let base = RadScalar::from_int(self.rng.gen_range(-3..=3));
        match self.rng.gen_range(0..10) {
            0 => base * RadScalar::ratio(1, 2),
            1 => base * RadScalar::sqrt_int(2),
            2 => base * RadScalar::i(),
            3 => base + RadScalar::sqrt_int(3),
            _ => base,
        }
    }

    /// Small rationals, halves, and `√2` multiples.
    pub fn real_scalar(&mut self) -> RadScalar {
        let base = RadScalar::from_int(self.rng.gen_range(-3..=3));
        match self.rng.gen_range(0..8) {
            0 => base * RadScalar::ratio(1, 2),
            1 => base * RadScalar::sqrt_int(2),
            _ => base,
        }
    }

    pub fn cylfun_at(&mut self, depth: usize) -> CylFun {
        let words = admissible_words(&self.matrix, depth);
        let values: Vec<(Word, RadScalar)> =
            words.into_iter().filter_map(|w| (self.rng.gen_range(0..4) != 0).then(|| (w, self.scalar()))).collect();
        CylFun::from_values(&self.matrix, depth, values).expect("admissible words")
    }

    /// Random depth in `0..=max_depth`.
    pub fn cylfun(&mut self, max_depth: usize) -> CylFun {
        let d = self.range(0, max_depth);
        self.cylfun_at(d)
    }

    pub fn real_cylfun(&mut self, max_depth: usize) -> CylFun {
        let d = self.range(0, max_depth);
        let words = admissible_words(&self.matrix, d);
        let values: Vec<(Word, RadScalar)> = words.into_iter().map(|w| (w, self.real_scalar())).collect();
        CylFun::from_values(&self.matrix, d, values).expect("admissible words")
    }

    /// Indicator of a random admissible word of length `1..=max_depth`.
    pub fn cylinder(&mut self, max_depth: usize) -> CylFun {
        let d = self.range(1, max_depth.max(1));
        let words = admissible_words(&self.matrix, d);
        let w = words.choose(&mut self.rng).expect("nonempty").clone();
        CylFun::indicator(&self.matrix, &w).expect("admissible")
    }

    pub fn monomial(&mut self, max_depth: usize, max_power: usize) -> Monomial {
        let a = self.cylfun(max_depth);
        let b = self.cylfun(max_depth);
        let n = self.range(0, max_power);
        let m = self.range(0, max_power);
        Monomial::new(a, n, m, b)
    }

    pub fn element(&mut self, max_terms: usize, max_depth: usize, max_power: usize) -> CrossedElement {
        let k = self.range(1, max_terms.max(1));
        let terms = (0..k).map(|_| self.monomial(max_depth, max_power)).collect();
        CrossedElement::from_terms(&self.matrix, terms)
    }

    /// Element of degree 0 with powers at most `max_power`.
    pub fn degree_zero(&mut self, max_terms: usize, max_depth: usize, max_power: usize) -> CrossedElement {
        let k = self.range(1, max_terms.max(1));
        let terms = (0..k)
            .map(|_| {
                let n = self.range(0, max_power);
                Monomial::new(self.cylfun(max_depth), n, n, self.cylfun(max_depth))
            })
            .collect();
        CrossedElement::from_terms(&self.matrix, terms)
    }
}
