#![allow(dead_code)]

use hitcalc::{Monomial, Polynomial};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn m(e: &[u32]) -> Monomial {
    Monomial::new(e).unwrap()
}

pub fn p(text: &str) -> Polynomial {
    text.parse().unwrap()
}

/// A uniformly placed monomial of exact degree `d`.
pub fn monomial_of_degree(rng: &mut impl Rng, s: usize, d: u32) -> Monomial {
    let mut exps = vec![0u32; s];
    for _ in 0..d {
        exps[rng.gen_range(0..s)] += 1;
    }
    Monomial::new(&exps).unwrap()
}

pub fn monomial(rng: &mut impl Rng, s: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    monomial_of_degree(rng, s, d)
}

/// A homogeneous polynomial with up to `terms` terms.
pub fn polynomial(rng: &mut impl Rng, s: usize, d: u32, terms: usize) -> Polynomial {
    let n = rng.gen_range(1..=terms);
    Polynomial::from_terms(s, (0..n).map(|_| monomial_of_degree(rng, s, d)))
}
