//! Seeded random corpora shared by the integration tests and the acceptance gate.
#![allow(dead_code)]

use frobscope::poly::{discriminant, IntPoly};
use frobscope::LinRec;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monic with lower coefficients in `[-bound, bound]` and nonzero discriminant.
pub fn squarefree_monic(rng: &mut ChaCha8Rng, degree: usize, bound: i64) -> IntPoly {
    loop {
        let mut c: Vec<i64> = (0..degree)
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        c.push(1);
        let f = IntPoly::from_i64s(&c);
        if !discriminant(&f).unwrap().is_zero() {
            return f;
        }
    }
}

/// `count` squarefree monic polynomials with degrees drawn from `lo..=hi`.
pub fn squarefree_corpus(seed: u64, count: usize, lo: usize, hi: usize) -> Vec<IntPoly> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let d = r.random_range(lo..=hi);
            squarefree_monic(&mut r, d, 10)
        })
        .collect()
}

pub fn random_initials(rng: &mut ChaCha8Rng, d: usize, bound: i64) -> Vec<BigInt> {
    (0..d)
        .map(|_| BigInt::from(rng.random_range(-bound..=bound)))
        .collect()
}

pub fn random_rec(rng: &mut ChaCha8Rng, c: &IntPoly) -> LinRec {
    let d = c.degree().unwrap();
    LinRec::new(c.clone(), random_initials(rng, d, 100)).unwrap()
}
