mod common;

use frobscope::arith::{self, primes_in_range};
use frobscope::classify::{
    self, padovan_classify, padovan_via_forms, s3_class_partial_via_symbol, CycleType,
    DepressedCubic, P2Symbol, PolyClassifier, S3Class,
};
use frobscope::factor::{factor_full, RngSeed};
use frobscope::poly::{self, IntPoly};
use frobscope::{Error, LinRec};
use num_bigint::{BigInt, BigUint};
use rand::Rng;

#[test]
fn cycle_type_matches_full_factorization() {
    for (i, c) in common::squarefree_corpus(101, 50, 2, 7)
        .into_iter()
        .enumerate()
    {
        let cls = PolyClassifier::new(c.clone()).unwrap();
        for p in primes_in_range(2, 2001) {
            if cls.is_ramified(p) {
                assert_eq!(cls.cycle_type(p), Err(Error::RamifiedPrime(p.get())));
                continue;
            }
            let ct = cls.cycle_type(p).unwrap();
            let f = factor_full(&c.reduce(p.get()).unwrap(), RngSeed(i as u64)).unwrap();
            assert_eq!(ct.degrees(), f.degrees().as_slice(), "C = {c}, p = {p}");
            let split = cls.is_totally_split(p).unwrap();
            assert_eq!(split, ct.is_identity(), "C = {c}, p = {p}");
            assert_eq!(split, f.is_totally_split(), "C = {c}, p = {p}");
        }
    }
}

#[test]
fn padovan_three_ways_below_ten_thousand() {
    let padovan = IntPoly::from_i64s(&[-1, -1, 0, 1]);
    let cls = PolyClassifier::new(padovan).unwrap();
    for p in primes_in_range(2, 10_001) {
        if p.get() == 23 {
            assert_eq!(padovan_classify(p), Err(Error::RamifiedPrime(23)));
            continue;
        }
        let hard = padovan_classify(p).unwrap();
        assert_eq!(hard, padovan_via_forms(p).unwrap(), "p = {p}");
        let from_type = S3Class::from_cycle_type(&cls.cycle_type(p).unwrap()).unwrap();
        assert_eq!(hard, from_type, "p = {p}");
        if p.get() > 2 {
            let sym = s3_class_partial_via_symbol(-1, -1, p).unwrap();
            assert_eq!(sym == P2Symbol::IsP2, hard == S3Class::P2, "p = {p}");
        }
    }
}

#[test]
fn exactly_one_system_for_many_cubics() {
    let mut tested = 0;
    for u in -12i64..=12 {
        for v in -12i64..=12 {
            let Ok(cubic) = DepressedCubic::new(u, v) else {
                continue;
            };
            let cls = PolyClassifier::new(cubic.poly().clone()).unwrap();
            for p in primes_in_range(2, 400) {
                if cls.is_ramified(p) {
                    continue;
                }
                // classify() errors out unless exactly one system holds.
                let report = cubic.classify(p).unwrap();
                let expected = S3Class::from_cycle_type(&cls.cycle_type(p).unwrap()).unwrap();
                assert_eq!(report.class, expected, "u={u} v={v} p={p}");
                tested += 1;
            }
        }
    }
    assert!(tested > 10_000);
}

#[test]
fn cubic_terms_follow_remainder_coefficients() {
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let (u, v) = loop {
            let u = rng.random_range(-20i64..=20);
            let v = rng.random_range(-20i64..=20);
            if DepressedCubic::new(u, v).is_ok() {
                break (u, v);
            }
        };
        let cubic = DepressedCubic::new(u, v).unwrap();
        let rec = common::random_rec(&mut rng, cubic.poly());
        for p in primes_in_range(2, 501) {
            let m = p.get();
            if arith::reduce_bigint(cubic.discriminant(), m) == 0 {
                continue;
            }
            let r = cubic.classify(p).unwrap();
            let init = rec.initials_mod(m);
            let lhs = rec.term_mod_u64(m, m).unwrap();
            let rhs = (arith::mul_mod(r.a, init[2], m) as u128
                + arith::mul_mod(r.b, init[1], m) as u128
                + arith::mul_mod(r.c, init[0], m) as u128)
                % m as u128;
            assert_eq!(lhs as u128, rhs, "u={u} v={v} p={p}");
            assert_eq!(
                (3 * r.c as u128) % m as u128,
                (2 * arith::reduce_i64(u, m) as u128 * r.a as u128) % m as u128
            );
        }
    }
}

#[test]
fn quadratic_forms_predict_random_sequences() {
    let mut rng = common::rng(8);
    for _ in 0..30 {
        let s = rng.random_range(-30i64..=30);
        let pi = rng.random_range(-30i64..=30);
        if s * s == 4 * pi {
            continue;
        }
        let c = IntPoly::from_i64s(&[pi, -s, 1]);
        let rec = common::random_rec(&mut rng, &c);
        let delta = s * s - 4 * pi;
        for p in primes_in_range(2, 2001) {
            let m = p.get();
            if delta.rem_euclid(m as i64) == 0 {
                continue;
            }
            let v = classify::quad_classify(&BigInt::from(s), &BigInt::from(pi), p).unwrap();
            let form = v.predicted_form.unwrap().reduce(m).unwrap();
            let init = rec.initials_mod(m);
            assert_eq!(
                rec.term_mod_u64(m, m).unwrap(),
                poly::lucas_apply_mod(&form, |k| init[k]),
                "s={s} π={pi} p={p}"
            );
        }
    }
}

#[test]
fn fibonacci_residues_at_primes_separate_initial_pairs() {
    let mut rng = common::rng(9);
    let primes = primes_in_range(2, 101);
    for _ in 0..100 {
        let (a, b) = loop {
            let a = (
                rng.random_range(-100i64..=100),
                rng.random_range(-100i64..=100),
            );
            let b = (
                rng.random_range(-100i64..=100),
                rng.random_range(-100i64..=100),
            );
            if a != b {
                break (a, b);
            }
        };
        let (ra, rb) = (
            LinRec::fibonacci_class(a.0, a.1),
            LinRec::fibonacci_class(b.0, b.1),
        );
        let found = primes.iter().any(|p| {
            let m = p.get();
            ra.term_mod_u64(m, m).unwrap() != rb.term_mod_u64(m, m).unwrap()
        });
        assert!(found, "{a:?} and {b:?} agree at every prime below 100");
    }
}

#[test]
fn frobenius_order_from_cycle_type() {
    // U_{p^f} ≡ U_1 (mod p) where f is the lcm of the cycle lengths.
    for c in common::squarefree_corpus(11, 20, 2, 5) {
        let mut rng = common::rng(12);
        let rec = common::random_rec(&mut rng, &c);
        let cls = PolyClassifier::new(c.clone()).unwrap();
        for p in primes_in_range(2, 300) {
            if cls.is_ramified(p) {
                continue;
            }
            let f = cls.cycle_type(p).unwrap().order();
            assert!(
                frobscope::recurrence::check_order_f(&rec, p, f).unwrap(),
                "C={c} p={p} f={f}"
            );
        }
    }
}

#[test]
fn trinks_index_with_large_exponent() {
    // At a prime with a 7-cycle the index p^7 is far beyond a machine word.
    let c = IntPoly::from_i64s(&[3, -7, 0, 0, 0, 0, 0, 1]);
    let cls = PolyClassifier::new(c.clone()).unwrap();
    let seven: CycleType = "7".parse().unwrap();
    let p = primes_in_range(1000, 5000)
        .into_iter()
        .find(|&p| !cls.is_ramified(p) && cls.cycle_type(p).unwrap() == seven)
        .unwrap();
    let n: BigUint = num_traits::Pow::pow(BigUint::from(p.get()), 7u32);
    assert!(n.bits() > 64);
    let rec = LinRec::lucas(c).unwrap();
    assert!(frobscope::recurrence::check_order_f(&rec, p, 7).unwrap());
}
