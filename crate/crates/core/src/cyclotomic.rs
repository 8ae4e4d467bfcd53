//! Cyclotomic polynomials, Euler's φ, the Möbius function and the trace
//! sequences of class `Φ_M`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::factorize_u64;
use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};
use crate::recurrence::LinRec;

pub fn euler_phi(m: u64) -> u64 {
    factorize_u64(m)
        .into_iter()
        .fold(m.max(1), |acc, (p, _)| acc / p * (p - 1))
}

pub fn moebius(m: u64) -> i8 {
    let f = factorize_u64(m);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Φ_M`, by dividing `X^M - 1` by `Φ_e` for every proper divisor `e` of `M`.
pub fn cyclotomic_poly(m: u64) -> Result<IntPoly> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "cyclotomic index must be at least 1".into(),
        ));
    }
    let mut cache: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for d in divisors(m) {
        let mut f = &IntPoly::monomial(d as usize) - &IntPoly::constant(BigInt::from(1));
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            let (q, r) = f.divrem_monic(&cache[&e])?;
            debug_assert!(r.is_zero());
            f = q;
        }
        cache.insert(d, f);
    }
    Ok(cache.remove(&m).expect("m divides itself"))
}

/// `L_n` of class `Φ_M`: `φ(M)/φ(M/g) · μ(M/g)` with `g = gcd(n, M)`.
pub fn cyclo_lucas(m: u64, n: u64) -> i64 {
    let g = n.gcd(&m);
    let q = m / g;
    (euler_phi(m) / euler_phi(q)) as i64 * moebius(q) as i64
}

/// Every sequence of class `Φ_M` has period `M`; compares `U_n` with `U_{n mod M}`.
pub fn check_periodicity(m: u64, rec: &LinRec, n: u64) -> Result<bool> {
    if *rec.charpoly() != cyclotomic_poly(m)? {
        return Err(Error::WrongClass);
    }
    Ok(rec.term_exact(n)? == rec.term_exact(n % m)?)
}

/// `r -> R_r = X^r mod Φ_M` for residues `r` coprime to `M`.
pub fn residue_rule_table(m: u64) -> Result<BTreeMap<u64, IntPoly>> {
    if m < 2 {
        return Err(Error::InvalidInput("residue table needs M >= 2".into()));
    }
    let phi = cyclotomic_poly(m)?;
    // X^r is needed for r < M only, which is well inside the exact cap.
    let seq = poly::remainder_sequence_exact(&phi, m - 1, m)?;
    Ok((0..m)
        .filter(|r| r.gcd(&m) == 1)
        .map(|r| (r, seq[r as usize].clone()))
        .collect())
}
