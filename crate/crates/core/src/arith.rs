//! Word-sized modular arithmetic, primality, Legendre symbols and prime ranges.
//!
//! Every modulus must lie in `[2, 2^62)`, so a product of two reduced
//! residues fits comfortably in a `u128`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 62;

pub fn check_modulus(m: u64) -> Result<u64> {
    if (2..MAX_MODULUS).contains(&m) {
        Ok(m)
    } else {
        Err(Error::ModulusOutOfRange(m))
    }
}

/// A rational prime, verified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Self> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n))
        }
    }

    /// Skips the primality test. Callers must already know `n` is prime.
    pub(crate) fn new_unchecked(n: u64) -> Self {
        debug_assert!(is_prime(n));
        Prime(n)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(n: u64) -> Result<Self> {
        Prime::new(n)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of `Z/mZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Residue {
            value: value % modulus,
            modulus,
        })
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Residue {
            value: reduce_bigint(value, modulus),
            modulus,
        })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for word-sized exponents. Works for any `m >= 1` below 2^64.
pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// `base^exponent` in `Z/mZ`, exponent of arbitrary size.
pub fn mod_pow(base: Residue, exponent: &BigUint) -> Residue {
    let m = base.modulus;
    let mut acc = 1 % m;
    let bits = exponent.bits();
    for i in (0..bits).rev() {
        acc = mul_mod(acc, acc, m);
        if exponent.bit(i) {
            acc = mul_mod(acc, base.value, m);
        }
    }
    Residue {
        value: acc,
        modulus: m,
    }
}

/// Inverse in `Z/mZ` by the extended Euclidean algorithm.
pub fn mod_inv(a: Residue) -> Result<Residue> {
    let m = a.modulus;
    let (mut r0, mut r1) = (m as i128, a.value as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible {
            value: a.value,
            modulus: m,
        });
    }
    let v = t0.rem_euclid(m as i128) as u64;
    Ok(Residue {
        value: v,
        modulus: m,
    })
}

/// Inverse of a raw residue modulo `m`.
pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    mod_inv(Residue {
        value: a % m,
        modulus: m,
    })
    .map(Residue::value)
}

/// Nonnegative remainder of a big integer.
pub fn reduce_bigint(value: &BigInt, m: u64) -> u64 {
    let r = (value.magnitude() % m).to_u64().unwrap_or(0);
    if value.sign() == Sign::Minus {
        neg_mod(r, m)
    } else {
        r
    }
}

pub fn reduce_i64(value: i64, m: u64) -> u64 {
    (value as i128).rem_euclid(m as i128) as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: Prime) -> Result<i8> {
    let p = p.get();
    if p == 2 {
        return Err(Error::EvenPrime(p));
    }
    let a = Residue::new(reduce_bigint(a, p), p)?;
    if a.value == 0 {
        return Ok(0);
    }
    let r = mod_pow(a, &BigUint::from((p - 1) / 2));
    match r.value {
        1 => Ok(1),
        v if v == p - 1 => Ok(-1),
        v => Err(Error::InternalInconsistency(format!(
            "Euler criterion returned {v} modulo prime {p}"
        ))),
    }
}

pub fn legendre_i64(a: i64, p: Prime) -> Result<i8> {
    legendre(&BigInt::from(a), p)
}

/// Kronecker symbol `(a/2)`: 0 for even `a`, +1 when `a ≡ ±1 (mod 8)`, -1 otherwise.
pub fn kronecker_two(a: &BigInt) -> i8 {
    match reduce_bigint(a, 8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact on all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes up to and including `limit`, by the sieve of Eratosthenes.
fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes in `[lo, hi)`, ascending. Uses a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<Prime> {
    if hi <= lo || hi <= 2 {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = hi.isqrt() + 1;
    let base = small_primes(root);
    const SEGMENT: u64 = 1 << 18;
    let mut out = Vec::new();
    let mut start = lo;
    while start < hi {
        let end = hi.min(start.saturating_add(SEGMENT));
        let mut composite = vec![false; (end - start) as usize];
        for &q in &base {
            if q * q >= end {
                break;
            }
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut j = first;
            while j < end {
                composite[(j - start) as usize] = true;
                j += q;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| Prime::new_unchecked(start + i as u64)),
        );
        start = end;
    }
    out
}

/// Prime factorization by trial division, ascending primes with exponents.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    if n.is_zero() {
        return true;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(is_prime(1879));
        assert!(!is_prime(271441));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        // Largest 64-bit prime and a strong pseudoprime to several bases.
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn primality_matches_trial_division_below_one_million() {
        for n in 0..1_000_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn mod_pow_examples() {
        let r = |v, m| Residue::new(v, m).unwrap();
        assert_eq!(mod_pow(r(2, 7), &BigUint::from(0u32)).value(), 1);
        assert_eq!(mod_pow(r(2, 1000), &BigUint::from(10u32)).value(), 24);
        assert_eq!(mod_pow(r(3, 5), &BigUint::from(4u32)).value(), 1);
        // Exponent wider than 64 bits: 2^(2^70) mod 7, with 2^70 ≡ 1 (mod 3).
        let e = BigUint::from(1u8) << 70usize;
        assert_eq!(mod_pow(r(2, 7), &e).value(), 2);
    }

    #[test]
    fn modulus_range_is_enforced() {
        assert_eq!(Residue::new(1, 1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(
            Residue::new(1, MAX_MODULUS),
            Err(Error::ModulusOutOfRange(MAX_MODULUS))
        );
        assert!(Residue::new(1, MAX_MODULUS - 1).is_ok());
    }

    #[test]
    fn legendre_examples() {
        let p = |n| Prime::new(n).unwrap();
        assert_eq!(legendre_i64(5, p(5)), Ok(0));
        assert_eq!(legendre_i64(5, p(11)), Ok(1));
        assert_eq!(legendre_i64(-23, p(59)), Ok(1));
        assert_eq!(legendre_i64(3, p(2)), Err(Error::EvenPrime(2)));
    }

    #[test]
    fn mod_inv_examples() {
        let r = |v, m| Residue::new(v, m).unwrap();
        assert_eq!(mod_inv(r(1, 9)).unwrap().value(), 1);
        assert_eq!(mod_inv(r(3, 7)).unwrap().value(), 5);
        assert_eq!(
            mod_inv(r(2, 4)),
            Err(Error::NotInvertible {
                value: 2,
                modulus: 4
            })
        );
    }

    #[test]
    fn prime_ranges() {
        let v = |lo, hi| -> Vec<u64> {
            primes_in_range(lo, hi)
                .into_iter()
                .map(Prime::get)
                .collect()
        };
        assert_eq!(v(0, 10), vec![2, 3, 5, 7]);
        assert_eq!(v(1870, 1880), vec![1871, 1873, 1877, 1879]);
        assert_eq!(v(8, 8), Vec::<u64>::new());
        let oracle: Vec<u64> = (1870..1880).filter(|&n| trial_division(n)).collect();
        assert_eq!(v(1870, 1880), oracle);
        // Crosses several sieve segments.
        let big = v(999_000, 1_300_000);
        let oracle: Vec<u64> = (999_000..1_300_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(big, oracle);
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize_u64(1), vec![]);
        assert_eq!(factorize_u64(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize_u64(271441), vec![(521, 2)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn odd_prime() -> impl Strategy<Value = Prime> {
            (3u64..5000).prop_filter_map("prime", |n| Prime::new(n).ok())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]

            #[test]
            fn legendre_matches_square_enumeration(a in -1_000_000i64..1_000_000, p in odd_prime()) {
                let r = reduce_i64(a, p.get());
                let expected = if r == 0 {
                    0
                } else if (1..p.get()).any(|x| x * x % p.get() == r) {
                    1
                } else {
                    -1
                };
                prop_assert_eq!(legendre_i64(a, p).unwrap(), expected);
            }
        }

        proptest! {
            #[test]
            fn mod_pow_adds_exponents(a in 0u64..1 << 40, e1 in 0u64..1 << 20, e2 in 0u64..1 << 20, m in 2u64..MAX_MODULUS) {
                let base = Residue::new(a, m).unwrap();
                let lhs = mod_pow(base, &BigUint::from(e1 + e2)).value();
                let rhs = mul_mod(
                    mod_pow(base, &BigUint::from(e1)).value(),
                    mod_pow(base, &BigUint::from(e2)).value(),
                    m,
                );
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn legendre_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, p in odd_prime()) {
                let ab = legendre_i64(a * b, p).unwrap();
                prop_assert_eq!(ab, legendre_i64(a, p).unwrap() * legendre_i64(b, p).unwrap());
            }

            #[test]
            fn inverse_multiplies_to_one(a in 1u64..1 << 40, m in 2u64..1 << 40) {
                let r = Residue::new(a, m).unwrap();
                match mod_inv(r) {
                    Ok(inv) => prop_assert_eq!(mul_mod(r.value(), inv.value(), m), 1 % m),
                    Err(_) => prop_assert!(num_integer::gcd(r.value(), m) != 1),
                }
            }
        }
    }
}
