//! Ramanujan's `τ` from the `q`-expansion of `q Π (1 - q^n)^24`, the
//! discriminants `τ(l)^2 - 4 l^11`, and congruences for `τ(l^n)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Prime, Residue};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::recurrence::LinRec;

pub const MAX_TAU_TABLE: u64 = 100_000;
pub const MAX_L11_EXPONENT: u32 = 64;
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// `τ(1), ..., τ(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauTable {
    #[serde(with = "crate::serde_dec::bigint_vec")]
    values: Vec<BigInt>,
}

impl TauTable {
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `τ(n)` for `1 <= n <= N`.
    pub fn get(&self, n: u64) -> Option<&BigInt> {
        n.checked_sub(1).and_then(|i| self.values.get(i as usize))
    }

    fn require(&self, n: u64) -> Result<&BigInt> {
        self.get(n).ok_or(Error::CapExceeded {
            what: "tau table index",
            requested: n,
            cap: self.len(),
        })
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// `Σ_k (-1)^k (2k+1) q^{k(k+1)/2}`, which is `Π (1 - q^n)^3`, as sparse terms below `len`.
fn jacobi_terms(len: usize) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            return out;
        }
        let c = (2 * k + 1) as i128;
        out.push((e, if k.is_multiple_of(2) { c } else { -c }));
        k += 1;
    }
}

/// `τ(1..=n)`. The eighth power of the Jacobi series is built by repeated
/// multiplication with the sparse series itself, so each step costs
/// `O(N sqrt N)` instead of a dense convolution.
pub fn tau_table(n: u64) -> Result<TauTable> {
    if n > MAX_TAU_TABLE {
        return Err(Error::CapExceeded {
            what: "tau table size",
            requested: n,
            cap: MAX_TAU_TABLE,
        });
    }
    let len = n as usize;
    let jac = jacobi_terms(len);
    let mut series = vec![0i128; len];
    for &(e, c) in &jac {
        series[e] = c;
    }
    let overflow = || Error::InternalInconsistency("tau series coefficient overflow".into());
    for _ in 1..8 {
        let mut next = vec![0i128; len];
        for (i, &a) in series.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &jac {
                if i + e >= len {
                    break;
                }
                let t = a.checked_mul(c).ok_or_else(overflow)?;
                next[i + e] = next[i + e].checked_add(t).ok_or_else(overflow)?;
            }
        }
        series = next;
    }
    // τ(n) is the coefficient of q^{n-1}.
    Ok(TauTable {
        values: series.into_iter().map(BigInt::from).collect(),
    })
}

/// `Δ(l) = τ(l)^2 - 4 l^11`, negative by Deligne's bound.
pub fn delta_l(table: &TauTable, l: Prime) -> Result<BigInt> {
    let t = table.require(l.get())?;
    let d = t * t - BigInt::from(4) * Pow::pow(BigInt::from(l.get()), 11u32);
    if !d.is_negative() {
        return Err(Error::InternalInconsistency(format!(
            "Δ({l}) = {d} is not negative"
        )));
    }
    Ok(d)
}

/// The recurrence `τ(l^{n+2}) = τ(l) τ(l^{n+1}) - l^11 τ(l^n)` with `τ(1) = 1`.
pub fn prime_power_recurrence(table: &TauTable, l: Prime) -> Result<LinRec> {
    let t = table.require(l.get())?.clone();
    let l11 = Pow::pow(BigInt::from(l.get()), 11u32);
    LinRec::new(
        IntPoly::new(vec![l11, -t.clone(), BigInt::one()]),
        vec![BigInt::one(), t],
    )
}

/// `τ(l^n) mod m`.
pub fn tau_prime_power_mod(table: &TauTable, l: Prime, n: &BigUint, m: u64) -> Result<Residue> {
    prime_power_recurrence(table, l)?.term_mod(n, m)
}

/// Whether `τ(l^p)` is `≡ τ(l)` or `≡ 0 (mod p)` as the symbol `(Δ(l)/p)` predicts.
pub fn check_tau_prime_power(table: &TauTable, l: Prime, p: Prime) -> Result<bool> {
    let m = p.get();
    if m == 2 {
        return Err(Error::EvenPrime(2));
    }
    let delta = delta_l(table, l)?;
    let symbol = arith::legendre(&delta, p)?;
    if symbol == 0 {
        return Err(Error::RamifiedPrime(m));
    }
    let lhs = tau_prime_power_mod(table, l, &BigUint::from(m), m)?.value();
    let rhs = if symbol == 1 {
        arith::reduce_bigint(table.require(l.get())?, m)
    } else {
        0
    };
    Ok(lhs == rhs)
}

/// `τ(l^n) ≡ τ(l)^n (mod l^11)`. The modulus can exceed a machine word, so
/// both sides are reduced as big integers.
pub fn check_mod_l11(table: &TauTable, l: Prime, n: u32) -> Result<bool> {
    if n > MAX_L11_EXPONENT {
        return Err(Error::CapExceeded {
            what: "exponent for the l^11 congruence",
            requested: n as u64,
            cap: MAX_L11_EXPONENT as u64,
        });
    }
    let m: BigInt = Pow::pow(BigInt::from(l.get()), 11u32);
    let t = table.require(l.get())?.mod_floor(&m);
    // l^11 ≡ 0, so the recurrence collapses; step it anyway rather than assume it.
    let l11 = m.clone();
    let (mut prev, mut cur) = (BigInt::one(), t.clone());
    if n == 0 {
        cur = prev.clone();
    } else {
        for _ in 1..n {
            let next = (&t * &cur - &l11 * &prev).mod_floor(&m);
            prev = cur;
            cur = next;
        }
    }
    let rhs = t.modpow(&BigInt::from(n), &m);
    Ok(cur.mod_floor(&m) == rhs)
}

/// How much is known about the last cofactor of a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CofactorKind {
    Prime,
    ProbablePrime,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_dec::biguint")]
    pub prime: BigUint,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cofactor {
    #[serde(with = "crate::serde_dec::biguint")]
    pub value: BigUint,
    pub kind: CofactorKind,
}

/// `|n| = Π p^e · cofactor` with every `p` below the trial-division limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntFactorization {
    pub negative: bool,
    pub factors: Vec<PrimePower>,
    pub cofactor: Option<Cofactor>,
}

impl IntFactorization {
    /// Product of the primes that occur exactly once. A cofactor that is not
    /// known to be prime is left out.
    pub fn simple_part(&self) -> BigUint {
        let mut out: BigUint = self
            .factors
            .iter()
            .filter(|f| f.exponent == 1)
            .map(|f| f.prime.clone())
            .product();
        if let Some(c) = self.prime_cofactor() {
            out *= c;
        }
        out
    }

    /// Largest prime occurring exactly once, if any.
    pub fn largest_simple_prime(&self) -> Option<BigUint> {
        self.prime_cofactor().cloned().or_else(|| {
            self.factors
                .iter()
                .filter(|f| f.exponent == 1)
                .map(|f| f.prime.clone())
                .max()
        })
    }

    fn prime_cofactor(&self) -> Option<&BigUint> {
        self.cofactor
            .as_ref()
            .filter(|c| c.kind != CofactorKind::Composite)
            .map(|c| &c.value)
    }
}

impl fmt::Display for IntFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|f| match f.exponent {
                1 => f.prime.to_string(),
                e => format!("{}^{e}", f.prime),
            })
            .collect();
        if let Some(Cofactor { value: c, kind }) = &self.cofactor {
            parts.push(match kind {
                CofactorKind::Prime => c.to_string(),
                CofactorKind::ProbablePrime => format!("{c}(prp)"),
                CofactorKind::Composite => format!("{c}(composite)"),
            });
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&parts.join(" * "))
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return arith::is_prime(small);
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division up to `10^6`, then a primality label for what remains.
pub fn factor_integer(n: &BigInt) -> IntFactorization {
    let negative = n.is_negative();
    let mut rest = n.magnitude().clone();
    let mut factors = Vec::new();
    if rest.is_zero() {
        return IntFactorization {
            negative,
            factors,
            cofactor: Some(Cofactor {
                value: rest,
                kind: CofactorKind::Composite,
            }),
        };
    }
    for p in arith::primes_in_range(2, TRIAL_DIVISION_LIMIT + 1) {
        let pb = BigUint::from(p.get());
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            factors.push(PrimePower {
                prime: pb,
                exponent: e,
            });
        }
    }
    let cofactor = if rest.is_one() {
        None
    } else {
        let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
        let kind = if &limit * &limit >= rest || rest.to_u64().is_some_and(arith::is_prime) {
            CofactorKind::Prime
        } else if is_probable_prime(&rest) {
            CofactorKind::ProbablePrime
        } else {
            CofactorKind::Composite
        };
        Some(Cofactor { value: rest, kind })
    };
    IntFactorization {
        negative,
        factors,
        cofactor,
    }
}

/// One line of the `Δ(l)` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub l: u64,
    #[serde(with = "crate::serde_dec::bigint")]
    pub tau: BigInt,
    #[serde(with = "crate::serde_dec::bigint")]
    pub delta: BigInt,
    pub factorization: IntFactorization,
}

/// `Δ(l)` with its factorization for every prime `l <= lmax`.
pub fn delta_table(table: &TauTable, lmax: u64) -> Result<Vec<DeltaRow>> {
    arith::primes_in_range(2, lmax + 1)
        .into_iter()
        .map(|l| {
            let delta = delta_l(table, l)?;
            Ok(DeltaRow {
                l: l.get(),
                tau: table.require(l.get())?.clone(),
                factorization: factor_integer(&delta),
                delta,
            })
        })
        .collect()
}
