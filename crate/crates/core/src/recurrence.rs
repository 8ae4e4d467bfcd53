//! Linear recurrent sequences of class `C` and the Fermat-type congruences
//! they satisfy.
//!
//! A [`LinRec`] is a monic characteristic polynomial plus its `d` initial
//! terms. Exact terms are produced by stepping the recurrence; modular terms
//! at arbitrary indices go through the remainder `R_n = X^n mod C`, since
//! `U_n = R_n{U}` for every sequence of class `C`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, check_modulus, mod_pow, Prime, Residue};
use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};

/// Default bound on the index reachable by [`LinRec::term_exact`].
pub const DEFAULT_STEP_CAP: u64 = 1_000_000;

/// Largest matrix accepted by the trace congruence checks.
pub const MAX_MATRIX_SIZE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LinRecRepr", into = "LinRecRepr")]
pub struct LinRec {
    charpoly: IntPoly,
    initials: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct LinRecRepr {
    charpoly: IntPoly,
    initials: Vec<String>,
}

impl TryFrom<LinRecRepr> for LinRec {
    type Error = Error;
    fn try_from(r: LinRecRepr) -> Result<Self> {
        let initials = r
            .initials
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("bad initial term {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LinRec::new(r.charpoly, initials)
    }
}

impl From<LinRec> for LinRecRepr {
    fn from(r: LinRec) -> Self {
        LinRecRepr {
            charpoly: r.charpoly,
            initials: r.initials.iter().map(ToString::to_string).collect(),
        }
    }
}

impl LinRec {
    pub fn new(charpoly: IntPoly, initials: Vec<BigInt>) -> Result<Self> {
        let d = charpoly.require_monic(2)?;
        if initials.len() != d {
            return Err(Error::InvalidInput(format!(
                "degree {d} recurrence needs {d} initial terms, got {}",
                initials.len()
            )));
        }
        Ok(LinRec { charpoly, initials })
    }

    pub fn from_i64s(charpoly: &[i64], initials: &[i64]) -> Result<Self> {
        Self::new(
            IntPoly::from_i64s(charpoly),
            initials.iter().map(|&u| BigInt::from(u)).collect(),
        )
    }

    /// The trace sequence `L_n = x_1^n + ... + x_d^n` of `C`.
    pub fn lucas(charpoly: IntPoly) -> Result<Self> {
        let initials = lucas_initials(&charpoly)?;
        Self::new(charpoly, initials)
    }

    /// `U_{n+2} = U_{n+1} + U_n`.
    pub fn fibonacci_class(u0: i64, u1: i64) -> Self {
        Self::from_i64s(&[-1, -1, 1], &[u0, u1]).expect("valid recurrence")
    }

    /// Padovan numbers `1, 1, 1, 2, 2, 3, ...` of class `X^3 - X - 1`.
    pub fn padovan() -> Self {
        Self::from_i64s(&[-1, -1, 0, 1], &[1, 1, 1]).expect("valid recurrence")
    }

    /// Perrin numbers `3, 0, 2, 3, 2, 5, ...`, the trace sequence of `X^3 - X - 1`.
    pub fn perrin() -> Self {
        Self::from_i64s(&[-1, -1, 0, 1], &[3, 0, 2]).expect("valid recurrence")
    }

    pub fn charpoly(&self) -> &IntPoly {
        &self.charpoly
    }

    pub fn initials(&self) -> &[BigInt] {
        &self.initials
    }

    pub fn order(&self) -> usize {
        self.initials.len()
    }

    /// The first `count` terms, by stepping.
    pub fn terms_exact(&self, count: u64, cap: u64) -> Result<Vec<BigInt>> {
        if count > cap.saturating_add(1) {
            return Err(Error::CapExceeded {
                what: "exact term index",
                requested: count.saturating_sub(1),
                cap,
            });
        }
        let d = self.order();
        let c = self.charpoly.coeffs();
        let mut out: Vec<BigInt> = self.initials.iter().take(count as usize).cloned().collect();
        while (out.len() as u64) < count {
            let n = out.len();
            let next: BigInt = -(0..d).map(|k| &c[k] * &out[n - d + k]).sum::<BigInt>();
            out.push(next);
        }
        Ok(out)
    }

    pub fn term_exact(&self, n: u64) -> Result<BigInt> {
        self.term_exact_capped(n, DEFAULT_STEP_CAP)
    }

    /// The exact `n`-th term; stepping keeps only a window of `d` terms.
    pub fn term_exact_capped(&self, n: u64, cap: u64) -> Result<BigInt> {
        if n > cap {
            return Err(Error::CapExceeded {
                what: "exact term index",
                requested: n,
                cap,
            });
        }
        let d = self.order();
        if (n as usize) < d {
            return Ok(self.initials[n as usize].clone());
        }
        let c = self.charpoly.coeffs();
        let mut window: std::collections::VecDeque<BigInt> =
            self.initials.iter().cloned().collect();
        for _ in d as u64..=n {
            let next: BigInt = -window.iter().zip(c).map(|(u, ck)| ck * u).sum::<BigInt>();
            window.pop_front();
            window.push_back(next);
        }
        Ok(window.pop_back().unwrap_or_default())
    }

    pub fn initials_mod(&self, m: u64) -> Vec<u64> {
        self.initials
            .iter()
            .map(|u| arith::reduce_bigint(u, m))
            .collect()
    }

    /// `U_n mod m` as `R_n{U}`; `n` may be astronomically large.
    pub fn term_mod(&self, n: &BigUint, m: u64) -> Result<Residue> {
        check_modulus(m)?;
        let r = poly::remainder_power(&self.charpoly, n, m)?;
        let init = self.initials_mod(m);
        Residue::new(poly::lucas_apply_mod(&r, |k| init[k]), m)
    }

    pub fn term_mod_u64(&self, n: u64, m: u64) -> Result<u64> {
        self.term_mod(&BigUint::from(n), m).map(Residue::value)
    }
}

/// Power sums `L_0, ..., L_{d-1}` of the roots of a monic `C`, by Newton's identities.
pub fn lucas_initials(c: &IntPoly) -> Result<Vec<BigInt>> {
    let d = c.require_monic(2)?;
    // Writing C = X^d + e_1 X^{d-1} + ... : e_i = c_{d-i}.
    let e = |i: usize| c.coeff(d - i);
    let mut l = Vec::with_capacity(d);
    l.push(BigInt::from(d));
    for k in 1..d {
        let mut v = -BigInt::from(k) * e(k);
        for i in 1..k {
            v -= e(i) * &l[k - i];
        }
        l.push(v);
    }
    Ok(l)
}

fn prime_power(p: Prime, k: u32) -> BigUint {
    Pow::pow(BigUint::from(p.get()), k)
}

/// `L_{p^k} ≡ L_1 (mod p)` for the trace sequence of `C`.
pub fn check_lucas_fermat(c: &IntPoly, p: Prime, k: u32) -> Result<bool> {
    let lucas = LinRec::lucas(c.clone())?;
    let lhs = lucas.term_mod(&prime_power(p, k), p.get())?;
    let l1 = arith::reduce_bigint(&lucas.initials[1], p.get());
    Ok(lhs.value() == l1)
}

/// `R_p{L} ≡ L_1 (mod p)`, spelled out through the remainder coefficients.
pub fn check_universal(c: &IntPoly, p: Prime) -> Result<bool> {
    let m = p.get();
    let r = poly::remainder_power(c, &BigUint::from(m), m)?;
    let l: Vec<u64> = lucas_initials(c)?
        .iter()
        .map(|v| arith::reduce_bigint(v, m))
        .collect();
    Ok(poly::lucas_apply_mod(&r, |k| l[k]) == l[1])
}

/// `U_{p^f} ≡ U_1 (mod p)` where `f` is the order of the Frobenius at `p`.
pub fn check_order_f(rec: &LinRec, p: Prime, f: u32) -> Result<bool> {
    let disc = poly::discriminant(rec.charpoly())?;
    if arith::reduce_bigint(&disc, p.get()) == 0 {
        return Err(Error::RamifiedPrime(p.get()));
    }
    if f == 0 {
        return Err(Error::InvalidInput(
            "Frobenius order must be at least 1".into(),
        ));
    }
    let lhs = rec.term_mod(&prime_power(p, f), p.get())?;
    Ok(lhs.value() == arith::reduce_bigint(&rec.initials[1], p.get()))
}

/// A small square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl SquareMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_MATRIX_SIZE {
            return Err(Error::InvalidInput(format!(
                "matrix size must be in 1..={MAX_MATRIX_SIZE}, got {n}"
            )));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Ok(SquareMatrix { rows })
    }

    pub fn from_i64s(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect(),
        )
    }

    /// Companion matrix of a monic polynomial.
    pub fn companion(c: &IntPoly) -> Result<Self> {
        let d = c.require_monic(1)?;
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        for i in 1..d {
            rows[i][i - 1] = BigInt::one();
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[d - 1] = -c.coeff(i);
        }
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn trace(&self) -> BigInt {
        (0..self.size()).map(|i| &self.rows[i][i]).sum()
    }

    /// `det(X I - M)` by the division-free Berkowitz algorithm.
    pub fn charpoly(&self) -> IntPoly {
        let a = &self.rows;
        let n = self.size();
        // Coefficients in descending degree order.
        let mut c: Vec<BigInt> = vec![BigInt::one(), -&a[0][0]];
        for r in 1..n {
            // Leading (r+1)x(r+1) block: M = a[..r][..r], row R = a[r][..r],
            // column S = a[..r][r], corner a[r][r].
            let mut t = Vec::with_capacity(r + 2);
            t.push(BigInt::one());
            t.push(-&a[r][r]);
            let mut v: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
            for _ in 0..r {
                let rv: BigInt = (0..r).map(|j| &a[r][j] * &v[j]).sum();
                t.push(-rv);
                v = (0..r)
                    .map(|i| (0..r).map(|j| &a[i][j] * &v[j]).sum())
                    .collect();
            }
            let next: Vec<BigInt> = (0..r + 2)
                .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &c[j]).sum())
                .collect();
            c = next;
        }
        c.reverse();
        IntPoly::new(c)
    }

    pub fn mul(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.size();
        SquareMatrix {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    /// `Tr(M^k) mod m` through the trace sequence of the characteristic polynomial.
    pub fn trace_power_mod(&self, k: &BigUint, m: u64) -> Result<u64> {
        check_modulus(m)?;
        if self.size() == 1 {
            let a = Residue::from_bigint(&self.rows[0][0], m)?;
            return Ok(mod_pow(a, k).value());
        }
        let lucas = LinRec::lucas(self.charpoly())?;
        Ok(lucas.term_mod(k, m)?.value())
    }
}

/// `Tr(M^p) ≡ Tr(M) (mod p)`.
pub fn matrix_trace_fermat(m: &SquareMatrix, p: Prime) -> Result<bool> {
    let lhs = m.trace_power_mod(&BigUint::from(p.get()), p.get())?;
    Ok(lhs == arith::reduce_bigint(&m.trace(), p.get()))
}

/// Outcome of comparing `Tr(M^{p^{n+1}})` with `Tr(M^{p^n})` at two moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArnoldReport {
    pub p: u64,
    pub n: u32,
    /// Congruence holds modulo `p^n`.
    pub holds_mod_p_n: bool,
    /// Congruence holds modulo `p^(n+1)`.
    pub holds_mod_p_n1: bool,
}

/// Experimental: Arnold's congruence at both candidate moduli. Nothing is asserted.
pub fn arnold_check(m: &SquareMatrix, p: Prime, n: u32) -> Result<ArnoldReport> {
    if n == 0 {
        return Err(Error::InvalidInput("Arnold check needs n >= 1".into()));
    }
    let big_mod = Pow::pow(BigUint::from(p.get()), n + 1);
    let modulus = u64::try_from(&big_mod).map_err(|_| Error::ModulusOutOfRange(u64::MAX))?;
    check_modulus(modulus)?;
    let hi = m.trace_power_mod(&prime_power(p, n + 1), modulus)?;
    let lo = m.trace_power_mod(&prime_power(p, n), modulus)?;
    let small = modulus / p.get();
    Ok(ArnoldReport {
        p: p.get(),
        n,
        holds_mod_p_n: (hi % small) == (lo % small),
        holds_mod_p_n1: hi == lo,
    })
}

/// Frobenius order from a list of cycle lengths: their least common multiple.
pub fn order_from_degrees(degrees: &[usize]) -> u32 {
    degrees.iter().fold(1usize, |acc, &d| acc.lcm(&d)) as u32
}
