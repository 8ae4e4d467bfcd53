//! Polynomials over `Z` and over `Z/mZ`.
//!
//! [`IntPoly`] is exact (arbitrary precision) and is used for characteristic
//! polynomials, discriminants and exact remainders. [`ModPoly`] is word-sized
//! and carries its modulus; it backs every hot loop. Coefficients are stored in
//! ascending degree order with no trailing zeros.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, add_mod, check_modulus, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::error::{Error, Result};

/// Default bound on `n` for [`remainder_power_exact`].
pub const DEFAULT_REMAINDER_CAP: u64 = 10_000;

// ---------------------------------------------------------------------------
// IntPoly
// ---------------------------------------------------------------------------

/// A polynomial with integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `X^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Errors unless the polynomial is monic of degree at least `min_degree`.
    pub fn require_monic(&self, min_degree: usize) -> Result<usize> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d < min_degree {
            return Err(Error::DegreeTooSmall {
                found: d,
                required: min_degree,
            });
        }
        if !self.is_monic() {
            return Err(Error::InvalidInput(format!("{self} is not monic")));
        }
        Ok(d)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Substitutes `X -> X^k`.
    pub fn compose_power(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Euclidean division by a monic divisor; exact over `Z`.
    pub fn divrem_monic(&self, g: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let dg = g.degree().ok_or(Error::ZeroPolynomial)?;
        if !g.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dg];
        for i in (dg..r.len()).rev() {
            let t = std::mem::take(&mut r[i]);
            if t.is_zero() {
                continue;
            }
            for (j, gc) in g.coeffs[..dg].iter().enumerate() {
                r[i - dg + j] -= &t * gc;
            }
            q[i - dg] = t;
        }
        r.truncate(dg);
        Ok((IntPoly::new(q), IntPoly::new(r)))
    }

    pub fn rem_monic(&self, g: &IntPoly) -> Result<IntPoly> {
        self.divrem_monic(g).map(|(_, r)| r)
    }

    /// Coefficient-wise reduction into `Z/mZ`.
    pub fn reduce(&self, m: u64) -> Result<ModPoly> {
        check_modulus(m)?;
        Ok(ModPoly::from_raw(
            self.coeffs
                .iter()
                .map(|c| arith::reduce_bigint(c, m))
                .collect(),
            m,
        ))
    }
}

impl std::ops::Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

fn write_terms<C: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (usize, C, bool)>,
) -> fmt::Result {
    // Terms arrive as (power, |coefficient|, negative) in ascending order.
    let mut first = true;
    for (k, mag, neg) in terms.rev() {
        let mag = mag.to_string();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let unit = mag == "1";
        match k {
            0 => f.write_str(&mag)?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                f.write_str("x")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.abs(), c.is_negative())),
        )
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl FromStr for IntPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_poly(s)
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

// ---------------------------------------------------------------------------
// ModPoly
// ---------------------------------------------------------------------------

/// A polynomial over `Z/mZ`.
///
/// Ring operations work for any modulus. Operations that need inverses
/// (`monic`, `divrem`, `gcd`) require the modulus to be prime and report
/// [`Error::NotInvertible`] otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ModPoly {
    /// Reduces the coefficients and trims trailing zeros.
    pub fn new(coeffs: Vec<u64>, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_raw(
            coeffs.into_iter().map(|c| c % modulus).collect(),
            modulus,
        ))
    }

    pub fn from_i64s(coeffs: &[i64], modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::from_raw(
            coeffs
                .iter()
                .map(|&c| arith::reduce_i64(c, modulus))
                .collect(),
            modulus,
        ))
    }

    /// Coefficients must already be reduced.
    pub(crate) fn from_raw(mut coeffs: Vec<u64>, modulus: u64) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus));
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { coeffs, modulus }
    }

    pub fn zero(modulus: u64) -> Self {
        ModPoly {
            coeffs: Vec::new(),
            modulus,
        }
    }

    pub fn one(modulus: u64) -> Self {
        Self::constant(1, modulus)
    }

    pub fn constant(c: u64, modulus: u64) -> Self {
        Self::from_raw(vec![c % modulus], modulus)
    }

    pub fn monomial(k: usize, modulus: u64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        ModPoly { coeffs, modulus }
    }

    pub fn x(modulus: u64) -> Self {
        Self::monomial(1, modulus)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_x(&self) -> bool {
        self.coeffs == [0, 1]
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    /// Lifts to the integers with coefficients in `[0, m)`.
    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Lifts to the integers with coefficients in `(-m/2, m/2]`.
    pub fn to_int_poly_symmetric(&self) -> IntPoly {
        let m = self.modulus;
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > m / 2 {
                        -BigInt::from(m - c)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    fn same_ring(&self, other: &ModPoly) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        self.same_ring(other);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_raw(
            (0..n)
                .map(|i| add_mod(self.coeff(i), other.coeff(i), m))
                .collect(),
            m,
        )
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        self.same_ring(other);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_raw(
            (0..n)
                .map(|i| sub_mod(self.coeff(i), other.coeff(i), m))
                .collect(),
            m,
        )
    }

    pub fn neg(&self) -> ModPoly {
        let m = self.modulus;
        Self::from_raw(self.coeffs.iter().map(|&c| neg_mod(c, m)).collect(), m)
    }

    pub fn scale(&self, k: u64) -> ModPoly {
        let m = self.modulus;
        let k = k % m;
        Self::from_raw(self.coeffs.iter().map(|&c| mul_mod(c, k, m)).collect(), m)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        self.same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.modulus);
        }
        let acc = raw_mul(&self.coeffs, &other.coeffs, self.modulus);
        Self::from_raw(acc, self.modulus)
    }

    pub fn pow(&self, mut e: u64) -> ModPoly {
        let mut base = self.clone();
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> ModPoly {
        let m = self.modulus;
        Self::from_raw(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % m, m))
                .collect(),
            m,
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, m), c, m))
    }

    /// Euclidean division by a monic divisor. Valid for every modulus.
    pub fn divrem_monic(&self, g: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        self.same_ring(g);
        let dg = g.degree().ok_or(Error::ZeroPolynomial)?;
        if !g.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let m = self.modulus;
        if self.coeffs.len() <= dg {
            return Ok((Self::zero(m), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dg];
        for i in (dg..r.len()).rev() {
            let t = r[i];
            r[i] = 0;
            if t == 0 {
                continue;
            }
            for (j, &gc) in g.coeffs[..dg].iter().enumerate() {
                r[i - dg + j] = sub_mod(r[i - dg + j], mul_mod(t, gc, m), m);
            }
            q[i - dg] = t;
        }
        r.truncate(dg);
        Ok((Self::from_raw(q, m), Self::from_raw(r, m)))
    }

    pub fn rem_monic(&self, g: &ModPoly) -> Result<ModPoly> {
        self.divrem_monic(g).map(|(_, r)| r)
    }

    /// Scales to leading coefficient one. Needs an invertible leading coefficient.
    pub fn monic(&self) -> Result<ModPoly> {
        match self.leading() {
            None => Err(Error::ZeroPolynomial),
            Some(1) => Ok(self.clone()),
            Some(lc) => Ok(self.scale(inv_mod(lc, self.modulus)?)),
        }
    }

    /// Division by any divisor with an invertible leading coefficient.
    pub fn divrem(&self, g: &ModPoly) -> Result<(ModPoly, ModPoly)> {
        let lc = g.leading().ok_or(Error::ZeroPolynomial)?;
        let inv = inv_mod(lc, self.modulus)?;
        let (q, r) = self.divrem_monic(&g.scale(inv))?;
        Ok((q.scale(inv), r))
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &ModPoly) -> Result<ModPoly> {
        self.same_ring(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic()
        }
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, g: &ModPoly) -> Result<ModPoly> {
        let (q, r) = self.divrem(g)?;
        if !r.is_zero() {
            return Err(Error::InternalInconsistency(format!(
                "{g} does not divide {self}"
            )));
        }
        Ok(q)
    }
}

/// Schoolbook product with lazy `u128` reduction.
fn raw_mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    const SPILL: u128 = 1 << 126;
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x as u128 * y as u128;
            if *slot >= SPILL {
                *slot %= m as u128;
            }
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(k, &c)| (k, c, false)),
        )
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly({self} mod {})", self.modulus)
    }
}

/// The coefficient list as decimal strings, ascending degree.
impl Serialize for ModPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Quotient ring Z/m[X]/(g)
// ---------------------------------------------------------------------------

/// Arithmetic in `Z/mZ[X] / (g)` for a monic `g`.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    modulus_poly: ModPoly,
    /// `-g_j` for `j < deg g`.
    neg_low: Vec<u64>,
}

impl QuotientRing {
    pub fn new(g: ModPoly) -> Result<Self> {
        let d = g.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::DegreeTooSmall {
                found: 0,
                required: 1,
            });
        }
        if !g.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let m = g.modulus;
        let neg_low = g.coeffs[..d].iter().map(|&c| neg_mod(c, m)).collect();
        Ok(QuotientRing {
            modulus_poly: g,
            neg_low,
        })
    }

    pub fn modulus_poly(&self) -> &ModPoly {
        &self.modulus_poly
    }

    pub fn degree(&self) -> usize {
        self.neg_low.len()
    }

    fn m(&self) -> u64 {
        self.modulus_poly.modulus
    }

    fn reduce_wide(&self, mut acc: Vec<u128>) -> ModPoly {
        const SPILL: u128 = 1 << 126;
        let m = self.m();
        let d = self.degree();
        for i in (d..acc.len()).rev() {
            let t = (acc[i] % m as u128) as u64;
            if t == 0 {
                continue;
            }
            for (j, &c) in self.neg_low.iter().enumerate() {
                let slot = &mut acc[i - d + j];
                *slot += t as u128 * c as u128;
                if *slot >= SPILL {
                    *slot %= m as u128;
                }
            }
        }
        acc.truncate(d);
        ModPoly::from_raw(acc.into_iter().map(|v| (v % m as u128) as u64).collect(), m)
    }

    pub fn reduce(&self, a: &ModPoly) -> ModPoly {
        if a.coeffs.len() <= self.degree() {
            return a.clone();
        }
        self.reduce_wide(a.coeffs.iter().map(|&c| c as u128).collect())
    }

    pub fn mul(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        if a.is_zero() || b.is_zero() {
            return ModPoly::zero(self.m());
        }
        let mut acc = vec![0u128; a.coeffs.len() + b.coeffs.len() - 1];
        let m = self.m() as u128;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += x as u128 * y as u128;
                if *slot >= 1 << 126 {
                    *slot %= m;
                }
            }
        }
        self.reduce_wide(acc)
    }

    /// Multiplication by `X`.
    pub fn mul_x(&self, a: &ModPoly) -> ModPoly {
        let mut shifted = Vec::with_capacity(a.coeffs.len() + 1);
        shifted.push(0u128);
        shifted.extend(a.coeffs.iter().map(|&c| c as u128));
        self.reduce_wide(shifted)
    }

    /// `base^e` in the quotient ring, left-to-right binary.
    pub fn pow(&self, base: &ModPoly, e: &BigUint) -> ModPoly {
        let base = self.reduce(base);
        let mut acc = ModPoly::one(self.m());
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
        }
        acc
    }

    pub fn pow_u64(&self, base: &ModPoly, e: u64) -> ModPoly {
        self.pow(base, &BigUint::from(e))
    }

    /// `X^e`; each set bit costs a shift instead of a full product.
    pub fn x_pow(&self, e: &BigUint) -> ModPoly {
        let mut acc = ModPoly::one(self.m());
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul_x(&acc);
            }
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Remainder powers, discriminants, Lucas evaluation
// ---------------------------------------------------------------------------

/// `X^n mod (C, m)` by square-and-multiply in `Z/m[X]/(C)`.
pub fn remainder_power(c: &IntPoly, n: &BigUint, m: u64) -> Result<ModPoly> {
    c.require_monic(2)?;
    let ring = QuotientRing::new(c.reduce(m)?)?;
    Ok(ring.x_pow(n))
}

/// The exact sequence `R_0, ..., R_n` of remainders of `X^k` by `C`.
pub fn remainder_sequence_exact(c: &IntPoly, n: u64, cap: u64) -> Result<Vec<IntPoly>> {
    let d = c.require_monic(1)?;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact remainder index",
            requested: n,
            cap,
        });
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut cur = vec![BigInt::zero(); d];
    cur[0] = BigInt::one();
    out.push(IntPoly::new(cur.clone()));
    for _ in 0..n {
        // X * R = top * X^d + shifted; X^d ≡ -(c_0 + ... + c_{d-1} X^{d-1}).
        let top = cur.pop().unwrap_or_default();
        cur.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (slot, ck) in cur.iter_mut().zip(&c.coeffs) {
                *slot -= &top * ck;
            }
        }
        out.push(IntPoly::new(cur.clone()));
    }
    Ok(out)
}

/// The exact remainder of `X^n` by `C`, for `n <= cap`.
pub fn remainder_power_exact(c: &IntPoly, n: u64, cap: u64) -> Result<IntPoly> {
    let mut seq = remainder_sequence_exact(c, n, cap)?;
    Ok(seq.pop().unwrap_or_default())
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    let n = df + dg;
    if n == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(n);
    // Rows hold descending-degree coefficients, shifted.
    for i in 0..dg {
        let mut row = vec![BigInt::zero(); n];
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..df {
        let mut row = vec![BigInt::zero(); n];
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    bareiss_determinant(rows)
}

/// Discriminant of a monic polynomial: `(-1)^(d(d-1)/2) Res(C, C')`.
pub fn discriminant(c: &IntPoly) -> Result<BigInt> {
    let d = c.require_monic(2)?;
    let res = resultant(c, &c.derivative());
    Ok(if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    })
}

/// `F{U} = sum_k f_k U_k` over the integers.
pub fn lucas_apply<T>(f: &IntPoly, mut term: T) -> BigInt
where
    T: FnMut(usize) -> BigInt,
{
    f.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| c * term(k))
        .sum()
}

/// `F{U} = sum_k f_k U_k` in `Z/mZ`, with `m` the modulus of `f`.
pub fn lucas_apply_mod<T>(f: &ModPoly, mut term: T) -> u64
where
    T: FnMut(usize) -> u64,
{
    let m = f.modulus;
    f.coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .fold(0, |acc, (k, &c)| {
            add_mod(acc, mul_mod(c, term(k) % m, m), m)
        })
}
