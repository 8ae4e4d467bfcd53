//! Factorization over `F_p`: squarefree decomposition, distinct-degree
//! splitting, and equal-degree splitting by Cantor-Zassenhaus or Berlekamp.
//!
//! Randomized steps draw from [`SplitMix64`] seeded by an [`RngSeed`]. A random
//! polynomial of degree below `n` is built by drawing `n` values in ascending
//! coefficient order and reducing each one modulo `p`. Given the same seed and
//! input the whole pipeline is reproducible.

use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Prime};
use crate::error::{Error, Result};
use crate::poly::{ModPoly, QuotientRing};

/// Berlekamp tries every shift `s ∈ F_p` when `p` is at most this; larger
/// fields use random nullspace combinations instead.
pub const EXHAUSTIVE_SHIFT_LIMIT: u64 = 1 << 10;

/// Seed for the equal-degree splitters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

/// SplitMix64 (Steele, Lea and Flood). Its update rule is part of the
/// reproducibility contract and must not change:
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// return z ^ (z >> 31)
/// ```
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: RngSeed) -> Self {
        SplitMix64 { state: seed.0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A polynomial with `len` random coefficients modulo `p`.
    pub fn poly(&mut self, len: usize, p: u64) -> ModPoly {
        let coeffs = (0..len).map(|_| self.next_u64() % p).collect();
        ModPoly::from_raw(coeffs, p)
    }
}

fn require_prime_modulus(f: &ModPoly) -> Result<Prime> {
    Prime::new(f.modulus())
}

/// `f = Π part^e` with pairwise coprime squarefree monic parts.
pub fn squarefree_decompose(f: &ModPoly) -> Result<Vec<(ModPoly, u32)>> {
    let p = require_prime_modulus(f)?.get();
    let f = f.monic()?;
    let mut out = sff_monic(&f, p)?;
    out.sort_by_key(|a| a.1);
    Ok(out)
}

fn pth_root(f: &ModPoly, p: u64) -> ModPoly {
    let coeffs = f.coeffs().iter().step_by(p as usize).copied().collect();
    ModPoly::from_raw(coeffs, p)
}

fn sff_monic(f: &ModPoly, p: u64) -> Result<Vec<(ModPoly, u32)>> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, e) in sff_monic(&pth_root(f, p), p)? {
            out.push((g, e * p as u32));
        }
        return Ok(out);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let fac = w.exact_div(&y)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w)?;
        i += 1;
    }
    if !c.is_one() {
        for (g, e) in sff_monic(&pth_root(&c, p), p)? {
            out.push((g, e * p as u32));
        }
    }
    Ok(out)
}

/// Distinct-degree factorization of a squarefree polynomial: `(k, product of
/// all irreducible factors of degree k)` for every `k` that occurs.
pub fn ddf(f: &ModPoly) -> Result<Vec<(usize, ModPoly)>> {
    let p = require_prime_modulus(f)?.get();
    let mut rest = f.monic()?;
    let mut out = Vec::new();
    let mut h = ModPoly::x(p);
    let x = ModPoly::x(p);
    let mut k = 0usize;
    while rest.degree().unwrap_or(0) >= 2 * (k + 1) {
        k += 1;
        let ring = QuotientRing::new(rest.clone())?;
        h = ring.pow_u64(&h, p);
        let g = h.sub(&x).gcd(&rest)?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem_monic(&rest)?;
            out.push((k, g));
        }
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((d, rest));
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting of a product of distinct degree-`k` irreducibles.
pub fn edf_cz(g: &ModPoly, k: usize, seed: RngSeed) -> Result<Vec<ModPoly>> {
    let mut rng = SplitMix64::new(seed);
    edf_cz_with(g, k, &mut rng)
}

fn edf_cz_with(g: &ModPoly, k: usize, rng: &mut SplitMix64) -> Result<Vec<ModPoly>> {
    let p = require_prime_modulus(g)?.get();
    if p == 2 {
        return Err(Error::EvenCharacteristic(p));
    }
    let g = g.monic()?;
    let n = g.degree().unwrap_or(0);
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!(
            "degree {n} is not a multiple of the factor degree {k}"
        )));
    }
    if n == k {
        return Ok(vec![g]);
    }
    let e: BigUint = (Pow::pow(BigUint::from(p), k as u32) - 1u32) >> 1usize;
    let ring = QuotientRing::new(g.clone())?;
    let one = ModPoly::one(p);
    let max_attempts = 64 * n;
    for _ in 0..max_attempts {
        let a = rng.poly(n, p);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = ring.pow(&a, &e).sub(&one);
        let d = b.gcd(&g)?;
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < n {
            let mut out = edf_cz_with(&d, k, rng)?;
            out.extend(edf_cz_with(&g.exact_div(&d)?, k, rng)?);
            return Ok(out);
        }
    }
    Err(Error::SplitFailure(max_attempts))
}

/// Gauss-Jordan nullspace over `F_p` of a square matrix acting on column vectors.
fn nullspace(mut a: Vec<Vec<u64>>, p: u64) -> Result<Vec<Vec<u64>>> {
    let n = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, piv);
        let inv = arith::inv_mod(a[row][col], p)?;
        for v in a[row].iter_mut() {
            *v = arith::mul_mod(*v, inv, p);
        }
        let pivot_row = a[row].clone();
        for (r, target) in a.iter_mut().enumerate() {
            if r != row && target[col] != 0 {
                let factor = target[col];
                for (t, &v) in target.iter_mut().zip(&pivot_row) {
                    *t = arith::sub_mod(*t, arith::mul_mod(factor, v, p), p);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = arith::neg_mod(a[r][fc], p);
            }
            v
        })
        .collect())
}

/// The Berlekamp subalgebra basis `{v : v^p ≡ v mod f}`.
fn berlekamp_basis(f: &ModPoly) -> Result<Vec<ModPoly>> {
    let p = f.modulus();
    let n = f.degree().unwrap_or(0);
    let ring = QuotientRing::new(f.clone())?;
    let xp = ring.x_pow(&BigUint::from(p));
    // Row i of Q holds x^{p i} mod f.
    let mut q = Vec::with_capacity(n);
    let mut cur = ModPoly::one(p);
    for _ in 0..n {
        q.push((0..n).map(|j| cur.coeff(j)).collect::<Vec<u64>>());
        cur = ring.mul(&cur, &xp);
    }
    // v Q = v  <=>  (Q - I)^T v^T = 0.
    let mt: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = q[i][j];
                    if i == j {
                        arith::sub_mod(v, 1, p)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    Ok(nullspace(mt, p)?
        .into_iter()
        .map(|v| ModPoly::from_raw(v, p))
        .collect())
}

/// Berlekamp factorization of a squarefree polynomial into monic irreducibles.
pub fn berlekamp(f: &ModPoly, seed: RngSeed) -> Result<Vec<ModPoly>> {
    let p = require_prime_modulus(f)?.get();
    let f = f.monic()?;
    if f.degree().unwrap_or(0) <= 1 {
        return Ok(vec![f]);
    }
    let basis = berlekamp_basis(&f)?;
    let r = basis.len();
    let mut factors = vec![f.clone()];
    if r == 1 {
        return Ok(factors);
    }
    if p <= EXHAUSTIVE_SHIFT_LIMIT {
        for v in basis.iter().filter(|v| v.degree().unwrap_or(0) > 0) {
            let mut next = Vec::with_capacity(r);
            for h in factors {
                if h.degree() == Some(1) {
                    next.push(h);
                    continue;
                }
                let mut rest = h;
                for s in 0..p {
                    if rest.is_one() {
                        break;
                    }
                    let g = v.sub(&ModPoly::constant(s, p)).gcd(&rest)?;
                    if !g.is_one() {
                        rest = rest.exact_div(&g)?;
                        next.push(g);
                    }
                }
            }
            factors = next;
            if factors.len() == r {
                break;
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        let e = BigUint::from((p - 1) / 2);
        let ring = QuotientRing::new(f.clone())?;
        let one = ModPoly::one(p);
        let max_attempts = 64 * f.degree().unwrap_or(1);
        let mut attempts = 0;
        while factors.len() < r {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::SplitFailure(max_attempts));
            }
            let w = basis.iter().fold(ModPoly::zero(p), |acc, b| {
                acc.add(&b.scale(rng.next_u64() % p))
            });
            let t = ring.pow(&w, &e).sub(&one);
            let mut next = Vec::with_capacity(r);
            for h in factors {
                let g = t.rem_monic(&h)?.gcd(&h)?;
                let dg = g.degree().unwrap_or(0);
                if dg > 0 && Some(dg) < h.degree() {
                    next.push(h.exact_div(&g)?);
                    next.push(g);
                } else {
                    next.push(h);
                }
            }
            factors = next;
        }
    }
    if factors.len() != r {
        return Err(Error::InternalInconsistency(format!(
            "Berlekamp found {} factors, nullspace dimension {r}",
            factors.len()
        )));
    }
    Ok(factors)
}

/// Irreducibility over `F_p`: `X^{p^n} ≡ X mod g` and
/// `gcd(X^{p^j} - X, g) = 1` for `1 <= j < n`.
pub fn is_irreducible(g: &ModPoly) -> Result<bool> {
    let p = require_prime_modulus(g)?.get();
    let g = g.monic()?;
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return Ok(false);
    }
    let ring = QuotientRing::new(g.clone())?;
    let x = ring.reduce(&ModPoly::x(p));
    let mut h = x.clone();
    for j in 1..=n {
        h = ring.pow_u64(&h, p);
        let diff = h.sub(&x);
        if j < n {
            if !diff.gcd(&g)?.is_one() {
                return Ok(false);
            }
        } else {
            return Ok(diff.is_zero());
        }
    }
    unreachable!()
}

/// Which splitter handles equal-degree blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Cantor-Zassenhaus for odd `p`, Berlekamp for `p = 2`.
    #[default]
    Auto,
    CantorZassenhaus,
    Berlekamp,
}

/// A complete factorization `input = leading · Π factor^multiplicity` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FactorizationRepr", into = "FactorizationRepr")]
pub struct FactorizationResult {
    pub prime: Prime,
    pub input: ModPoly,
    pub leading: u64,
    /// Monic irreducible factors, sorted by ascending coefficient tuple.
    pub factors: Vec<(ModPoly, u32)>,
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    factor: Vec<String>,
    multiplicity: u32,
}

#[derive(Serialize, Deserialize)]
struct FactorizationRepr {
    prime: u64,
    input: Vec<String>,
    leading: String,
    factors: Vec<FactorRepr>,
}

fn parse_coeffs(raw: &[String], p: u64) -> Result<ModPoly> {
    let coeffs = raw
        .iter()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficient {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ModPoly::new(coeffs, p)
}

impl TryFrom<FactorizationRepr> for FactorizationResult {
    type Error = Error;
    fn try_from(r: FactorizationRepr) -> Result<Self> {
        let prime = Prime::new(r.prime)?;
        let p = prime.get();
        Ok(FactorizationResult {
            prime,
            input: parse_coeffs(&r.input, p)?,
            leading: r
                .leading
                .parse()
                .map_err(|_| Error::InvalidInput("bad leading coefficient".into()))?,
            factors: r
                .factors
                .iter()
                .map(|f| Ok((parse_coeffs(&f.factor, p)?, f.multiplicity)))
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

impl From<FactorizationResult> for FactorizationRepr {
    fn from(r: FactorizationResult) -> Self {
        let strs = |f: &ModPoly| f.coeffs().iter().map(u64::to_string).collect();
        FactorizationRepr {
            prime: r.prime.get(),
            input: strs(&r.input),
            leading: r.leading.to_string(),
            factors: r
                .factors
                .iter()
                .map(|(f, m)| FactorRepr {
                    factor: strs(f),
                    multiplicity: *m,
                })
                .collect(),
        }
    }
}

impl FactorizationResult {
    /// Factor degrees repeated by multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m as usize))
            .collect();
        d.sort_unstable();
        d
    }

    pub fn is_totally_split(&self) -> bool {
        self.factors
            .iter()
            .all(|(f, m)| *m == 1 && f.degree() == Some(1))
    }

    pub fn reassemble(&self) -> ModPoly {
        let p = self.prime.get();
        self.factors
            .iter()
            .fold(ModPoly::constant(self.leading, p), |acc, (f, m)| {
                acc.mul(&f.pow(*m as u64))
            })
    }
}

/// SFF, then DDF, then equal-degree splitting, with a reassembly check.
pub fn factor_full(f: &ModPoly, seed: RngSeed) -> Result<FactorizationResult> {
    factor_full_with(f, seed, Backend::Auto)
}

pub fn factor_full_with(
    f: &ModPoly,
    seed: RngSeed,
    backend: Backend,
) -> Result<FactorizationResult> {
    let prime = require_prime_modulus(f)?;
    let p = prime.get();
    let leading = f.leading().ok_or(Error::ZeroPolynomial)?;
    let use_cz = match backend {
        Backend::Auto => p != 2,
        Backend::CantorZassenhaus if p == 2 => return Err(Error::EvenCharacteristic(p)),
        Backend::CantorZassenhaus => true,
        Backend::Berlekamp => false,
    };
    let mut rng = SplitMix64::new(seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decompose(f)? {
        for (k, block) in ddf(&part)? {
            let pieces = if block.degree() == Some(k) {
                vec![block]
            } else if use_cz {
                edf_cz_with(&block, k, &mut rng)?
            } else {
                berlekamp(&block, RngSeed(rng.next_u64()))?
            };
            factors.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    factors.sort();
    let result = FactorizationResult {
        prime,
        input: f.clone(),
        leading,
        factors,
    };
    if result.reassemble() != *f {
        return Err(Error::InternalInconsistency(format!(
            "factors of {f} mod {p} do not multiply back"
        )));
    }
    for (g, _) in &result.factors {
        if !g.is_monic() || !is_irreducible(g)? {
            return Err(Error::InternalInconsistency(format!(
                "factor {g} mod {p} is not monic irreducible"
            )));
        }
    }
    Ok(result)
}
