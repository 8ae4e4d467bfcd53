//! Frobenius classification of primes: cycle types, the totally-split test,
//! quadratic and depressed-cubic congruence classifiers, the Perrin
//! pseudoprime scan and density scans over prime ranges.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Prime};
use crate::error::{Error, Result};
use crate::factor;
use crate::poly::{self, IntPoly, ModPoly, QuotientRing};

/// Largest `pmax` accepted by [`chebotarev_scan`].
pub const MAX_SCAN_PMAX: u64 = 100_000_000;
/// Largest limit accepted by [`perrin_pseudoprime_scan`].
pub const MAX_PERRIN_LIMIT: u64 = 10_000_000;

/// Sorted multiset of irreducible factor degrees of `C mod p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::InvalidInput(
                "cycle type needs at least one positive part".into(),
            ));
        }
        degrees.sort_unstable();
        Ok(CycleType(degrees))
    }

    /// The identity type `1^d`.
    pub fn identity(d: usize) -> Self {
        CycleType(vec![1; d])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    /// Sum of the parts, which is the degree of the polynomial.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&k| k == 1)
    }

    /// Order of the Frobenius: lcm of the parts.
    pub fn order(&self) -> u32 {
        crate::recurrence::order_from_degrees(&self.0)
    }

    fn groups(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &k in &self.0 {
            match out.last_mut() {
                Some((part, n)) if *part == k => *n += 1,
                _ => out.push((k, 1)),
            }
        }
        out
    }
}

/// `1^3 2^2` style, ascending parts, exponent omitted when it is 1.
impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (part, n)) in self.groups().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if n == 1 {
                write!(f, "{part}")?;
            } else {
                write!(f, "{part}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Accepts `1^3 2^2`, `1,1,1,2,2`, `2^2*1^3` and similar.
impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot read cycle type {s:?}"));
        let mut degrees = Vec::new();
        for tok in s
            .split(|c: char| c == ',' || c == '*' || c == 'x' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (part, n) = match tok.split_once('^') {
                Some((a, b)) => (a, b.parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let part: usize = part.parse().map_err(|_| bad())?;
            degrees.extend(std::iter::repeat_n(part, n));
        }
        CycleType::new(degrees).map_err(|_| bad())
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A monic squarefree polynomial with its discriminant, ready to classify primes.
#[derive(Debug, Clone)]
pub struct PolyClassifier {
    poly: IntPoly,
    disc: BigInt,
}

impl PolyClassifier {
    pub fn new(poly: IntPoly) -> Result<Self> {
        poly.require_monic(1)?;
        let disc = poly::discriminant(&poly)?;
        if disc.is_zero() {
            return Err(Error::InvalidInput(format!("{poly} is not squarefree")));
        }
        Ok(PolyClassifier { poly, disc })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_ramified(&self, p: Prime) -> bool {
        arith::reduce_bigint(&self.disc, p.get()) == 0
    }

    fn require_unramified(&self, p: Prime) -> Result<()> {
        if self.is_ramified(p) {
            Err(Error::RamifiedPrime(p.get()))
        } else {
            Ok(())
        }
    }

    /// Factor degrees from the distinct-degree split; no full factorization.
    pub fn cycle_type(&self, p: Prime) -> Result<CycleType> {
        self.require_unramified(p)?;
        let f = self.poly.reduce(p.get())?;
        let mut degrees = Vec::new();
        for (k, block) in factor::ddf(&f)? {
            let n = block.degree().unwrap_or(0) / k;
            degrees.extend(std::iter::repeat_n(k, n));
        }
        CycleType::new(degrees)
    }

    /// `X^p ≡ X` in `F_p[X]/(C)`.
    pub fn is_totally_split(&self, p: Prime) -> Result<bool> {
        self.require_unramified(p)?;
        let ring = QuotientRing::new(self.poly.reduce(p.get())?)?;
        let x = ring.reduce(&ModPoly::x(p.get()));
        Ok(ring.x_pow(&BigUint::from(p.get())) == x)
    }
}

pub fn cycle_type(c: &IntPoly, p: Prime) -> Result<CycleType> {
    PolyClassifier::new(c.clone())?.cycle_type(p)
}

pub fn is_totally_split(c: &IntPoly, p: Prime) -> Result<bool> {
    PolyClassifier::new(c.clone())?.is_totally_split(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadLabel {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for QuadLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadLabel::Split => "split",
            QuadLabel::Inert => "inert",
            QuadLabel::Ramified => "ramified",
        })
    }
}

/// Behaviour of `p` in the class of `X^2 - sX + π`, with the form `F` such
/// that `U_p ≡ F{U} (mod p)` for every sequence of the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadVerdict {
    pub label: QuadLabel,
    pub predicted_form: Option<IntPoly>,
}

/// Classifies `p` for `C = X^2 - sX + π`. At `p = 2` the Kronecker symbol
/// `(Δ/2)` stands in for the Legendre symbol.
///
/// At a ramified odd `p`, `C ≡ (X - s/2)^2` and `X^p` reduces to the
/// constant `s/2 mod p`; at a ramified `p = 2` it reduces to `π mod 2`.
pub fn quad_classify(s: &BigInt, pi: &BigInt, p: Prime) -> Result<QuadVerdict> {
    let delta = s * s - BigInt::from(4) * pi;
    if delta.is_zero() {
        return Err(Error::DegenerateQuadratic);
    }
    let symbol = if p.get() == 2 {
        arith::kronecker_two(&delta)
    } else {
        arith::legendre(&delta, p)?
    };
    Ok(match symbol {
        1 => QuadVerdict {
            label: QuadLabel::Split,
            predicted_form: Some(IntPoly::x()),
        },
        -1 => QuadVerdict {
            label: QuadLabel::Inert,
            predicted_form: Some(&IntPoly::constant(s.clone()) - &IntPoly::x()),
        },
        _ => {
            let m = p.get();
            let k = if m == 2 {
                arith::reduce_bigint(pi, 2)
            } else {
                arith::mul_mod(arith::reduce_bigint(s, m), arith::inv_mod(2, m)?, m)
            };
            QuadVerdict {
                label: QuadLabel::Ramified,
                predicted_form: Some(IntPoly::constant(BigInt::from(k))),
            }
        }
    })
}

/// Class of an unramified prime for an `S_3` cubic: three roots mod `p`,
/// one root, or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum S3Class {
    P1,
    P2,
    P3,
}

impl S3Class {
    /// The class carried by a cycle type of a cubic.
    pub fn from_cycle_type(ct: &CycleType) -> Option<S3Class> {
        match ct.degrees() {
            [1, 1, 1] => Some(S3Class::P1),
            [1, 2] => Some(S3Class::P2),
            [3] => Some(S3Class::P3),
            _ => None,
        }
    }
}

impl fmt::Display for S3Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for S3Class {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P1" | "p1" => Ok(S3Class::P1),
            "P2" | "p2" => Ok(S3Class::P2),
            "P3" | "p3" => Ok(S3Class::P3),
            _ => Err(Error::InvalidInput(format!("unknown class {s:?}"))),
        }
    }
}

/// The two-valued answer of the Legendre-symbol test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum P2Symbol {
    IsP2,
    NotP2,
}

/// Outcome of the congruence classifier, with `R_p = aX^2 + bX + c mod p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct S3Report {
    pub p: u64,
    pub class: S3Class,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// `X^3 + uX + v`, irreducible over `Q` with a non-square discriminant.
#[derive(Debug, Clone)]
pub struct DepressedCubic {
    u: i64,
    v: i64,
    delta: BigInt,
    poly: IntPoly,
}

fn cubic_at(u: &BigInt, v: &BigInt, x: &BigInt) -> BigInt {
    x * x * x + u * x + v
}

/// Searches the monotone integer range `[lo, hi]` of `x^3 + ux + v` for a root.
fn monotone_root(u: &BigInt, v: &BigInt, mut lo: BigInt, mut hi: BigInt) -> bool {
    if lo > hi {
        return false;
    }
    let f_lo = cubic_at(u, v, &lo);
    let f_hi = cubic_at(u, v, &hi);
    if f_lo.is_zero() || f_hi.is_zero() {
        return true;
    }
    if f_lo.signum() == f_hi.signum() {
        return false;
    }
    let increasing = f_lo.is_negative();
    while &hi - &lo > BigInt::from(1) {
        let mid: BigInt = (&lo + &hi) >> 1usize;
        let f = cubic_at(u, v, &mid);
        if f.is_zero() {
            return true;
        }
        if f.is_negative() == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    false
}

/// A monic cubic with integer coefficients is reducible over `Q` exactly
/// when it has an integer root.
fn has_integer_root(u: i64, v: i64) -> bool {
    let (ub, vb) = (BigInt::from(u), BigInt::from(v));
    let bound = BigInt::from(u.unsigned_abs().max(v.unsigned_abs())) + BigInt::from(1);
    if u >= 0 {
        return monotone_root(&ub, &vb, -bound.clone(), bound);
    }
    // Turning points at ±sqrt(-u/3); split the integers into monotone runs.
    let k0 = BigInt::from((u.unsigned_abs() / 3).sqrt());
    monotone_root(&ub, &vb, -bound.clone(), -&k0 - 1)
        || monotone_root(&ub, &vb, -k0.clone(), k0.clone())
        || monotone_root(&ub, &vb, k0 + 1, bound)
}

impl DepressedCubic {
    pub fn new(u: i64, v: i64) -> Result<Self> {
        if has_integer_root(u, v) {
            return Err(Error::InvalidInput(format!(
                "x^3 + ({u})x + ({v}) has a rational root"
            )));
        }
        let (ub, vb) = (BigInt::from(u), BigInt::from(v));
        let delta = BigInt::from(-4) * &ub * &ub * &ub - BigInt::from(27) * &vb * &vb;
        if arith::is_perfect_square(&delta) {
            return Err(Error::InvalidInput(format!(
                "discriminant {delta} is a square, so the Galois group is cyclic"
            )));
        }
        let poly = IntPoly::new(vec![vb, ub, BigInt::zero(), BigInt::from(1)]);
        Ok(DepressedCubic { u, v, delta, poly })
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    /// `Δ = -4u^3 - 27v^2`.
    pub fn discriminant(&self) -> &BigInt {
        &self.delta
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    fn require_unramified(&self, p: Prime) -> Result<()> {
        if arith::reduce_bigint(&self.delta, p.get()) == 0 {
            Err(Error::RamifiedPrime(p.get()))
        } else {
            Ok(())
        }
    }

    /// Coefficients `(a, b, c)` of `R_p = aX^2 + bX + c mod p`.
    fn remainder_coeffs(&self, p: Prime) -> Result<(u64, u64, u64)> {
        let r = poly::remainder_power(&self.poly, &BigUint::from(p.get()), p.get())?;
        Ok((r.coeff(2), r.coeff(1), r.coeff(0)))
    }

    /// Evaluates the three congruence systems on `R_p`; exactly one must hold.
    pub fn classify(&self, p: Prime) -> Result<S3Report> {
        self.require_unramified(p)?;
        let m = p.get();
        let (a, b, c) = self.remainder_coeffs(p)?;
        let red = |x: &BigInt| arith::reduce_bigint(x, m);
        let (u, v, d) = (BigInt::from(self.u), BigInt::from(self.v), &self.delta);
        let (ab, bb, cb) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));

        if red(&(BigInt::from(3) * &cb - BigInt::from(2) * &u * &ab)) != 0 {
            return Err(Error::InternalInconsistency(format!(
                "3c ≢ 2ua mod {m} for R_p = ({a}, {b}, {c})"
            )));
        }

        let u2 = &u * &u;
        let u3 = &u2 * &u;
        let u4 = &u2 * &u2;
        let all_zero = |xs: [BigInt; 3]| xs.iter().all(|x| red(x) == 0);

        let p1 = (a, b, c) == (0, 1, 0);
        let p3 = all_zero([
            d * &ab * &ab - BigInt::from(9) * &u2,
            d * (&bb * &bb + &bb) - (&u3 + BigInt::from(27) * &v * &v),
            d * &cb * &cb - BigInt::from(4) * &u4,
        ]);
        let p2 = all_zero([
            d * &ab * &ab * &ab - BigInt::from(9) * &u2 * &ab - BigInt::from(27) * &v,
            d * &bb * &bb * &bb + BigInt::from(3) * &u3 * &bb - &u3,
            d * &cb * &cb * &cb - BigInt::from(4) * &u4 * &cb - BigInt::from(8) * &u3 * &v,
        ]);

        let hits: Vec<S3Class> = [(p1, S3Class::P1), (p3, S3Class::P3), (p2, S3Class::P2)]
            .into_iter()
            .filter_map(|(ok, cls)| ok.then_some(cls))
            .collect();
        match hits.as_slice() {
            [class] => Ok(S3Report {
                p: m,
                class: *class,
                a,
                b,
                c,
            }),
            _ => Err(Error::InternalInconsistency(format!(
                "{} congruence systems hold for x^3 + ({})x + ({}) at p = {m}: {hits:?}",
                hits.len(),
                self.u,
                self.v
            ))),
        }
    }

    /// `P2` exactly when `Δ` is a non-residue mod an odd `p`.
    pub fn symbol(&self, p: Prime) -> Result<P2Symbol> {
        self.require_unramified(p)?;
        Ok(match arith::legendre(&self.delta, p)? {
            -1 => P2Symbol::IsP2,
            _ => P2Symbol::NotP2,
        })
    }
}

pub fn s3_classify(u: i64, v: i64, p: Prime) -> Result<S3Class> {
    Ok(DepressedCubic::new(u, v)?.classify(p)?.class)
}

pub fn s3_class_partial_via_symbol(u: i64, v: i64, p: Prime) -> Result<P2Symbol> {
    DepressedCubic::new(u, v)?.symbol(p)
}

/// The Padovan class `X^3 - X - 1` with its systems written out for `Δ = -23`.
/// The generic classifier runs as well and the two must agree.
pub fn padovan_classify(p: Prime) -> Result<S3Class> {
    let m = p.get();
    if m == 23 {
        return Err(Error::RamifiedPrime(23));
    }
    let cubic = DepressedCubic::new(-1, -1)?;
    let (a, b, c) = cubic.remainder_coeffs(p)?;
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let zero = |x: i128| x.rem_euclid(m as i128) == 0;
    let modp = |x: i128| x.rem_euclid(m as i128);
    // Reduce before cubing so everything stays inside i128.
    let (a, b, c) = (modp(a), modp(b), modp(c));
    let cube = |x: i128| modp(modp(x * x) * x);

    let hard = if (a, b, c) == (0, 1, 0) {
        Some(S3Class::P1)
    } else if zero(23 * a * a + 9) && zero(23 * (b * b + b) + 26) && zero(23 * c * c + 4) {
        Some(S3Class::P3)
    } else if zero(23 * cube(a) + 9 * a - 27)
        && zero(23 * cube(b) + 3 * b - 1)
        && zero(23 * cube(c) + 4 * c + 8)
    {
        Some(S3Class::P2)
    } else {
        None
    };
    let generic = cubic.classify(p)?.class;
    match hard {
        Some(cls) if cls == generic => Ok(cls),
        _ => Err(Error::InternalInconsistency(format!(
            "Padovan systems give {hard:?}, generic classifier gives {generic:?} at p = {m}"
        ))),
    }
}

/// Whether `p = x^2 + 23y^2` for integers `x, y >= 0`.
pub fn represented_by_x2_23y2(p: u64) -> bool {
    let mut y = 0u64;
    while 23 * y * y <= p {
        let rest = p - 23 * y * y;
        let x = rest.sqrt();
        if x * x == rest {
            return true;
        }
        y += 1;
    }
    false
}

/// The class predicted by the splitting of `p` in the ring class field of
/// discriminant -23: `P2` when `(p/23) = -1`, otherwise `P1` or `P3`
/// according to representability by `x^2 + 23y^2`.
pub fn padovan_via_forms(p: Prime) -> Result<S3Class> {
    let m = p.get();
    if m == 23 {
        return Err(Error::RamifiedPrime(23));
    }
    let q23 = Prime::new(23)?;
    Ok(match arith::legendre_i64((m % 23) as i64, q23)? {
        -1 => S3Class::P2,
        _ if represented_by_x2_23y2(m) => S3Class::P1,
        _ => S3Class::P3,
    })
}

/// Everything known about one prime for a given polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeVerdict {
    pub p: u64,
    pub ramified: bool,
    pub cycle_type: Option<CycleType>,
    pub split: Option<bool>,
    /// Present for quadratics.
    pub quad: Option<QuadLabel>,
    /// Present for cubics `X^3 + uX + v` with Galois group `S_3`.
    pub s3: Option<S3Class>,
}

/// Per-prime classification that picks the quadratic or cubic classifier by shape.
#[derive(Debug, Clone)]
pub struct Classifier {
    base: PolyClassifier,
    quad: Option<(BigInt, BigInt)>,
    cubic: Option<DepressedCubic>,
}

impl Classifier {
    pub fn new(c: IntPoly) -> Result<Self> {
        let base = PolyClassifier::new(c)?;
        let c = base.poly();
        let quad = (c.degree() == Some(2)).then(|| (-c.coeff(1), c.coeff(0)));
        let cubic = if c.degree() == Some(3) && c.coeff(2).is_zero() {
            match (i64::try_from(&c.coeff(1)), i64::try_from(&c.coeff(0))) {
                (Ok(u), Ok(v)) => DepressedCubic::new(u, v).ok(),
                _ => None,
            }
        } else {
            None
        };
        Ok(Classifier { base, quad, cubic })
    }

    pub fn poly_classifier(&self) -> &PolyClassifier {
        &self.base
    }

    pub fn verdict(&self, p: Prime) -> Result<PrimeVerdict> {
        let quad = match &self.quad {
            Some((s, pi)) => Some(quad_classify(s, pi, p)?.label),
            None => None,
        };
        if self.base.is_ramified(p) {
            return Ok(PrimeVerdict {
                p: p.get(),
                ramified: true,
                cycle_type: None,
                split: None,
                quad,
                s3: None,
            });
        }
        let s3 = match &self.cubic {
            Some(cubic) => Some(cubic.classify(p)?.class),
            None => None,
        };
        Ok(PrimeVerdict {
            p: p.get(),
            ramified: false,
            cycle_type: Some(self.base.cycle_type(p)?),
            split: Some(self.base.is_totally_split(p)?),
            quad,
            s3,
        })
    }
}

/// Verdicts for the primes in `[lo, hi)`, in ascending order.
pub fn classify_range(
    c: &IntPoly,
    lo: u64,
    hi: u64,
    jobs: Option<usize>,
) -> Result<Vec<PrimeVerdict>> {
    if hi > MAX_SCAN_PMAX {
        return Err(Error::CapExceeded {
            what: "classification range",
            requested: hi,
            cap: MAX_SCAN_PMAX,
        });
    }
    let classifier = Classifier::new(c.clone())?;
    let primes = arith::primes_in_range(lo, hi);
    with_jobs(jobs, || {
        primes
            .par_iter()
            .map(|&p| classifier.verdict(p))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Runs `f` on a dedicated pool when `jobs` is set, on the global pool otherwise.
pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}"))),
    }
}

/// Perrin term `P_n mod n` with `P = 3, 0, 2, ...`, on fixed-size arrays.
pub fn perrin_mod(n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let m = n as u128;
    // Elements of Z/n[X]/(X^3 - X - 1) as [c0, c1, c2].
    let mul = |x: [u128; 3], y: [u128; 3]| -> [u128; 3] {
        let mut t = [0u128; 5];
        for i in 0..3 {
            for j in 0..3 {
                t[i + j] = (t[i + j] + x[i] * y[j]) % m;
            }
        }
        // X^4 = X^2 + X, X^3 = X + 1.
        let (t3, t4) = (t[3], t[4]);
        [(t[0] + t3) % m, (t[1] + t3 + t4) % m, (t[2] + t4) % m]
    };
    let mut acc = [1u128, 0, 0];
    let x = [0u128, 1, 0];
    for i in (0..64 - n.leading_zeros()).rev() {
        acc = mul(acc, acc);
        if (n >> i) & 1 == 1 {
            acc = mul(acc, x);
        }
    }
    // P_n = R_n{P} = 3 c0 + 0 c1 + 2 c2.
    ((3 * acc[0] + 2 * acc[2]) % m) as u64
}

/// Composite `n <= limit` dividing the Perrin number `P_n`. Along the way
/// every prime `n` is checked to divide `P_n`.
pub fn perrin_pseudoprime_scan(limit: u64, jobs: Option<usize>) -> Result<Vec<u64>> {
    if limit > MAX_PERRIN_LIMIT {
        return Err(Error::CapExceeded {
            what: "Perrin scan limit",
            requested: limit,
            cap: MAX_PERRIN_LIMIT,
        });
    }
    let hits: Vec<(u64, bool)> = with_jobs(jobs, || {
        (2..=limit)
            .into_par_iter()
            .map(|n| (n, perrin_mod(n) == 0))
            .filter(|&(n, divides)| divides || arith::is_prime(n))
            .collect()
    })?;
    let mut out = Vec::new();
    for (n, divides) in hits {
        let prime = arith::is_prime(n);
        if prime && !divides {
            return Err(Error::InternalInconsistency(format!(
                "prime {n} does not divide its Perrin number"
            )));
        }
        if !prime {
            out.push(n);
        }
    }
    Ok(out)
}

/// Expected class sizes for a density scan, as subsets of a group of the given order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedClasses {
    pub group_order: u64,
    pub class_sizes: BTreeMap<CycleType, u64>,
}

impl ExpectedClasses {
    pub fn new(group_order: u64, class_sizes: BTreeMap<CycleType, u64>) -> Result<Self> {
        if group_order == 0 {
            return Err(Error::InvalidInput("group order must be positive".into()));
        }
        let total: u64 = class_sizes.values().sum();
        if total > group_order {
            return Err(Error::InvalidInput(format!(
                "class sizes add up to {total}, more than the group order {group_order}"
            )));
        }
        Ok(ExpectedClasses {
            group_order,
            class_sizes,
        })
    }

    pub fn density(&self, ct: &CycleType) -> f64 {
        self.class_sizes.get(ct).copied().unwrap_or(0) as f64 / self.group_order as f64
    }
}

/// One row of a scan summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub cycle_type: CycleType,
    pub count: u64,
    pub density: f64,
    pub expected: Option<f64>,
    pub deviation: Option<f64>,
}

/// Cycle-type statistics over the primes `p <= pmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub polynomial: IntPoly,
    pub pmin: u64,
    pub pmax: u64,
    /// Unramified primes classified.
    pub primes_scanned: u64,
    pub ramified: Vec<u64>,
    /// Unramified primes with `C` totally split, in order.
    pub split_primes: Vec<u64>,
    pub counts: BTreeMap<CycleType, u64>,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn density(&self, ct: &CycleType) -> f64 {
        if self.primes_scanned == 0 {
            return 0.0;
        }
        self.counts.get(ct).copied().unwrap_or(0) as f64 / self.primes_scanned as f64
    }

    /// Largest deviation from the expected densities, if any were given.
    pub fn max_deviation(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.deviation)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Header `cycle_type,count,density,expected,deviation`, one row per type.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Classifies every prime `p <= pmax` by cycle type. Work is split across
/// threads but results are merged in prime order.
pub fn chebotarev_scan(
    c: &IntPoly,
    pmax: u64,
    expected: Option<&ExpectedClasses>,
    jobs: Option<usize>,
) -> Result<ScanReport> {
    if pmax < 100 {
        return Err(Error::InvalidInput(format!(
            "pmax must be at least 100, got {pmax}"
        )));
    }
    if pmax > MAX_SCAN_PMAX {
        return Err(Error::CapExceeded {
            what: "scan pmax",
            requested: pmax,
            cap: MAX_SCAN_PMAX,
        });
    }
    let classifier = PolyClassifier::new(c.clone())?;
    let primes = arith::primes_in_range(2, pmax + 1);
    let types: Vec<(Prime, Option<CycleType>)> = with_jobs(jobs, || {
        primes
            .par_iter()
            .map(|&p| {
                if classifier.is_ramified(p) {
                    Ok((p, None))
                } else {
                    classifier.cycle_type(p).map(|ct| (p, Some(ct)))
                }
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
    let mut ramified = Vec::new();
    let mut split_primes = Vec::new();
    for (p, ct) in types {
        match ct {
            None => ramified.push(p.get()),
            Some(ct) => {
                if ct.is_identity() {
                    split_primes.push(p.get());
                }
                *counts.entry(ct).or_default() += 1;
            }
        }
    }
    let primes_scanned: u64 = counts.values().sum();

    let mut keys: Vec<CycleType> = counts.keys().cloned().collect();
    if let Some(e) = expected {
        keys.extend(e.class_sizes.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    let rows = keys
        .into_iter()
        .map(|ct| {
            let count = counts.get(&ct).copied().unwrap_or(0);
            let density = if primes_scanned == 0 {
                0.0
            } else {
                count as f64 / primes_scanned as f64
            };
            let exp = expected.map(|e| e.density(&ct));
            ScanRow {
                cycle_type: ct,
                count,
                density,
                expected: exp,
                deviation: exp.map(|x| (density - x).abs()),
            }
        })
        .collect();

    Ok(ScanReport {
        polynomial: c.clone(),
        pmin: 2,
        pmax,
        primes_scanned,
        ramified,
        split_primes,
        counts,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{factor_full, RngSeed};
    use crate::recurrence::LinRec;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn trinks() -> IntPoly {
        ip(&[3, -7, 0, 0, 0, 0, 0, 1])
    }

    fn padovan_poly() -> IntPoly {
        ip(&[-1, -1, 0, 1])
    }

    #[test]
    fn cycle_type_text_forms() {
        assert_eq!(ct("1^3 2^2").degrees(), &[1, 1, 1, 2, 2]);
        assert_eq!(ct("2,1,1,2,1"), ct("1^3 2^2"));
        assert_eq!(ct("2^2*1^3").to_string(), "1^3 2^2");
        assert_eq!(ct("1 2 4").to_string(), "1 2 4");
        assert_eq!(ct("7").order(), 7);
        assert_eq!(ct("1 2 4").order(), 4);
        assert_eq!(ct("1^3 2^2").degree(), 7);
        assert!("".parse::<CycleType>().is_err());
        assert!("0 1".parse::<CycleType>().is_err());
        assert!("a".parse::<CycleType>().is_err());
        let json = serde_json::to_string(&ct("1 2")).unwrap();
        assert_eq!(json, "\"1 2\"");
        assert_eq!(serde_json::from_str::<CycleType>(&json).unwrap(), ct("1 2"));
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(
            cycle_type(&trinks(), prime(1879)).unwrap(),
            CycleType::identity(7)
        );
        assert_eq!(cycle_type(&ip(&[-1, -1, 1]), prime(11)).unwrap(), ct("1 1"));
        assert_eq!(cycle_type(&padovan_poly(), prime(2)).unwrap(), ct("3"));
        assert_eq!(
            cycle_type(&ip(&[-1, -1, 1]), prime(5)),
            Err(Error::RamifiedPrime(5))
        );
        assert_eq!(
            cycle_type(&trinks(), prime(3)),
            Err(Error::RamifiedPrime(3))
        );
        assert_eq!(
            cycle_type(&trinks(), prime(7)),
            Err(Error::RamifiedPrime(7))
        );
        assert!(matches!(
            PolyClassifier::new(ip(&[1, 2, 1])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn totally_split_examples() {
        assert!(is_totally_split(&trinks(), prime(1879)).unwrap());
        assert!(!is_totally_split(&trinks(), prime(1877)).unwrap());
        assert!(is_totally_split(&padovan_poly(), prime(59)).unwrap());
        assert!(!is_totally_split(&padovan_poly(), prime(2)).unwrap());
    }

    #[test]
    fn factorization_oracle_on_examples() {
        let r = factor_full(&trinks().reduce(1877).unwrap(), RngSeed(0)).unwrap();
        assert!(!r.is_totally_split());
        let r = factor_full(&padovan_poly().reduce(59).unwrap(), RngSeed(0)).unwrap();
        assert!(r.is_totally_split());
    }

    #[test]
    fn quad_examples() {
        let (s, pi) = (BigInt::from(1), BigInt::from(-1));
        let v = quad_classify(&s, &pi, prime(11)).unwrap();
        assert_eq!(v.label, QuadLabel::Split);
        assert_eq!(v.predicted_form, Some(IntPoly::x()));
        let v = quad_classify(&s, &pi, prime(7)).unwrap();
        assert_eq!(v.label, QuadLabel::Inert);
        assert_eq!(v.predicted_form, Some(ip(&[1, -1])));
        let v = quad_classify(&s, &pi, prime(5)).unwrap();
        assert_eq!(v.label, QuadLabel::Ramified);
        assert_eq!(v.predicted_form, Some(ip(&[3])));
        // Fibonacci at 2: X^2 + X + 1 is irreducible mod 2.
        assert_eq!(
            quad_classify(&s, &pi, prime(2)).unwrap().label,
            QuadLabel::Inert
        );
        assert_eq!(
            quad_classify(&BigInt::from(2), &BigInt::from(1), prime(7)),
            Err(Error::DegenerateQuadratic)
        );
    }

    #[test]
    fn quad_form_predicts_terms() {
        // Every (s, π) with small entries, every prime below 200 including
        // ramified ones, against direct modular evaluation.
        for s in -6i64..=6 {
            for pi in -6i64..=6 {
                if s * s == 4 * pi {
                    continue;
                }
                let rec = LinRec::from_i64s(&[pi, -s, 1], &[4, -9]).unwrap();
                for p in arith::primes_in_range(2, 200) {
                    let v = quad_classify(&BigInt::from(s), &BigInt::from(pi), p).unwrap();
                    let form = v.predicted_form.unwrap();
                    let init = rec.initials_mod(p.get());
                    let predicted =
                        poly::lucas_apply_mod(&form.reduce(p.get()).unwrap(), |k| init[k]);
                    assert_eq!(
                        rec.term_mod_u64(p.get(), p.get()).unwrap(),
                        predicted,
                        "s={s} π={pi} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn s3_examples() {
        assert_eq!(s3_classify(-1, -1, prime(59)).unwrap(), S3Class::P1);
        assert_eq!(s3_classify(-1, -1, prime(5)).unwrap(), S3Class::P2);
        assert_eq!(s3_classify(-1, -1, prime(2)).unwrap(), S3Class::P3);
        assert_eq!(
            s3_classify(-1, -1, prime(23)),
            Err(Error::RamifiedPrime(23))
        );
        assert_eq!(
            s3_class_partial_via_symbol(-1, -1, prime(5)).unwrap(),
            P2Symbol::IsP2
        );
        assert_eq!(
            s3_class_partial_via_symbol(-1, -1, prime(59)).unwrap(),
            P2Symbol::NotP2
        );
        // -23 ≡ 1 (mod 3) is a square.
        assert_eq!(
            s3_class_partial_via_symbol(-1, -1, prime(3)).unwrap(),
            P2Symbol::NotP2
        );
        assert_eq!(
            s3_class_partial_via_symbol(-1, -1, prime(2)),
            Err(Error::EvenPrime(2))
        );
    }

    #[test]
    fn s3_rejects_bad_cubics() {
        // x^3 - 7x + 6 = (x - 1)(x - 2)(x + 3)
        assert!(matches!(
            DepressedCubic::new(-7, 6),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            DepressedCubic::new(5, 0),
            Err(Error::InvalidInput(_))
        ));
        // x^3 - 3x + 1 is irreducible with discriminant 81.
        assert!(matches!(
            DepressedCubic::new(-3, 1),
            Err(Error::InvalidInput(_))
        ));
        assert!(DepressedCubic::new(-1, -1).is_ok());
        assert!(DepressedCubic::new(-2, 5).is_ok());
    }

    #[test]
    fn integer_root_search_matches_enumeration() {
        for u in -40i64..=40 {
            for v in -40i64..=40 {
                let brute = (-100i64..=100).any(|x| x * x * x + u * x + v == 0);
                assert_eq!(has_integer_root(u, v), brute, "u={u} v={v}");
            }
        }
        // Root far from zero: (x - 1000)(x^2 + 1000x + 1) = x^3 - 999999x - 1000
        assert!(has_integer_root(-999_999, -1000));
        assert!(!has_integer_root(-999_999, -1001));
    }

    #[test]
    fn padovan_examples() {
        assert_eq!(padovan_classify(prime(23)), Err(Error::RamifiedPrime(23)));
        assert_eq!(padovan_classify(prime(59)).unwrap(), S3Class::P1);
        assert_eq!(padovan_classify(prime(7)).unwrap(), S3Class::P2);
        assert_eq!(padovan_via_forms(prime(59)).unwrap(), S3Class::P1);
        assert_eq!(padovan_via_forms(prime(5)).unwrap(), S3Class::P2);
        assert_eq!(padovan_via_forms(prime(2)).unwrap(), S3Class::P3);
    }

    #[test]
    fn representation_examples() {
        assert!(represented_by_x2_23y2(59));
        assert!(represented_by_x2_23y2(101)); // 9 + 23 * 4
        assert!(!represented_by_x2_23y2(2));
        assert!(!represented_by_x2_23y2(3));
        for p in arith::primes_in_range(2, 2000) {
            let p = p.get();
            let brute = (0..50u64).any(|x| (0..10u64).any(|y| x * x + 23 * y * y == p));
            assert_eq!(represented_by_x2_23y2(p), brute, "p = {p}");
        }
    }

    #[test]
    fn perrin_values() {
        let rec = LinRec::perrin();
        for n in 1..500u64 {
            assert_eq!(
                perrin_mod(n),
                rec.term_mod_u64(n, n.max(2)).unwrap() % n,
                "n = {n}"
            );
        }
        assert_eq!(
            perrin_pseudoprime_scan(10, None).unwrap(),
            Vec::<u64>::new()
        );
        assert_eq!(
            perrin_pseudoprime_scan(100_000, None).unwrap(),
            Vec::<u64>::new()
        );
        assert_eq!(perrin_mod(271_441), 0);
        assert!(matches!(
            perrin_pseudoprime_scan(MAX_PERRIN_LIMIT + 1, None),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn trinks_split_primes_below_ten_thousand() {
        let r = chebotarev_scan(&trinks(), 10_000, None, Some(2)).unwrap();
        assert_eq!(r.split_primes, vec![1879, 5381, 5783, 8819, 8893]);
        assert_eq!(r.ramified, vec![3, 7]);
        assert_eq!(r.counts[&CycleType::identity(7)], 5);
        // Only types present in PSL(2, 7) occur.
        for k in r.counts.keys() {
            assert!(
                ["1^7", "7", "1^3 2^2", "1 2 4", "1 3^2"].contains(&k.to_string().as_str()),
                "unexpected type {k}"
            );
        }
    }

    #[test]
    fn scan_counts_and_expectations() {
        let sizes: BTreeMap<CycleType, u64> = [(ct("1^2"), 1), (ct("2"), 1)].into_iter().collect();
        let exp = ExpectedClasses::new(2, sizes).unwrap();
        let r = chebotarev_scan(&ip(&[-1, -1, 1]), 10_000, Some(&exp), None).unwrap();
        assert_eq!(r.ramified, vec![5]);
        assert_eq!(
            r.primes_scanned + 1,
            arith::primes_in_range(2, 10_001).len() as u64
        );
        assert!(r.max_deviation().unwrap() < 0.02);
        assert!((r.density(&ct("1 1")) - 0.5).abs() < 0.02);

        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("cycle_type,count,density,expected,deviation\n1^2,"));
        let back: ScanReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);

        assert!(chebotarev_scan(&ip(&[-1, -1, 1]), 99, None, None).is_err());
        assert!(ExpectedClasses::new(2, [(ct("2"), 3)].into_iter().collect()).is_err());
    }

    #[test]
    fn verdicts_pick_the_right_classifier() {
        let v = classify_range(&padovan_poly(), 59, 60, None).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].s3, Some(S3Class::P1));
        assert_eq!(v[0].split, Some(true));
        let fib = Classifier::new(ip(&[-1, -1, 1])).unwrap();
        let r = fib.verdict(prime(5)).unwrap();
        assert!(r.ramified);
        assert_eq!(r.quad, Some(QuadLabel::Ramified));
        assert_eq!(r.cycle_type, None);
        assert_eq!(fib.verdict(prime(7)).unwrap().quad, Some(QuadLabel::Inert));
        let seven = classify_range(&trinks(), 2, 100, Some(2)).unwrap();
        assert!(seven.iter().all(|v| v.quad.is_none() && v.s3.is_none()));
        assert_eq!(seven.iter().filter(|v| v.ramified).count(), 2);
        // A cubic with an x^2 term gets a cycle type but no S3 label.
        let r = Classifier::new(ip(&[1, 0, 1, 1]))
            .unwrap()
            .verdict(prime(11))
            .unwrap();
        assert!(r.s3.is_none() && r.cycle_type.is_some());
    }

    #[test]
    fn scan_is_independent_of_worker_count() {
        let one = chebotarev_scan(&trinks(), 3000, None, Some(1)).unwrap();
        let four = chebotarev_scan(&trinks(), 3000, None, Some(4)).unwrap();
        assert_eq!(one, four);
        assert_eq!(
            perrin_pseudoprime_scan(20_000, Some(1)).unwrap(),
            perrin_pseudoprime_scan(20_000, Some(3)).unwrap()
        );
    }
}
