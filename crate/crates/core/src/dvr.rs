//! Arithmetic in a discrete valuation ring `O` (either `F_p[[t]]` or `Z_p`)
//! and its fraction field `F`.
//!
//! Elements built from text or from integer data are *exact*: Laurent
//! polynomials over `F_p`, or rationals `p^v * n` with `n` an integer. Exact
//! elements are closed under `+`, `-` and `*`. Only inversion of a non-monomial
//! unit introduces truncation, after which an element carries a relative
//! precision (the number of known uniformizer digits).
//!
//! [`ResidueRing`] models the finite quotient `O / pi^K`. The normal form
//! algorithms in [`crate::linalg`] run there, because every quotient
//! computation they perform only depends on finitely many digits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DvrError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("element is not integral (valuation {0})")]
    NotIntegral(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    /// `F_p[[t]]`, carry-free digit arithmetic.
    Series,
    /// `Z_p`, digits with carries.
    Padic,
}

impl RingKind {
    pub fn symbol(self) -> char {
        match self {
            RingKind::Series => 't',
            RingKind::Padic => 'p',
        }
    }
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Series => write!(f, "series"),
            RingKind::Padic => write!(f, "padic"),
        }
    }
}

pub const DEFAULT_PRECISION: u32 = 24;

/// Residue characteristic, ring flavour and default working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingConfig {
    p: u32,
    kind: RingKind,
    precision: u32,
}

impl RingConfig {
    pub fn new(p: u32, kind: RingKind, precision: u32) -> Result<Self, DvrError> {
        if !is_prime(p) {
            return Err(DvrError::InvalidConfig(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(DvrError::InvalidConfig("precision must be at least 1".into()));
        }
        // keeps residue products inside u64
        if p >= 1 << 31 {
            return Err(DvrError::InvalidConfig(format!("prime {p} too large")));
        }
        Ok(Self { p, kind, precision })
    }

    /// `F_p[[t]]` at the default precision. Panics if `p` is not prime.
    pub fn series(p: u32) -> Self {
        Self::new(p, RingKind::Series, DEFAULT_PRECISION).expect("invalid prime")
    }

    /// `Z_p` at the default precision. Panics if `p` is not prime.
    pub fn padic(p: u32) -> Self {
        Self::new(p, RingKind::Padic, DEFAULT_PRECISION).expect("invalid prime")
    }

    pub fn with_precision(self, precision: u32) -> Self {
        Self { precision: precision.max(1), ..self }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub(crate) fn residue(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // Fermat; p is prime and a != 0 mod p
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// An element of the integral model ring `R`: `F_p[t]` (coefficients low to
/// high, no trailing zeros) or `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Raw {
    Poly(Vec<u32>),
    Int(BigInt),
}

impl Raw {
    pub(crate) fn zero(kind: RingKind) -> Self {
        match kind {
            RingKind::Series => Raw::Poly(Vec::new()),
            RingKind::Padic => Raw::Int(BigInt::zero()),
        }
    }

    pub(crate) fn from_i64(ring: &RingConfig, n: i64) -> Self {
        match ring.kind {
            RingKind::Series => Raw::Poly(trim(vec![ring.residue(n)])),
            RingKind::Padic => Raw::Int(BigInt::from(n)),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Raw::Poly(c) => c.is_empty(),
            Raw::Int(n) => n.is_zero(),
        }
    }

    /// Uniformizer-adic valuation; `None` for zero.
    pub(crate) fn valuation(&self, p: u32) -> Option<u32> {
        match self {
            Raw::Poly(c) => c.iter().position(|&x| x != 0).map(|v| v as u32),
            Raw::Int(n) => {
                if n.is_zero() {
                    return None;
                }
                let pb = BigInt::from(p);
                let mut v = 0;
                let mut m = n.clone();
                loop {
                    let (q, r) = m.div_rem(&pb);
                    if !r.is_zero() {
                        return Some(v);
                    }
                    m = q;
                    v += 1;
                }
            }
        }
    }

    /// Lowest digit (residue mod pi).
    pub(crate) fn low_digit(&self, p: u32) -> u32 {
        match self {
            Raw::Poly(c) => c.first().copied().unwrap_or(0),
            Raw::Int(n) => n.mod_floor(&BigInt::from(p)).to_u32().unwrap(),
        }
    }

    pub(crate) fn add(&self, other: &Raw, p: u32) -> Raw {
        match (self, other) {
            (Raw::Poly(a), Raw::Poly(b)) => {
                let n = a.len().max(b.len());
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let x = a.get(i).copied().unwrap_or(0) as u64 + b.get(i).copied().unwrap_or(0) as u64;
                    out.push((x % p as u64) as u32);
                }
                Raw::Poly(trim(out))
            }
            (Raw::Int(a), Raw::Int(b)) => Raw::Int(a + b),
            _ => panic!("mixed ring kinds"),
        }
    }

    pub(crate) fn neg(&self, p: u32) -> Raw {
        match self {
            Raw::Poly(a) => Raw::Poly(a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect()),
            Raw::Int(a) => Raw::Int(-a),
        }
    }

    pub(crate) fn sub(&self, other: &Raw, p: u32) -> Raw {
        self.add(&other.neg(p), p)
    }

    pub(crate) fn mul(&self, other: &Raw, p: u32) -> Raw {
        match (self, other) {
            (Raw::Poly(a), Raw::Poly(b)) => {
                if a.is_empty() || b.is_empty() {
                    return Raw::Poly(Vec::new());
                }
                let pm = p as u64;
                let mut out = vec![0u64; a.len() + b.len() - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        out[i + j] = (out[i + j] + x as u64 * y as u64) % pm;
                    }
                }
                Raw::Poly(trim(out.into_iter().map(|x| x as u32).collect()))
            }
            (Raw::Int(a), Raw::Int(b)) => Raw::Int(a * b),
            _ => panic!("mixed ring kinds"),
        }
    }

    /// Multiply by `pi^k`.
    pub(crate) fn shift_up(&self, k: u32, p: u32) -> Raw {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        match self {
            Raw::Poly(a) => {
                let mut out = vec![0u32; k as usize];
                out.extend_from_slice(a);
                Raw::Poly(out)
            }
            Raw::Int(a) => Raw::Int(a * BigInt::from(p).pow(k)),
        }
    }

    /// Exact division by `pi^k`; the caller guarantees divisibility.
    pub(crate) fn shift_down(&self, k: u32, p: u32) -> Raw {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        match self {
            Raw::Poly(a) => {
                debug_assert!(a[..k as usize].iter().all(|&x| x == 0));
                Raw::Poly(a[k as usize..].to_vec())
            }
            Raw::Int(a) => {
                let m = BigInt::from(p).pow(k);
                debug_assert!((a % &m).is_zero());
                Raw::Int(a / m)
            }
        }
    }

    /// Canonical residue modulo `pi^k`: first `k` coefficients, or the
    /// representative in `[0, p^k)`.
    pub(crate) fn truncate(&self, k: u32, p: u32) -> Raw {
        match self {
            Raw::Poly(a) => Raw::Poly(trim(a.iter().take(k as usize).copied().collect())),
            Raw::Int(a) => Raw::Int(a.mod_floor(&BigInt::from(p).pow(k))),
        }
    }

    /// Exact division in `R`, `None` if `other` does not divide `self`.
    pub(crate) fn exact_div(&self, other: &Raw, p: u32) -> Option<Raw> {
        match (self, other) {
            (Raw::Poly(a), Raw::Poly(b)) => {
                if b.is_empty() {
                    return None;
                }
                if a.is_empty() {
                    return Some(Raw::Poly(Vec::new()));
                }
                if a.len() < b.len() {
                    return None;
                }
                let pm = p as u64;
                let lead_inv = inv_mod_p(*b.last().unwrap(), p) as u64;
                let mut rem: Vec<u64> = a.iter().map(|&x| x as u64).collect();
                let mut quot = vec![0u64; a.len() - b.len() + 1];
                for shift in (0..quot.len()).rev() {
                    let top = rem[shift + b.len() - 1] % pm;
                    if top == 0 {
                        continue;
                    }
                    let q = top * lead_inv % pm;
                    quot[shift] = q;
                    for (j, &bj) in b.iter().enumerate() {
                        let sub = q * bj as u64 % pm;
                        rem[shift + j] = (rem[shift + j] + pm - sub) % pm;
                    }
                }
                if rem.iter().any(|&x| x % pm != 0) {
                    return None;
                }
                Some(Raw::Poly(trim(quot.into_iter().map(|x| x as u32).collect())))
            }
            (Raw::Int(a), Raw::Int(b)) => {
                if b.is_zero() {
                    return None;
                }
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(Raw::Int(q))
            }
            _ => panic!("mixed ring kinds"),
        }
    }

    /// Inverse of a unit modulo `pi^k`, as a canonical residue.
    pub(crate) fn unit_inverse(&self, k: u32, p: u32) -> Raw {
        match self {
            Raw::Poly(a) => {
                let pm = p as u64;
                let a0 = a[0];
                debug_assert!(a0 != 0);
                let inv0 = inv_mod_p(a0, p) as u64;
                let k = k as usize;
                let mut out = vec![0u64; k];
                out[0] = inv0;
                for n in 1..k {
                    let mut s = 0u64;
                    for i in 1..=n.min(a.len() - 1) {
                        s = (s + a[i] as u64 * out[n - i]) % pm;
                    }
                    out[n] = (pm - s) % pm * inv0 % pm;
                }
                Raw::Poly(trim(out.into_iter().map(|x| x as u32).collect()))
            }
            Raw::Int(a) => {
                let m = BigInt::from(p).pow(k);
                let e = a.mod_floor(&m).extended_gcd(&m);
                debug_assert!(e.gcd.is_one());
                Raw::Int(e.x.mod_floor(&m))
            }
        }
    }

    /// Digits `0..k` (coefficients, or base-`p` digits of the residue mod `p^k`).
    pub(crate) fn digits(&self, k: u32, p: u32) -> Vec<u32> {
        match self {
            Raw::Poly(a) => (0..k as usize).map(|i| a.get(i).copied().unwrap_or(0)).collect(),
            Raw::Int(a) => {
                let pb = BigInt::from(p);
                let mut m = a.mod_floor(&pb.pow(k));
                let mut out = Vec::with_capacity(k as usize);
                for _ in 0..k {
                    let (q, r) = m.div_rem(&pb);
                    out.push(r.to_u32().unwrap());
                    m = q;
                }
                out
            }
        }
    }

    /// True for `c` (series) or `+-1` (p-adic): units whose inverse is exact.
    pub(crate) fn is_monomial_unit(&self) -> bool {
        match self {
            Raw::Poly(a) => a.len() == 1,
            Raw::Int(a) => a.abs().is_one(),
        }
    }
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Valuation with `+infinity` for the exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Exact,
    /// Number of known uniformizer digits, counted from the valuation.
    Known(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Nonzero {
        val: i64,
        /// valuation 0; a canonical residue mod `pi^prec` when `prec` is set
        unit: Raw,
        prec: Option<u32>,
    },
}

/// An element of the fraction field `F`.
///
/// The exact zero is the only representable zero: an operation whose result
/// would have no known nonzero digit fails with
/// [`DvrError::PrecisionExhausted`] instead of producing an inexact zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    ring: RingConfig,
    repr: Repr,
}

impl FieldElement {
    pub fn zero(ring: RingConfig) -> Self {
        Self { ring, repr: Repr::Zero }
    }

    pub fn one(ring: RingConfig) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: RingConfig, n: i64) -> Self {
        Self::from_raw(ring, 0, Raw::from_i64(&ring, n))
    }

    /// `c * pi^e`.
    pub fn monomial(ring: RingConfig, c: i64, e: i64) -> Self {
        Self::from_raw(ring, e, Raw::from_i64(&ring, c))
    }

    /// The uniformizer `t` (or `p`).
    pub fn uniformizer(ring: RingConfig) -> Self {
        Self::monomial(ring, 1, 1)
    }

    /// Sum of `c * pi^e` over the given terms, exact.
    pub fn from_terms(ring: RingConfig, terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Self::zero(ring), |acc, &(c, e)| {
            acc.add(&Self::monomial(ring, c, e)).expect("exact addition")
        })
    }

    /// Exact element `pi^shift * raw`, normalizing the valuation.
    pub(crate) fn from_raw(ring: RingConfig, shift: i64, raw: Raw) -> Self {
        match raw.valuation(ring.p) {
            None => Self::zero(ring),
            Some(k) => Self {
                ring,
                repr: Repr::Nonzero { val: shift + k as i64, unit: raw.shift_down(k, ring.p), prec: None },
            },
        }
    }

    /// Element known modulo `pi^abs_prec`: `pi^shift * raw + O(pi^abs_prec)`.
    pub(crate) fn from_raw_truncated(ring: RingConfig, shift: i64, raw: Raw, abs_prec: i64) -> Result<Self, DvrError> {
        let rel = abs_prec - shift;
        if rel <= 0 {
            return Err(DvrError::PrecisionExhausted("no known digits".into()));
        }
        let t = raw.truncate(rel as u32, ring.p);
        match t.valuation(ring.p) {
            None => Err(DvrError::PrecisionExhausted(format!("all digits below {} vanish", abs_prec))),
            Some(k) => Ok(Self {
                ring,
                repr: Repr::Nonzero {
                    val: shift + k as i64,
                    unit: t.shift_down(k, ring.p),
                    prec: Some(rel as u32 - k),
                },
            }),
        }
    }

    pub fn ring(&self) -> RingConfig {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Zero => true,
            Repr::Nonzero { prec, .. } => prec.is_none(),
        }
    }

    pub fn precision(&self) -> Precision {
        match &self.repr {
            Repr::Nonzero { prec: Some(n), .. } => Precision::Known(*n),
            _ => Precision::Exact,
        }
    }

    /// Absolute precision: the element is known modulo `pi^n`. `None` if exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Nonzero { val, prec: Some(n), .. } => Some(val + *n as i64),
            _ => None,
        }
    }

    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinity,
            Repr::Nonzero { val, .. } => Valuation::Finite(*val),
        }
    }

    /// Valuation of a nonzero element; panics on zero.
    pub fn val(&self) -> i64 {
        self.valuation().finite().expect("valuation of zero")
    }

    pub fn is_integral(&self) -> bool {
        self.valuation() >= Valuation::Finite(0)
    }

    /// True for `c * pi^e` (series) or `+-p^e` (p-adic), the nonzero exact
    /// elements with exact inverse.
    pub fn is_monomial(&self) -> bool {
        match &self.repr {
            Repr::Nonzero { unit, prec: None, .. } => unit.is_monomial_unit(),
            _ => false,
        }
    }

    /// Digits of the unit part; `n` digits, padded with zeros for exact
    /// elements and truncated to the known digits otherwise.
    pub fn unit_digits(&self, n: u32) -> Vec<u32> {
        match &self.repr {
            Repr::Zero => Vec::new(),
            Repr::Nonzero { unit, prec, .. } => {
                let k = prec.map_or(n, |m| m.min(n));
                unit.digits(k, self.ring.p)
            }
        }
    }

    /// The coefficient of `pi^e` in the expansion, if known.
    pub fn digit(&self, e: i64) -> Option<u32> {
        match &self.repr {
            Repr::Zero => Some(0),
            Repr::Nonzero { val, unit, prec } => {
                if e < *val {
                    return Some(0);
                }
                let rel = (e - val) as u32;
                if let Some(n) = prec {
                    if rel >= *n {
                        return None;
                    }
                }
                Some(unit.digits(rel + 1, self.ring.p)[rel as usize])
            }
        }
    }

    /// Reduction modulo `pi`, defined on integral elements.
    pub fn residue(&self) -> Result<u32, DvrError> {
        match &self.repr {
            Repr::Zero => Ok(0),
            Repr::Nonzero { val, unit, .. } => match val.cmp(&0) {
                Ordering::Less => Err(DvrError::NotIntegral(*val)),
                Ordering::Greater => Ok(0),
                Ordering::Equal => Ok(unit.low_digit(self.ring.p)),
            },
        }
    }

    fn assert_same_ring(&self, other: &Self) {
        assert_eq!(self.ring, other.ring, "operands from different rings");
    }

    pub fn add(&self, other: &Self) -> Result<Self, DvrError> {
        self.assert_same_ring(other);
        let p = self.ring.p;
        let (va, ua) = match &self.repr {
            Repr::Zero => return Ok(other.clone()),
            Repr::Nonzero { val, unit, .. } => (*val, unit),
        };
        let (vb, ub) = match &other.repr {
            Repr::Zero => return Ok(self.clone()),
            Repr::Nonzero { val, unit, .. } => (*val, unit),
        };
        let v = va.min(vb);
        let sum = ua.shift_up((va - v) as u32, p).add(&ub.shift_up((vb - v) as u32, p), p);
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        match abs {
            None => Ok(Self::from_raw(self.ring, v, sum)),
            Some(a) => Self::from_raw_truncated(self.ring, v, sum, a),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Nonzero { val, unit, prec } => {
                let p = self.ring.p;
                let unit = match prec {
                    None => unit.neg(p),
                    Some(n) => unit.neg(p).truncate(*n, p),
                };
                Self { ring: self.ring, repr: Repr::Nonzero { val: *val, unit, prec: *prec } }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DvrError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let p = self.ring.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(self.ring),
            (
                Repr::Nonzero { val: va, unit: ua, prec: pa },
                Repr::Nonzero { val: vb, unit: ub, prec: pb },
            ) => {
                let prec = match (pa, pb) {
                    (None, None) => None,
                    (Some(a), None) | (None, Some(a)) => Some(*a),
                    (Some(a), Some(b)) => Some(*a.min(b)),
                };
                let mut unit = ua.mul(ub, p);
                if let Some(n) = prec {
                    unit = unit.truncate(n, p);
                }
                Self { ring: self.ring, repr: Repr::Nonzero { val: va + vb, unit, prec } }
            }
        }
    }

    /// Multiply by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Nonzero { val, unit, prec } => Self {
                ring: self.ring,
                repr: Repr::Nonzero { val: val + k, unit: unit.clone(), prec: *prec },
            },
        }
    }

    pub fn inv(&self) -> Result<Self, DvrError> {
        match &self.repr {
            Repr::Zero => Err(DvrError::DivisionByZero),
            Repr::Nonzero { val, unit, prec } => {
                let p = self.ring.p;
                if prec.is_none() && unit.is_monomial_unit() {
                    let unit = match unit {
                        Raw::Poly(a) => Raw::Poly(vec![inv_mod_p(a[0], p)]),
                        Raw::Int(a) => Raw::Int(a.clone()),
                    };
                    return Ok(Self { ring: self.ring, repr: Repr::Nonzero { val: -val, unit, prec: None } });
                }
                let n = prec.unwrap_or(self.ring.precision);
                Ok(Self {
                    ring: self.ring,
                    repr: Repr::Nonzero { val: -val, unit: unit.unit_inverse(n, p), prec: Some(n) },
                })
            }
        }
    }

    /// Exact quotient when it exists in the exact subring (`self / other`
    /// with no truncation); `None` otherwise.
    pub fn exact_div(&self, other: &Self) -> Option<Self> {
        self.assert_same_ring(other);
        match (&self.repr, &other.repr) {
            (_, Repr::Zero) => None,
            (Repr::Zero, _) => Some(self.clone()),
            (
                Repr::Nonzero { val: va, unit: ua, prec: None },
                Repr::Nonzero { val: vb, unit: ub, prec: None },
            ) => ua.exact_div(ub, self.ring.p).map(|q| Self::from_raw(self.ring, va - vb, q)),
            _ => None,
        }
    }

    /// `self / other`, exact where possible.
    pub fn div(&self, other: &Self) -> Result<Self, DvrError> {
        if other.is_zero() {
            return Err(DvrError::DivisionByZero);
        }
        if let Some(q) = self.exact_div(other) {
            return Ok(q);
        }
        Ok(self.mul(&other.inv()?))
    }

    /// Equality on all digits known for both operands.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.assert_same_ring(other);
        if self.is_exact() && other.is_exact() {
            return self == other;
        }
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let lo = match (self.valuation(), other.valuation()) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.min(b),
            (Valuation::Finite(a), _) | (_, Valuation::Finite(a)) => a,
            _ => return true,
        };
        (lo..abs).all(|e| self.digit(e) == other.digit(e))
    }

    /// The exact integral representative `pi^{val} * unit` as an element of
    /// the model ring, if the element is integral and exact.
    pub(crate) fn to_raw_integral(&self) -> Option<Raw> {
        match &self.repr {
            Repr::Zero => Some(Raw::zero(self.ring.kind)),
            Repr::Nonzero { val, unit, prec: None } if *val >= 0 => Some(unit.shift_up(*val as u32, self.ring.p)),
            _ => None,
        }
    }

    /// Representative of the class modulo `pi^k` of an integral element.
    /// Fails if the element is not known to that precision.
    pub(crate) fn to_residue(&self, k: u32) -> Result<Raw, DvrError> {
        let p = self.ring.p;
        match &self.repr {
            Repr::Zero => Ok(Raw::zero(self.ring.kind)),
            Repr::Nonzero { val, unit, prec } => {
                if *val < 0 {
                    return Err(DvrError::NotIntegral(*val));
                }
                if let Some(n) = prec {
                    if val + (*n as i64) < k as i64 {
                        return Err(DvrError::PrecisionExhausted(format!(
                            "entry known mod pi^{} but pi^{} required",
                            val + *n as i64,
                            k
                        )));
                    }
                }
                if *val >= k as i64 {
                    return Ok(Raw::zero(self.ring.kind));
                }
                Ok(unit.shift_up(*val as u32, p).truncate(k, p))
            }
        }
    }

    /// Parse the text syntax, e.g. `3*t^-2 + 1 + 2*t^5 + O(t^8)`.
    pub fn parse(ring: RingConfig, s: &str) -> Result<Self, DvrError> {
        parse_element(ring, s)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.ring.kind.symbol();
        let p = self.ring.p;
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Nonzero { val, unit, prec } => {
                let (negative, digits) = match (unit, prec) {
                    (Raw::Int(n), None) => {
                        let a = n.abs();
                        let len = digit_count(&a, p);
                        (n.sign() == Sign::Minus, Raw::Int(a).digits(len, p))
                    }
                    (Raw::Poly(c), None) => (false, c.clone()),
                    (_, Some(n)) => (false, unit.digits(*n, p)),
                };
                let mut terms = Vec::new();
                for (i, &d) in digits.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    terms.push(format_term(d, val + i as i64, sym));
                }
                let body = terms.join(" + ");
                if negative {
                    write!(f, "-({body})")?;
                } else {
                    write!(f, "{body}")?;
                }
                if let Some(n) = prec {
                    write!(f, " + O({sym}^{})", val + *n as i64)?;
                }
                Ok(())
            }
        }
    }
}

fn digit_count(a: &BigInt, p: u32) -> u32 {
    let pb = BigInt::from(p);
    let mut m = a.clone();
    let mut n = 0;
    while !m.is_zero() {
        m /= &pb;
        n += 1;
    }
    n
}

fn format_term(c: u32, e: i64, sym: char) -> String {
    match (c, e) {
        (c, 0) => format!("{c}"),
        (1, 1) => format!("{sym}"),
        (1, e) => format!("{sym}^{e}"),
        (c, 1) => format!("{c}*{sym}"),
        (c, e) => format!("{c}*{sym}^{e}"),
    }
}

fn parse_element(ring: RingConfig, s: &str) -> Result<FieldElement, DvrError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(DvrError::Parse("empty element".into()));
    }
    if let Some(inner) = s.strip_prefix("-(").and_then(|r| r.strip_suffix(')')) {
        return Ok(parse_element(ring, inner)?.neg());
    }
    let sym = ring.kind.symbol();
    // split into signed terms
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0;
    let mut prev_nonspace: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let is_sign = (ch == '+' || ch == '-') && depth == 0 && prev_nonspace != Some('^');
        if is_sign {
            if !cur.trim().is_empty() {
                terms.push((negative, std::mem::take(&mut cur)));
                negative = false;
            } else {
                cur.clear();
            }
            if ch == '-' {
                negative = !negative;
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_nonspace = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push((negative, cur));
    } else {
        return Err(DvrError::Parse(format!("dangling sign in '{s}'")));
    }

    let mut acc = FieldElement::zero(ring);
    let mut big_o: Option<i64> = None;
    for (neg, term) in terms {
        let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = term.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let e = parse_power(rest, sym)?;
            big_o = Some(big_o.map_or(e, |b: i64| b.min(e)));
            continue;
        }
        let (coef, exp) = parse_term(&term, sym)?;
        let coef = if neg { -coef } else { coef };
        acc = acc.add(&FieldElement::monomial(ring, coef, exp))?;
    }
    match big_o {
        None => Ok(acc),
        Some(a) => truncate_to(&acc, a),
    }
}

fn truncate_to(x: &FieldElement, abs: i64) -> Result<FieldElement, DvrError> {
    match &x.repr {
        Repr::Zero => Err(DvrError::PrecisionExhausted(format!("element is O(pi^{abs})"))),
        Repr::Nonzero { val, unit, .. } => {
            let cap = x.absolute_precision().map_or(abs, |a| a.min(abs));
            FieldElement::from_raw_truncated(x.ring, *val, unit.clone(), cap)
        }
    }
}

fn parse_power(s: &str, sym: char) -> Result<i64, DvrError> {
    let rest = s
        .strip_prefix(sym)
        .ok_or_else(|| DvrError::Parse(format!("expected '{sym}' in '{s}'")))?;
    if rest.is_empty() {
        return Ok(1);
    }
    let e = rest
        .strip_prefix('^')
        .ok_or_else(|| DvrError::Parse(format!("expected '^' in '{s}'")))?;
    e.parse::<i64>().map_err(|_| DvrError::Parse(format!("bad exponent in '{s}'")))
}

fn parse_term(term: &str, sym: char) -> Result<(i64, i64), DvrError> {
    if let Some((c, x)) = term.split_once('*') {
        let coef = c.parse::<i64>().map_err(|_| DvrError::Parse(format!("bad coefficient '{c}'")))?;
        Ok((coef, parse_power(x, sym)?))
    } else if term.starts_with(sym) {
        Ok((1, parse_power(term, sym)?))
    } else {
        let coef = term.parse::<i64>().map_err(|_| DvrError::Parse(format!("bad term '{term}'")))?;
        Ok((coef, 0))
    }
}

/// The finite ring `O / pi^K`, with elements stored as canonical residues.
#[derive(Debug, Clone)]
pub(crate) struct ResidueRing {
    pub(crate) ring: RingConfig,
    pub(crate) k: u32,
}

impl ResidueRing {
    pub(crate) fn new(ring: RingConfig, k: u32) -> Self {
        Self { ring, k: k.max(1) }
    }

    fn p(&self) -> u32 {
        self.ring.p
    }

    pub(crate) fn zero(&self) -> Raw {
        Raw::zero(self.ring.kind)
    }

    pub(crate) fn one(&self) -> Raw {
        Raw::from_i64(&self.ring, 1)
    }

    pub(crate) fn reduce(&self, x: &Raw) -> Raw {
        x.truncate(self.k, self.p())
    }

    pub(crate) fn sub(&self, a: &Raw, b: &Raw) -> Raw {
        self.reduce(&a.sub(b, self.p()))
    }

    pub(crate) fn mul(&self, a: &Raw, b: &Raw) -> Raw {
        self.reduce(&a.mul(b, self.p()))
    }

    /// Valuation, `None` when the residue is zero (valuation at least K).
    pub(crate) fn valuation(&self, a: &Raw) -> Option<u32> {
        a.valuation(self.p())
    }

    /// Split `a = pi^v * u` and return `(v, u^{-1} mod pi^K)`.
    pub(crate) fn split_unit_inverse(&self, a: &Raw) -> Option<(u32, Raw)> {
        let v = self.valuation(a)?;
        let u = a.shift_down(v, self.p());
        Some((v, u.unit_inverse(self.k, self.p())))
    }

    /// `a / pi^v` for `v <= valuation(a)`: some lift of the quotient.
    pub(crate) fn shift_down(&self, a: &Raw, v: u32) -> Raw {
        a.shift_down(v, self.p())
    }

    /// Digit-wise split `a = r + pi^e q` with `r` reduced mod `pi^e`.
    pub(crate) fn split_at(&self, a: &Raw, e: u32) -> (Raw, Raw) {
        let r = a.truncate(e, self.p());
        let q = a.sub(&r, self.p()).shift_down(e, self.p());
        (r, q)
    }

    pub(crate) fn to_element(&self, a: &Raw) -> FieldElement {
        FieldElement::from_raw(self.ring, 0, a.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> RingConfig {
        RingConfig::series(3)
    }

    #[test]
    fn add_monomials() {
        let r = s3();
        let x = FieldElement::from_terms(r, &[(1, 2), (1, 3)]);
        assert_eq!(x.valuation(), Valuation::Finite(2));
        assert_eq!(x.unit_digits(2), vec![1, 1]);
        assert_eq!(x.to_string(), "t^2 + t^3");
        assert_eq!(x.add(&FieldElement::zero(r)).unwrap(), x);
    }

    #[test]
    fn cancellation_exact_and_inexact() {
        let r = s3();
        let a = FieldElement::from_terms(r, &[(1, 0), (1, 1)]);
        let b = FieldElement::from_terms(r, &[(2, 0), (2, 1)]);
        assert!(a.add(&b).unwrap().is_zero());
        let ai = FieldElement::parse(r, "1 + t + O(t^2)").unwrap();
        let bi = FieldElement::parse(r, "2 + 2*t + O(t^2)").unwrap();
        assert!(matches!(ai.add(&bi), Err(DvrError::PrecisionExhausted(_))));
    }

    #[test]
    fn products() {
        let r = s3();
        let t = FieldElement::uniformizer(r);
        assert_eq!(t.mul(&t.inv().unwrap()), FieldElement::one(r));
        assert!(t.mul(&FieldElement::zero(r)).is_zero());
        let a = FieldElement::from_terms(r, &[(1, 0), (1, 1)]);
        let b = FieldElement::from_terms(r, &[(1, 0), (-1, 1)]);
        assert_eq!(a.mul(&b), FieldElement::from_terms(r, &[(1, 0), (-1, 2)]));
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let r = s3().with_precision(10);
        let x = FieldElement::from_terms(r, &[(1, 0), (-1, 1)]);
        let y = x.inv().unwrap();
        assert_eq!(y.precision(), Precision::Known(10));
        assert_eq!(y.unit_digits(10), vec![1; 10]);
        assert_eq!(y.valuation(), Valuation::Finite(0));
        assert!(x.mul(&y).agrees_with(&FieldElement::one(r)));
        let t2 = FieldElement::monomial(r, 1, 2);
        assert_eq!(t2.inv().unwrap(), FieldElement::monomial(r, 1, -2));
        assert_eq!(FieldElement::zero(r).inv(), Err(DvrError::DivisionByZero));
    }

    #[test]
    fn padic_carries_and_signs() {
        let r = RingConfig::padic(5);
        let a = FieldElement::from_int(r, 4);
        let b = FieldElement::from_int(r, 1);
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), Valuation::Finite(1));
        assert_eq!(s.to_string(), "p");
        let m = FieldElement::from_int(r, -7);
        assert_eq!(m.to_string(), "-(2 + p)");
        assert_eq!(FieldElement::parse(r, &m.to_string()).unwrap(), m);
        let inv2 = FieldElement::from_int(r, 2).inv().unwrap();
        assert!(inv2.mul(&FieldElement::from_int(r, 2)).agrees_with(&FieldElement::one(r)));
    }

    #[test]
    fn parse_roundtrip() {
        let r = RingConfig::series(5);
        let x = FieldElement::parse(r, "2*t^5 + 3*t^-2 + 1").unwrap();
        assert_eq!(x.to_string(), "3*t^-2 + 1 + 2*t^5");
        let y = FieldElement::parse(r, "-t + 7").unwrap();
        assert_eq!(y.to_string(), "2 + 4*t");
        let z = FieldElement::parse(r, "1 + t + O(t^3)").unwrap();
        assert_eq!(z.to_string(), "1 + t + O(t^3)");
        assert!(FieldElement::parse(r, "1 + ").is_err());
        assert!(FieldElement::parse(r, "x^2").is_err());
    }

    #[test]
    fn residue_ring_ops() {
        let r = s3();
        let rr = ResidueRing::new(r, 4);
        let a = Raw::Poly(vec![0, 2, 1]);
        let (v, uinv) = rr.split_unit_inverse(&a).unwrap();
        assert_eq!(v, 1);
        let u = rr.shift_down(&a, 1);
        assert_eq!(rr.mul(&u, &uinv), rr.one());
        let (rem, q) = rr.split_at(&Raw::Poly(vec![1, 2, 1]), 1);
        assert_eq!(rem, Raw::Poly(vec![1]));
        assert_eq!(q, Raw::Poly(vec![2, 1]));
    }

    #[test]
    fn exact_division() {
        let r = s3();
        let a = FieldElement::from_terms(r, &[(1, 0), (-1, 2)]);
        let b = FieldElement::from_terms(r, &[(1, 0), (1, 1)]);
        assert_eq!(a.exact_div(&b).unwrap(), FieldElement::from_terms(r, &[(1, 0), (-1, 1)]));
        assert!(b.exact_div(&a).is_none());
    }
}
