//! Exact integer and rational arithmetic helpers: p-adic valuations,
//! the multinomial products `B(P, m)`, harmonic numbers and the p-adic
//! gamma function on positive integers.
//!
//! Big numbers are `num-bigint` / `num-rational` values; everything here
//! is exact, nothing ever goes through floating point.

use std::fmt;
use std::ops::{Add, Index};
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("expected a nonnegative argument, got {0}")]
    Negative(i64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// A rational prime, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ExactError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// `p^e` as an `i64`. Callers keep exponents small.
    pub fn pow(self, e: u32) -> i64 {
        (self.0 as i64).pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic valuation: an integer, or `+∞` for the valuation of zero.
///
/// The derived order puts every finite value below `Infinite`, so a
/// membership test `v >= bound` holds vacuously for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `self >= bound`, where `bound` may itself be infinite.
    pub fn at_least(self, bound: Valuation) -> bool {
        self >= bound
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

// Finite valuations serialize as JSON integers, +∞ as the string "inf".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// An integer vector of fixed dimension; the order `>=` used throughout is
/// the componentwise one (see [`MultiIndex::dominates`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        assert!(!entries.is_empty(), "a multi-index needs at least one entry");
        MultiIndex(entries)
    }

    pub fn zeros(d: usize) -> Self {
        MultiIndex::new(vec![0; d])
    }

    pub fn ones(d: usize) -> Self {
        MultiIndex::new(vec![1; d])
    }

    pub fn constant(d: usize, c: i64) -> Self {
        MultiIndex::new(vec![c; d])
    }

    /// The `i`-th unit vector (0-based).
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        MultiIndex::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn dot(&self, other: &MultiIndex) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `|m| = m_1 + ... + m_d`.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * c).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: i64, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    /// Componentwise floor division.
    pub fn div_floor(&self, q: i64) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a.div_floor(&q)).collect())
    }

    /// Every integer vector `lo <= m <= hi`, last coordinate varying fastest.
    /// Empty when some `lo_i > hi_i`.
    pub fn range_inclusive(lo: &MultiIndex, hi: &MultiIndex) -> BoxIter {
        assert_eq!(lo.dim(), hi.dim());
        let empty = lo.0.iter().zip(&hi.0).any(|(a, b)| a > b);
        BoxIter {
            lo: lo.0.clone(),
            hi: hi.0.clone(),
            next: if empty { None } else { Some(lo.0.clone()) },
        }
    }

    /// `0 <= m <= hi`.
    pub fn up_to(hi: &MultiIndex) -> BoxIter {
        MultiIndex::range_inclusive(&MultiIndex::zeros(hi.dim()), hi)
    }
}

impl Index<usize> for MultiIndex {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex::new(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Odometer over an integer box.
#[derive(Debug, Clone)]
pub struct BoxIter {
    lo: Vec<i64>,
    hi: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.hi[i] {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = self.lo[i];
        }
        Some(MultiIndex(current))
    }
}

/// Largest `e` with `p^e | n`; `+∞` for `n = 0`.
pub fn vp_int(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p.get());
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        n = q;
        e += 1;
    }
}

/// Valuation of a reduced fraction: `v_p(num) - v_p(den)`.
pub fn vp_rat(q: &BigRational, p: Prime) -> Valuation {
    match vp_int(q.numer(), p) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(a) => {
            let b = vp_int(q.denom(), p).finite().unwrap_or(0);
            Valuation::Finite(a - b)
        }
    }
}

/// `v_p(n!)` by Legendre's floor sum, without forming `n!`.
pub fn vp_factorial(n: u64, p: Prime) -> Valuation {
    let p = p.get() as u128;
    let n = n as u128;
    let mut total = 0u128;
    let mut pk = p;
    while pk <= n {
        total += n / pk;
        pk *= p;
    }
    Valuation::Finite(total as i64)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `B(P, m) = (Σ P_i m_i)! / Π m_i!^{P_i}`, extended by zero when some
/// `m_i < 0`.
///
/// Built up as a running multinomial so every intermediate value is an
/// integer and no full factorial is ever divided.
pub fn multinomial_b(weights: &MultiIndex, m: &MultiIndex) -> BigInt {
    assert_eq!(weights.dim(), m.dim(), "B(P, m) needs equal dimensions");
    if !m.is_nonneg() {
        return BigInt::zero();
    }
    let mut result = BigInt::one();
    let mut acc: u64 = 0;
    for (&w, &part) in weights.as_slice().iter().zip(m.as_slice()) {
        for _ in 0..w {
            for t in 1..=part as u64 {
                acc += 1;
                result *= acc;
                result /= t;
            }
        }
    }
    result
}

/// `v_p(B(P, m))` from floor sums only.
pub fn vp_b(weights: &MultiIndex, m: &MultiIndex, p: Prime) -> Valuation {
    assert!(m.is_nonneg(), "vp_b is defined for m >= 0");
    let p = p.get() as i128;
    let top: i128 = weights
        .as_slice()
        .iter()
        .zip(m.as_slice())
        .map(|(&w, &x)| w as i128 * x as i128)
        .sum();
    let mut total = 0i128;
    let mut pk = p;
    while pk <= top {
        let lower: i128 = weights
            .as_slice()
            .iter()
            .zip(m.as_slice())
            .map(|(&w, &x)| w as i128 * (x as i128 / pk))
            .sum();
        total += top / pk - lower;
        pk *= p;
    }
    Valuation::Finite(total as i64)
}

/// `B_N(m) = Π_j B(N^(j), m)`; zero when some `m_i < 0`.
pub fn b_product(n_list: &[MultiIndex], m: &MultiIndex) -> BigInt {
    if !m.is_nonneg() {
        return BigInt::zero();
    }
    n_list
        .iter()
        .fold(BigInt::one(), |acc, w| acc * multinomial_b(w, m))
}

static HARMONIC: LazyLock<RwLock<Vec<BigRational>>> =
    LazyLock::new(|| RwLock::new(vec![BigRational::zero()]));

/// `H_m = 1 + 1/2 + ... + 1/m`, with `H_0 = 0`.
///
/// Values are memoized in a process-wide table that grows incrementally.
pub fn harmonic(m: u64) -> BigRational {
    let m = m as usize;
    {
        let table = HARMONIC.read().expect("harmonic table poisoned");
        if let Some(h) = table.get(m) {
            return h.clone();
        }
    }
    let mut table = HARMONIC.write().expect("harmonic table poisoned");
    while table.len() <= m {
        let j = table.len();
        let next = table[j - 1].clone() + BigRational::new(BigInt::one(), BigInt::from(j));
        table.push(next);
    }
    table[m].clone()
}

/// Harmonic number at a signed index; panics on negative input.
pub fn harmonic_at(m: i64) -> BigRational {
    assert!(m >= 0, "harmonic number at negative index {m}");
    harmonic(m as u64)
}

/// `Γ_p(n) = (-1)^n Π_{1 <= k < n, p ∤ k} k` for `n >= 1`.
pub fn gamma_p(n: u64, p: Prime) -> BigInt {
    assert!(n >= 1, "Γ_p is defined on positive integers");
    let p = p.get();
    let prod = (1..n)
        .filter(|k| k % p != 0)
        .fold(BigInt::one(), |acc, k| acc * k);
    if n % 2 == 0 {
        prod
    } else {
        -prod
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}
