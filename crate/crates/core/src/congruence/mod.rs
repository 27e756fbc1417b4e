//! Brute-force verifiers for the congruences behind the integrality of
//! mirror-type maps. Every verifier sweeps a finite parameter box
//! exhaustively and returns a [`CongruenceReport`] whose witnesses are the
//! failing cases in a canonical order.

mod dwork;
mod grid;
mod harmonic;
mod quotients;
mod series_checks;

pub use dwork::{
    theorem1_box_sum, theorem1_summand, verify_box_sum_identities, verify_comb_identity,
    verify_theorem1_conclusion, verify_theorem1_hypothesis_iii,
};
pub use harmonic::{verify_harmonic_reduction, verify_harmonic_shift, verify_harmonic_weight};
pub use quotients::{verify_gamma_p, verify_quotients, QuotientCheck};
pub use series_checks::{
    check_c_in_pzp, check_dieudonne_dwork, check_reduction, compute_c, full_pipeline_check,
    reduction_series, verify_rearrangement, verify_rearrangement_sweep,
};

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{ExactError, MultiIndex, Prime};
use crate::gkz::{GkzError, GkzSpec};
use crate::mps::SeriesError;
use crate::report::Witness;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Gkz(#[from] GkzError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("map {map} vanishes at {index}, but the statement needs a nonzero value there")]
    ZeroValue { map: String, index: String },
    #[error("L = {0} is not admissible (no N^(j) dominates it)")]
    Inadmissible(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("bad coefficient table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, CongruenceError>;

#[derive(Clone)]
enum Rule {
    Gkz(GkzSpec),
    Table(Arc<BTreeMap<MultiIndex, BigRational>>),
    Random { seed: u64, lo: i64, hi: i64 },
    Func(Arc<dyn Fn(&MultiIndex) -> BigRational + Send + Sync>),
}

/// A map from integer vectors to rationals.
#[derive(Clone)]
pub struct CoeffMap {
    name: String,
    rule: Rule,
    zero_extend: bool,
}

impl fmt::Debug for CoeffMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffMap")
            .field("name", &self.name)
            .field("zero_extend", &self.zero_extend)
            .finish()
    }
}

impl CoeffMap {
    /// `m ↦ B_N(m)`.
    pub fn b_n(spec: &GkzSpec) -> Self {
        CoeffMap {
            name: format!("B_N[{spec}]"),
            rule: Rule::Gkz(spec.clone()),
            zero_extend: true,
        }
    }

    /// Parses lines `m_1 ... m_d num/den` (or a bare integer value).
    /// Blank lines and lines starting with `#` are skipped; indices not
    /// listed evaluate to 0.
    pub fn from_table(name: &str, d: usize, text: &str) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != d + 1 {
                return Err(CongruenceError::Table(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 1,
                    d + 1,
                    fields.len()
                )));
            }
            let idx = fields[..d]
                .iter()
                .map(|s| s.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| CongruenceError::Table(format!("line {}: {e}", lineno + 1)))?;
            let value = parse_rational(fields[d])
                .ok_or_else(|| CongruenceError::Table(format!("line {}: bad value", lineno + 1)))?;
            if table.insert(MultiIndex::new(idx), value).is_some() {
                return Err(CongruenceError::Table(format!(
                    "line {}: index listed twice",
                    lineno + 1
                )));
            }
        }
        Ok(CoeffMap {
            name: name.to_string(),
            rule: Rule::Table(Arc::new(table)),
            zero_extend: true,
        })
    }

    /// Seeded integers uniform in `[lo, hi]`, independent per index.
    pub fn random(seed: u64, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty range for random map");
        CoeffMap {
            name: format!("random[seed={seed},{lo}..={hi}]"),
            rule: Rule::Random { seed, lo, hi },
            zero_extend: true,
        }
    }

    pub fn from_fn<F>(name: &str, f: F) -> Self
    where
        F: Fn(&MultiIndex) -> BigRational + Send + Sync + 'static,
    {
        CoeffMap {
            name: name.to_string(),
            rule: Rule::Func(Arc::new(f)),
            zero_extend: true,
        }
    }

    /// Evaluates the underlying rule on negative indices too.
    pub fn without_zero_extension(mut self) -> Self {
        self.zero_extend = false;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, m: &MultiIndex) -> BigRational {
        if self.zero_extend && !m.is_nonneg() {
            return BigRational::zero();
        }
        match &self.rule {
            Rule::Gkz(spec) => BigRational::from_integer(spec.b(m)),
            Rule::Table(t) => t.get(m).cloned().unwrap_or_else(BigRational::zero),
            Rule::Random { seed, lo, hi } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(stream_of(m));
                BigRational::from_integer(BigInt::from(rng.random_range(*lo..=*hi)))
            }
            Rule::Func(f) => f(m),
        }
    }

    /// Tabulates the map on `0 <= m <= hi`.
    pub fn tabulate(&self, hi: &MultiIndex) -> Dense<'_> {
        Dense::build(self, hi)
    }
}

fn stream_of(m: &MultiIndex) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &x in m.as_slice() {
        h = (h ^ x as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9).rotate_left(31);
    }
    h
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Values of a map on a box `0 <= m <= hi`, falling back to direct
/// evaluation outside it and to 0 on negative indices.
pub struct Dense<'a> {
    map: &'a CoeffMap,
    hi: Vec<i64>,
    values: Vec<BigRational>,
}

impl<'a> Dense<'a> {
    fn build(map: &'a CoeffMap, hi: &MultiIndex) -> Self {
        let points: Vec<MultiIndex> = MultiIndex::up_to(hi).collect();
        let values = points.par_iter().map(|m| map.eval(m)).collect();
        Dense {
            map,
            hi: hi.as_slice().to_vec(),
            values,
        }
    }

    fn offset(&self, m: &[i64]) -> Option<usize> {
        let mut off = 0usize;
        for (&x, &h) in m.iter().zip(&self.hi) {
            if x < 0 || x > h {
                return None;
            }
            off = off * (h as usize + 1) + x as usize;
        }
        Some(off)
    }

    pub fn get(&self, m: &MultiIndex) -> Cow<'_, BigRational> {
        if self.map.zero_extend && !m.is_nonneg() {
            return Cow::Owned(BigRational::zero());
        }
        match self.offset(m.as_slice()) {
            Some(off) => Cow::Borrowed(&self.values[off]),
            None => Cow::Owned(self.map.eval(m)),
        }
    }

    /// First tabulated index where the map vanishes.
    pub fn first_zero(&self) -> Option<MultiIndex> {
        let pos = self.values.iter().position(|v| v.is_zero())?;
        MultiIndex::up_to(&MultiIndex::new(self.hi.clone())).nth(pos)
    }

    fn require_nonzero(&self) -> Result<()> {
        match self.first_zero() {
            Some(m) => Err(CongruenceError::ZeroValue {
                map: self.map.name.clone(),
                index: m.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Read access to map values, tabulated or not.
pub trait Values: Sync {
    fn at(&self, m: &MultiIndex) -> Cow<'_, BigRational>;
    fn label(&self) -> &str;
}

impl Values for CoeffMap {
    fn at(&self, m: &MultiIndex) -> Cow<'_, BigRational> {
        Cow::Owned(self.eval(m))
    }

    fn label(&self) -> &str {
        &self.name
    }
}

impl Values for Dense<'_> {
    fn at(&self, m: &MultiIndex) -> Cow<'_, BigRational> {
        self.get(m)
    }

    fn label(&self) -> &str {
        &self.map.name
    }
}

/// Value at a nonnegative index where the statement needs it nonzero.
fn nonzero_at<'a, V: Values + ?Sized>(v: &'a V, m: &MultiIndex) -> Result<Cow<'a, BigRational>> {
    let x = v.at(m);
    if m.is_nonneg() && x.is_zero() {
        return Err(CongruenceError::ZeroValue {
            map: v.label().to_string(),
            index: m.to_string(),
        });
    }
    Ok(x)
}

/// Collects per-case outcomes in order, surfacing the first error.
fn gather(outcomes: Vec<Result<Option<Witness>>>) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for o in outcomes {
        if let Some(w) = o? {
            out.push(w);
        }
    }
    Ok(out)
}

/// Quantifier ranges for the sweeps: primes, `0 <= s <= s_max`, dimension,
/// and the common upper bound for the `m`, `n`, `k` boxes. The `K` box is
/// `k_min <= K_i <= k_max`, with `k_max` defaulting to `p^2 * bound`.
/// Digits `a`, `v` (`< p`) and `u` (`< p^s`) are bounded at iteration time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRange {
    pub primes: Vec<Prime>,
    pub s_max: u32,
    pub d: usize,
    pub bound: i64,
    pub k_min: i64,
    pub k_max: Option<i64>,
}

impl SweepRange {
    pub fn new(primes: &[u64], s_max: u32, d: usize, bound: i64) -> Result<Self> {
        let primes = primes
            .iter()
            .map(|&p| Prime::new(p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if d == 0 {
            return Err(CongruenceError::Range("d must be at least 1".into()));
        }
        if bound < 0 {
            return Err(CongruenceError::Range("box bound must be nonnegative".into()));
        }
        Ok(SweepRange {
            primes,
            s_max,
            d,
            bound,
            k_min: 0,
            k_max: None,
        })
    }

    /// `p ∈ {2, 3}`, `s <= 1`, box entries `<= 4`.
    pub fn default_for(d: usize) -> Self {
        SweepRange::new(&[2, 3], 1, d, 4).expect("static range")
    }

    pub fn with_k(mut self, k_min: i64, k_max: i64) -> Self {
        self.k_min = k_min;
        self.k_max = Some(k_max);
        self
    }

    pub fn k_max_for(&self, p: Prime) -> i64 {
        self.k_max.unwrap_or(p.pow(2) * self.bound)
    }

    fn box_hi(&self) -> MultiIndex {
        MultiIndex::constant(self.d, self.bound)
    }

    fn k_box(&self, p: Prime) -> (MultiIndex, MultiIndex) {
        (
            MultiIndex::constant(self.d, self.k_min),
            MultiIndex::constant(self.d, self.k_max_for(p)),
        )
    }
}

/// Every digit vector `0 <= a_i < base`.
fn digits(d: usize, base: i64) -> impl Iterator<Item = MultiIndex> {
    MultiIndex::up_to(&MultiIndex::constant(d, base - 1))
}

fn key_of(parts: &[&[i64]]) -> Vec<i64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}
