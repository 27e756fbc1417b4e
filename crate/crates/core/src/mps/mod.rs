//! Truncated multivariate formal power series over `ℚ`.
//!
//! A [`Series`] holds the coefficients of total degree `<= D` in `d`
//! variables, sparsely, keyed by exponent vector in graded-lexicographic
//! order. Zero coefficients are never stored.

mod integrality;
mod io;
mod invert;
mod log;
mod subst;

pub use integrality::{is_integral, is_p_integral, IntegralityMode};
pub use io::{CoefficientFile, CoefficientTerm};
pub use invert::{invert_map, round_trip_defect};
pub use log::{apply_log_operator, LogSeries};
pub use subst::{Substitution, VarRule};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series shapes differ: (d={0}, D={1}) vs (d={2}, D={3})")]
    ShapeMismatch(usize, u32, usize, u32),
    #[error("exponent {0:?} has the wrong number of entries (expected {1})")]
    KeyDimension(Vec<u32>, usize),
    #[error("monomial {0:?} exceeds the truncation degree {1}")]
    DegreeOverflow(Vec<u32>, u32),
    #[error("monomial {0:?} given twice")]
    DuplicateKey(Vec<u32>),
    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: String, found: String },
    #[error("constant term is zero; series is not invertible")]
    NotInvertible,
    #[error("substitution is cyclic at variable z{0}")]
    CyclicSubstitution(usize),
    #[error("invalid substitution: {0}")]
    BadSubstitution(String),
    #[error("map component {0} is not of the form z_i * (1 + ...)")]
    NotNormalized(usize),
    #[error("operator dimension {0} does not match series dimension {1}")]
    OperatorDimension(usize, usize),
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
    #[error("a series needs at least one variable")]
    ZeroDimension,
}

/// Exponent vector of a monomial. Ordered by total degree, then
/// lexicographically with larger powers of earlier variables first, so
/// `1 < z1 < z2 < z1^2 < z1 z2 < z2^2 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(d: usize) -> Self {
        Monomial(vec![0; d])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in `d` variables of total degree `<= max_degree`, in
/// graded-lexicographic order.
pub fn monomials_up_to(d: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut current = vec![0u32; d];
        push_compositions(&mut out, &mut current, 0, deg);
    }
    out
}

fn push_compositions(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(Monomial(current.clone()));
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        push_compositions(out, current, pos + 1, left - e);
    }
    current[pos] = 0;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    dim: usize,
    degree: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Series {
    pub fn zero(dim: usize, degree: u32) -> Self {
        assert!(dim >= 1, "a series needs at least one variable");
        Series {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, degree: u32, c: BigRational) -> Self {
        let mut s = Series::zero(dim, degree);
        s.insert(Monomial::one(dim), c);
        s
    }

    pub fn one(dim: usize, degree: u32) -> Self {
        Series::constant(dim, degree, BigRational::one())
    }

    /// The variable `z_i` (0-based); zero if `degree == 0`.
    pub fn variable(dim: usize, degree: u32, i: usize) -> Self {
        assert!(i < dim);
        let mut s = Series::zero(dim, degree);
        let mut e = vec![0; dim];
        e[i] = 1;
        s.insert(Monomial(e), BigRational::one());
        s
    }

    /// Canonical sparse series from explicit terms. Zero coefficients are
    /// dropped; duplicate or out-of-range keys are errors.
    pub fn from_terms<I>(dim: usize, degree: u32, entries: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        if dim == 0 {
            return Err(SeriesError::ZeroDimension);
        }
        let mut terms = BTreeMap::new();
        for (exps, c) in entries {
            if exps.len() != dim {
                return Err(SeriesError::KeyDimension(exps, dim));
            }
            let m = Monomial(exps);
            if m.degree() > degree {
                return Err(SeriesError::DegreeOverflow(m.0, degree));
            }
            if terms.contains_key(&m) {
                return Err(SeriesError::DuplicateKey(m.0));
            }
            terms.insert(m, c);
        }
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        Ok(Series { dim, degree, terms })
    }

    /// Builds a series from a coefficient function evaluated on every
    /// monomial of degree `<= degree`.
    pub fn from_fn<F>(dim: usize, degree: u32, f: F) -> Self
    where
        F: Fn(&Monomial) -> BigRational,
    {
        let mut s = Series::zero(dim, degree);
        for m in monomials_up_to(dim, degree) {
            let c = f(&m);
            s.insert(m, c);
        }
        s
    }

    fn insert(&mut self, m: Monomial, c: BigRational) {
        if m.degree() <= self.degree && !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff_of(&self, m: &Monomial) -> Option<&BigRational> {
        self.terms.get(m)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one(self.dim))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Drops every term above `degree` (and lowers the bound).
    pub fn truncate(&self, degree: u32) -> Series {
        let degree = degree.min(self.degree);
        Series {
            dim: self.dim,
            degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_shape(&self, other: &Series) -> Result<(), SeriesError> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(SeriesError::ShapeMismatch(
                self.dim,
                self.degree,
                other.dim,
                other.degree,
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_shape(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Series::accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(Series {
            dim: self.dim,
            degree: self.degree,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_shape(other)?;
        Ok(self.mul_truncated(other))
    }

    fn mul_truncated(&self, other: &Series) -> Series {
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            let budget = self.degree - a.degree();
            for (b, cb) in &other.terms {
                // graded order: everything after this is too large as well
                if b.degree() > budget {
                    break;
                }
                Series::accumulate(&mut out, a.mul(b), ca * cb);
            }
        }
        Series {
            dim: self.dim,
            degree: self.degree,
            terms: out,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Series::zero(self.dim, self.degree);
        }
        Series {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Series {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut acc = Series::one(self.dim, self.degree);
        for _ in 0..e {
            acc = acc.mul_truncated(self);
        }
        acc
    }

    /// Multiplies by `z_i` and raises the truncation degree by one; the
    /// result is exact to the new degree.
    pub fn shift_up(&self, i: usize) -> Series {
        Series {
            dim: self.dim,
            degree: self.degree + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[i] += 1;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Multiplies by `z_i` within the current truncation.
    pub fn mul_var(&self, i: usize) -> Series {
        self.shift_up(i).truncate(self.degree)
    }

    /// `1 / self`, by the coefficient recursion
    /// `b_m = -(1/a_0) Σ_{0 < k <= m} a_k b_{m-k}`.
    pub fn reciprocal(&self) -> Result<Series, SeriesError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv_a0 = a0.recip();
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for m in monomials_up_to(self.dim, self.degree) {
            if m.is_one() {
                out.insert(m, inv_a0.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for (k, ak) in &self.terms {
                if k.degree() > m.degree() {
                    break;
                }
                if k.is_one() {
                    continue;
                }
                if let Some(rest) = m.checked_div(k) {
                    if let Some(b) = out.get(&rest) {
                        acc += ak * b;
                    }
                }
            }
            if !acc.is_zero() {
                out.insert(m, -acc * &inv_a0);
            }
        }
        Ok(Series {
            dim: self.dim,
            degree: self.degree,
            terms: out,
        })
    }

    pub fn checked_div(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check_shape(other)?;
        Ok(self.mul_truncated(&other.reciprocal()?))
    }

    /// `exp(S) = Σ_{n <= D} S^n / n!`; requires a zero constant term.
    pub fn exp(&self) -> Result<Series, SeriesError> {
        let c0 = self.constant_term();
        if !c0.is_zero() {
            return Err(SeriesError::ConstantTerm {
                expected: "0".into(),
                found: c0.to_string(),
            });
        }
        let mut sum = Series::one(self.dim, self.degree);
        let mut term = Series::one(self.dim, self.degree);
        for n in 1..=self.degree {
            term = term
                .mul_truncated(self)
                .scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// `log(S) = Σ_{n >= 1} (-1)^{n+1} (S-1)^n / n`; requires constant term 1.
    pub fn log(&self) -> Result<Series, SeriesError> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(SeriesError::ConstantTerm {
                expected: "1".into(),
                found: c0.to_string(),
            });
        }
        let x = self - &Series::one(self.dim, self.degree);
        let mut sum = Series::zero(self.dim, self.degree);
        let mut power = Series::one(self.dim, self.degree);
        for n in 1..=self.degree {
            power = power.mul_truncated(&x);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            sum = &sum + &power.scale(&BigRational::new(BigInt::from(sign), BigInt::from(n)));
        }
        Ok(sum)
    }

    /// `S(z^p)`: every exponent multiplied by `p`, terms beyond `D` dropped.
    pub fn frobenius(&self, p: u32) -> Series {
        assert!(p >= 1, "Frobenius exponent must be positive");
        Series {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() * p <= self.degree)
                .map(|(m, c)| (Monomial(m.0.iter().map(|e| e * p).collect()), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `z_i -> subs[i]` for every variable. Each substituted
    /// series must have zero constant term; the result lives in the ring of
    /// the substituted series.
    pub fn compose(&self, subs: &[Series]) -> Result<Series, SeriesError> {
        if subs.len() != self.dim {
            return Err(SeriesError::BadSubstitution(format!(
                "expected {} series, got {}",
                self.dim,
                subs.len()
            )));
        }
        let (dim, degree) = (subs[0].dim, subs[0].degree);
        for s in subs {
            if s.dim != dim || s.degree != degree {
                return Err(SeriesError::ShapeMismatch(dim, degree, s.dim, s.degree));
            }
            if !s.constant_term().is_zero() {
                return Err(SeriesError::ConstantTerm {
                    expected: "0".into(),
                    found: s.constant_term().to_string(),
                });
            }
        }
        // powers[i][e] = subs[i]^e; higher powers vanish below degree + 1
        let max_exp = self.degree.min(degree) as usize;
        let powers: Vec<Vec<Series>> = subs
            .iter()
            .map(|s| {
                let mut v = vec![Series::one(dim, degree)];
                for e in 1..=max_exp {
                    let next = v[e - 1].mul_truncated(s);
                    v.push(next);
                }
                v
            })
            .collect();
        let terms: Vec<(&[u32], &BigRational)> = self
            .terms
            .iter()
            .filter(|(m, _)| m.0.iter().all(|&e| e as usize <= max_exp))
            .map(|(m, c)| (m.0.as_slice(), c))
            .collect();
        Ok(compose_rec(&terms, 0, &powers, dim, degree))
    }
}

// Horner-style evaluation: group by the exponent of variable `var`, so the
// number of full series products is the number of distinct exponent
// prefixes rather than the number of terms.
fn compose_rec(
    terms: &[(&[u32], &BigRational)],
    var: usize,
    powers: &[Vec<Series>],
    dim: usize,
    degree: u32,
) -> Series {
    if var == powers.len() {
        let c = terms
            .iter()
            .fold(BigRational::zero(), |acc, (_, c)| acc + *c);
        return Series::constant(dim, degree, c);
    }
    let mut groups: BTreeMap<u32, Vec<(&[u32], &BigRational)>> = BTreeMap::new();
    for &(e, c) in terms {
        groups.entry(e[var]).or_default().push((e, c));
    }
    let mut out = Series::zero(dim, degree);
    for (e, group) in groups {
        let inner = compose_rec(&group, var + 1, powers, dim, degree);
        let piece = if e == 0 {
            inner
        } else if inner.is_constant() {
            powers[var][e as usize].scale(&inner.constant_term())
        } else {
            powers[var][e as usize].mul_truncated(&inner)
        };
        out = &out + &piece;
    }
    out
}

impl Add for &Series {
    type Output = Series;

    /// Panics on shape mismatch; use [`Series::checked_add`] to recover.
    fn add(self, rhs: &Series) -> Series {
        self.checked_add(rhs).expect("series shape mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self.checked_sub(rhs).expect("series shape mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        self.checked_mul(rhs).expect("series shape mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(deg {})", self.degree + 1);
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (i, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", i + 1)?,
                    _ => write!(f, "*z{}^{}", i + 1, e)?,
                }
            }
        }
        write!(f, " + O(deg {})", self.degree + 1)
    }
}
