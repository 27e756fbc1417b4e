//! Series with formal log symbols `ℓ_i` (standing for `log z_i`), enough
//! to apply θ-polynomial operators to logarithmic solutions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Series, SeriesError};
use crate::gkz::GkzOperator;

/// `Σ_e ℓ^e · S_e(z)`. Every part shares `(dim, degree)`; coefficients
/// above `trusted_degree` may be polluted by truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSeries {
    dim: usize,
    degree: u32,
    trusted_degree: u32,
    parts: BTreeMap<Vec<u32>, Series>,
}

impl LogSeries {
    pub fn zero(dim: usize, degree: u32) -> Self {
        LogSeries {
            dim,
            degree,
            trusted_degree: degree,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_series(s: &Series) -> Self {
        let mut out = LogSeries::zero(s.dim(), s.degree());
        out.add_part(vec![0; s.dim()], s.clone());
        out
    }

    /// `ℓ^e · s`.
    pub fn monomial(e: Vec<u32>, s: &Series) -> Result<Self, SeriesError> {
        if e.len() != s.dim() {
            return Err(SeriesError::KeyDimension(e, s.dim()));
        }
        let mut out = LogSeries::zero(s.dim(), s.degree());
        out.add_part(e, s.clone());
        Ok(out)
    }

    fn add_part(&mut self, e: Vec<u32>, s: Series) {
        let sum = match self.parts.remove(&e) {
            Some(old) => &old + &s,
            None => s,
        };
        if !sum.is_zero() {
            self.parts.insert(e, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn trusted_degree(&self) -> u32 {
        self.trusted_degree
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Vec<u32>, &Series)> {
        self.parts.iter()
    }

    pub fn part(&self, e: &[u32]) -> Option<&Series> {
        self.parts.get(e)
    }

    pub fn checked_add(&self, other: &LogSeries) -> Result<LogSeries, SeriesError> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(SeriesError::ShapeMismatch(
                self.dim,
                self.degree,
                other.dim,
                other.degree,
            ));
        }
        let mut out = self.clone();
        out.trusted_degree = self.trusted_degree.min(other.trusted_degree);
        for (e, s) in &other.parts {
            out.add_part(e.clone(), s.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LogSeries) -> Result<LogSeries, SeriesError> {
        self.checked_add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, c: i64) -> LogSeries {
        let mut out = LogSeries {
            parts: BTreeMap::new(),
            ..self.clone()
        };
        for (e, s) in &self.parts {
            out.add_part(e.clone(), s.scale_int(c));
        }
        out
    }

    /// `θ_i = z_i ∂/∂z_i`, with `θ_i(ℓ_j) = δ_ij`.
    pub fn theta(&self, i: usize) -> LogSeries {
        let mut out = LogSeries {
            parts: BTreeMap::new(),
            ..self.clone()
        };
        for (e, s) in &self.parts {
            let mut scaled = Series::zero(self.dim, self.degree);
            for (m, c) in s.terms() {
                let k = m.exponents()[i];
                if k != 0 {
                    Series::accumulate(
                        &mut scaled.terms,
                        m.clone(),
                        c * BigRational::from_integer(BigInt::from(k)),
                    );
                }
            }
            out.add_part(e.clone(), scaled);
            if e[i] > 0 {
                let mut lower = e.clone();
                lower[i] -= 1;
                out.add_part(lower, s.scale_int(e[i] as i64));
            }
        }
        out
    }

    /// Multiplies by `z_i` inside the truncation; the top degree is lost.
    pub fn mul_var(&self, i: usize) -> LogSeries {
        let mut out = LogSeries {
            parts: BTreeMap::new(),
            trusted_degree: self.trusted_degree.min(self.degree).saturating_sub(1),
            ..self.clone()
        };
        for (e, s) in &self.parts {
            out.add_part(e.clone(), s.mul_var(i));
        }
        out
    }

    /// True when every part vanishes through the trusted degree.
    pub fn is_zero_to_trusted(&self) -> bool {
        self.parts
            .values()
            .all(|s| s.terms().all(|(m, _)| m.degree() > self.trusted_degree))
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, s)) in self.parts.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "l{}*", i + 1)?,
                    _ => write!(f, "l{}^{}*", i + 1, k)?,
                }
            }
            write!(f, "({s})")?;
        }
        write!(f, " [trusted to degree {}]", self.trusted_degree)
    }
}

/// `𝓛(X) = θ_i^T X − z_i Π_f f(θ) X`.
pub fn apply_log_operator(op: &GkzOperator, x: &LogSeries) -> Result<LogSeries, SeriesError> {
    if op.dim != x.dim {
        return Err(SeriesError::OperatorDimension(op.dim, x.dim));
    }
    let mut head = x.clone();
    for _ in 0..op.theta_power {
        head = head.theta(op.index);
    }
    let mut tail = x.clone();
    for form in &op.factors {
        let mut next = tail.scale_int(form.constant);
        for (l, &c) in form.coeffs.as_slice().iter().enumerate() {
            if c != 0 {
                next = next.checked_add(&tail.theta(l).scale_int(c))?;
            }
        }
        tail = next;
    }
    head.checked_sub(&tail.mul_var(op.index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_on_variable_and_symbol() {
        let z1 = Series::variable(2, 3, 0);
        let x = LogSeries::from_series(&z1);
        assert_eq!(x.theta(0), x);
        assert!(x.theta(1).parts().next().is_none());

        let ell = LogSeries::monomial(vec![1, 0], &Series::one(2, 3)).unwrap();
        let got = ell.theta(0);
        assert_eq!(got, LogSeries::from_series(&Series::one(2, 3)));
    }

    #[test]
    fn theta_is_a_derivation_on_log_terms() {
        // θ(ℓ² z) = 2ℓ z + ℓ² z
        let z = Series::variable(1, 3, 0);
        let x = LogSeries::monomial(vec![2], &z).unwrap();
        let got = x.theta(0);
        assert_eq!(got.part(&[2]), Some(&z));
        assert_eq!(got.part(&[1]), Some(&z.scale_int(2)));
    }

    #[test]
    fn mul_var_lowers_trust() {
        let x = LogSeries::from_series(&Series::one(1, 4));
        let y = x.mul_var(0);
        assert_eq!(y.trusted_degree(), 3);
        assert!(!y.is_zero_to_trusted());
    }
}
