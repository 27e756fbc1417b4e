//! Membership of a truncated series in `ℤ[[z]]`, `ℤ_p[[z]]` and the
//! related classes `1 + Σ z_i ℤ_p[[z]]`, `1 + p Σ z_i ℤ_p[[z]]`,
//! `p Σ z_i ℤ_p[[z]]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Series, SeriesError};
use crate::exact::{vp_rat, Prime, Valuation};
use crate::params;
use crate::report::{CongruenceReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralityMode {
    /// `ℤ_p[[z]]`: every coefficient has `v_p >= 0`.
    Zp,
    /// `1 + Σ z_i ℤ_p[[z]]`.
    OnePlusZp,
    /// `1 + p Σ z_i ℤ_p[[z]]`.
    OnePlusPZp,
    /// `p Σ z_i ℤ_p[[z]]`.
    PZp,
}

impl IntegralityMode {
    pub fn name(self) -> &'static str {
        match self {
            IntegralityMode::Zp => "Zp",
            IntegralityMode::OnePlusZp => "1+zZp",
            IntegralityMode::OnePlusPZp => "1+pzZp",
            IntegralityMode::PZp => "pzZp",
        }
    }

    /// Required constant term, if the class pins it.
    fn constant(self) -> Option<BigRational> {
        match self {
            IntegralityMode::Zp => None,
            IntegralityMode::OnePlusZp | IntegralityMode::OnePlusPZp => Some(BigRational::one()),
            IntegralityMode::PZp => Some(BigRational::zero()),
        }
    }

    fn higher_bound(self) -> i64 {
        match self {
            IntegralityMode::Zp | IntegralityMode::OnePlusZp => 0,
            IntegralityMode::OnePlusPZp | IntegralityMode::PZp => 1,
        }
    }
}

impl fmt::Display for IntegralityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntegralityMode {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Zp" | "Z_p[[z]]" => Ok(IntegralityMode::Zp),
            "1+zZp" | "1+Σz_iℤ_p" => Ok(IntegralityMode::OnePlusZp),
            "1+pzZp" | "1+pΣz_iℤ_p" => Ok(IntegralityMode::OnePlusPZp),
            "pzZp" | "pΣz_iℤ_p" => Ok(IntegralityMode::PZp),
            other => Err(SeriesError::BadSubstitution(format!(
                "unknown integrality mode {other:?}"
            ))),
        }
    }
}

/// Checks every coefficient of `s` against the valuation bound of `mode`.
/// A pinned constant term is checked exactly: the witness value is the
/// difference from the required constant, with required valuation `+∞`.
pub fn is_p_integral(s: &Series, p: Prime, mode: IntegralityMode) -> CongruenceReport {
    let mut failures = Vec::new();
    let mut cases = 0;
    let c0 = s.constant_term();
    if let Some(expected) = mode.constant() {
        cases += 1;
        let diff = &c0 - &expected;
        if !diff.is_zero() {
            failures.push(Witness::new(
                params! { "m" => vec![0i64; s.dim()] },
                &diff,
                Valuation::Infinite,
                vp_rat(&diff, p),
                vec![0],
            ));
        }
    }
    for (pos, (m, c)) in s.terms().enumerate() {
        let bound = if m.is_one() {
            if mode.constant().is_some() {
                continue;
            }
            0
        } else {
            mode.higher_bound()
        };
        cases += 1;
        let v = vp_rat(c, p);
        if v < Valuation::Finite(bound) {
            failures.push(Witness::new(
                params! { "m" => m.to_i64() },
                c,
                Valuation::Finite(bound),
                v,
                vec![pos as i64],
            ));
        }
    }
    CongruenceReport::from_failures(
        "p-integrality",
        params! { "p" => p.get(), "mode" => mode.name(), "d" => s.dim(), "D" => s.degree() },
        cases,
        failures,
    )
}

/// Exact membership in `ℤ[[z]]` up to the truncation degree. Each witness
/// names the smallest prime dividing the offending denominator.
pub fn is_integral(s: &Series) -> CongruenceReport {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (pos, (m, c)) in s.terms().enumerate() {
        cases += 1;
        if c.denom().is_one() {
            continue;
        }
        let (prime, actual) = match smallest_prime_factor(c.denom()) {
            Some(q) => {
                let q = Prime::new(q).expect("smallest factor is prime");
                (serde_json::json!(q.get()), vp_rat(c, q))
            }
            None => (serde_json::json!(c.denom().to_string()), Valuation::Finite(-1)),
        };
        let mut params = params! { "m" => m.to_i64() };
        params.insert("prime".into(), prime);
        failures.push(Witness::new(
            params,
            c,
            Valuation::Finite(0),
            actual,
            vec![pos as i64],
        ));
    }
    CongruenceReport::from_failures(
        "integrality",
        params! { "d" => s.dim(), "D" => s.degree() },
        cases,
        failures,
    )
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn smallest_prime_factor(n: &BigInt) -> Option<u64> {
    if let Some(small) = n.to_u64() {
        let mut d = 2;
        while d * d <= small && d <= TRIAL_LIMIT {
            if small % d == 0 {
                return Some(d);
            }
            d += 1;
        }
        return (small > 1 && d * d > small).then_some(small);
    }
    (2..=TRIAL_LIMIT).find(|&d| (n % d).is_zero())
}
