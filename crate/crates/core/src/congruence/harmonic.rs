//! Congruences for harmonic numbers weighted by multinomial products.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{digits, key_of, CongruenceError, Result, SweepRange};
use crate::exact::{harmonic_at, multinomial_b, vp_rat, MultiIndex, Prime, Valuation};
use crate::gkz::GkzSpec;
use crate::params;
use crate::report::{CongruenceReport, Witness};

use super::dwork::primes_json;

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `B(N1, a + pk) (H_{⌊L·a/p⌋ + L·k} − H_{L·k})`.
pub(super) fn harmonic_shift_value(
    n1: &MultiIndex,
    l: &MultiIndex,
    p: Prime,
    a: &MultiIndex,
    k: &MultiIndex,
) -> BigRational {
    let pi = p.as_i64();
    let lk = l.dot(k);
    let h = harmonic_at(l.dot(a) / pi + lk) - harmonic_at(lk);
    int(multinomial_b(n1, &a.add_scaled(pi, k))) * h
}

/// Requires `v_p(B(N1, a + pk)(H_{⌊L·a/p⌋ + L·k} − H_{L·k})) >= 1` for all
/// digit vectors `a` and `0 <= k <= bound`. Needs `0 <= L <= N1`.
pub fn verify_harmonic_shift(
    n1: &MultiIndex,
    l: &MultiIndex,
    range: &SweepRange,
) -> Result<CongruenceReport> {
    if l.dim() != n1.dim() || n1.dim() != range.d {
        return Err(CongruenceError::Range(format!(
            "N1 = {n1}, L = {l} and d = {} disagree",
            range.d
        )));
    }
    if !l.is_nonneg() || !n1.dominates(l) {
        return Err(CongruenceError::Inadmissible(l.to_string()));
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for &p in &range.primes {
        let tuples: Vec<(MultiIndex, MultiIndex)> = digits(range.d, p.as_i64())
            .flat_map(|a| MultiIndex::up_to(&range.box_hi()).map(move |k| (a.clone(), k)))
            .collect();
        cases += tuples.len() as u64;
        let found: Vec<Option<Witness>> = tuples
            .par_iter()
            .map(|(a, k)| {
                let value = harmonic_shift_value(n1, l, p, a, k);
                let actual = vp_rat(&value, p);
                (actual < Valuation::Finite(1)).then(|| {
                    Witness::new(
                        params! { "p" => p.get(), "a" => a, "k" => k },
                        &value,
                        Valuation::Finite(1),
                        actual,
                        key_of(&[&[p.as_i64()], a.as_slice(), k.as_slice()]),
                    )
                })
            })
            .collect();
        failures.extend(found.into_iter().flatten());
    }
    Ok(CongruenceReport::from_failures(
        "harmonic-shift",
        params! {
            "N1" => n1, "L" => l, "primes" => primes_json(range), "d" => range.d,
            "bound" => range.bound
        },
        cases,
        failures,
    ))
}

/// `B_N(m) (H_{Σ L_i m_i p^s} − H_{Σ L_i ⌊m_i/p⌋ p^{s+1}})`.
pub(super) fn harmonic_weight_value(
    spec: &GkzSpec,
    l: &MultiIndex,
    p: Prime,
    s: u32,
    m: &MultiIndex,
) -> BigRational {
    let ps = p.pow(s);
    let pi = p.as_i64();
    let h = harmonic_at(l.dot(m) * ps) - harmonic_at(l.dot(&m.div_floor(pi)) * ps * pi);
    int(spec.b(m)) * h
}

/// Requires `v_p(B_N(m)(H_{Σ L_i m_i p^s} − H_{Σ L_i ⌊m_i/p⌋ p^{s+1}})) >= −s`
/// for `s <= s_max` and `0 <= m <= bound`.
pub fn verify_harmonic_weight(
    spec: &GkzSpec,
    l: &MultiIndex,
    range: &SweepRange,
) -> Result<CongruenceReport> {
    if l.dim() != spec.d() || range.d != spec.d() {
        return Err(CongruenceError::Range(format!(
            "L = {l}, spec dimension {} and d = {} disagree",
            spec.d(),
            range.d
        )));
    }
    if !l.is_nonneg() {
        return Err(CongruenceError::Range(format!("L = {l} has a negative entry")));
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for &p in &range.primes {
        let tuples: Vec<(u32, MultiIndex)> = (0..=range.s_max)
            .flat_map(|s| MultiIndex::up_to(&range.box_hi()).map(move |m| (s, m)))
            .collect();
        cases += tuples.len() as u64;
        let found: Vec<Option<Witness>> = tuples
            .par_iter()
            .map(|(s, m)| {
                let value = harmonic_weight_value(spec, l, p, *s, m);
                let required = Valuation::Finite(-(*s as i64));
                let actual = vp_rat(&value, p);
                (actual < required).then(|| {
                    Witness::new(
                        params! { "p" => p.get(), "s" => s, "m" => m },
                        &value,
                        required,
                        actual,
                        key_of(&[&[p.as_i64(), *s as i64], m.as_slice()]),
                    )
                })
            })
            .collect();
        failures.extend(found.into_iter().flatten());
    }
    Ok(CongruenceReport::from_failures(
        "harmonic-weight",
        params! {
            "spec" => spec.to_string(), "L" => l, "primes" => primes_json(range),
            "s_max" => range.s_max, "d" => range.d, "bound" => range.bound
        },
        cases,
        failures,
    ))
}

/// Requires `v_p(p H_J − H_{⌊J/p⌋}) >= 1` for `0 <= J <= j_max`.
pub fn verify_harmonic_reduction(primes: &[Prime], j_max: u64) -> CongruenceReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for &p in primes {
        let pi = p.get();
        for j in 0..=j_max {
            cases += 1;
            let value = harmonic_at(j as i64) * int(BigInt::from(pi)) - harmonic_at((j / pi) as i64);
            let actual = vp_rat(&value, p);
            if actual < Valuation::Finite(1) {
                failures.push(Witness::new(
                    params! { "p" => pi, "J" => j },
                    &value,
                    Valuation::Finite(1),
                    actual,
                    vec![pi as i64, j as i64],
                ));
            }
        }
    }
    CongruenceReport::from_failures(
        "harmonic-reduction",
        params! { "primes" => primes.iter().map(|p| p.get()).collect::<Vec<_>>(), "j_max" => j_max },
        cases,
        failures,
    )
}
