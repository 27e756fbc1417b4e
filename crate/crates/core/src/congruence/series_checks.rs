//! Checks on whole series: the Dieudonné–Dwork quotient, the reduction
//! congruence `F G(z^p) − p F(z^p) G ∈ pΣz_iℤ_p[[z]]`, its coefficients
//! `C(a + pK)`, and the end-to-end integrality pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::dwork::{exact_witness, primes_json, theorem1_box_sum};
use super::{digits, key_of, CoeffMap, CongruenceError, Result, SweepRange};
use crate::exact::{harmonic_at, vp_rat, MultiIndex, Prime, Valuation};
use crate::gkz::{build_f, build_g_at, GkzSpec};
use crate::mps::{is_integral, is_p_integral, IntegralityMode, Series, SeriesError, Substitution};
use crate::params;
use crate::report::{CongruenceReport, Witness};

fn require_constant(s: &Series, expected: i64) -> std::result::Result<(), SeriesError> {
    let c0 = s.constant_term();
    if c0 != BigRational::from_integer(BigInt::from(expected)) {
        return Err(SeriesError::ConstantTerm {
            expected: expected.to_string(),
            found: c0.to_string(),
        });
    }
    Ok(())
}

fn renamed(mut r: CongruenceReport, check: &str) -> CongruenceReport {
    r.check = check.to_string();
    r
}

/// Tests `S(z^p)/S(z)^p ∈ 1 + pΣz_iℤ_p[[z]]` to the truncation degree of `S`.
pub fn check_dieudonne_dwork(s: &Series, p: Prime) -> Result<CongruenceReport> {
    require_constant(s, 1)?;
    let pe = p.get() as u32;
    let quotient = s.frobenius(pe).checked_div(&s.pow(pe))?;
    Ok(renamed(
        is_p_integral(&quotient, p, IntegralityMode::OnePlusPZp),
        "dieudonne-dwork",
    ))
}

/// `F(z)G(z^p) − pF(z^p)G(z)`.
pub fn reduction_series(f: &Series, g: &Series, p: Prime) -> Result<Series> {
    let pe = p.get() as u32;
    let left = f.checked_mul(&g.frobenius(pe))?;
    let right = f.frobenius(pe).checked_mul(g)?.scale_int(p.as_i64());
    Ok(left.checked_sub(&right)?)
}

/// Tests `F(z)G(z^p) − pF(z^p)G(z) ∈ pΣz_iℤ_p[[z]]`; needs `F(0) = 1`,
/// `G(0) = 0`.
pub fn check_reduction(f: &Series, g: &Series, p: Prime) -> Result<CongruenceReport> {
    require_constant(f, 1)?;
    require_constant(g, 0)?;
    let r = reduction_series(f, g, p)?;
    Ok(renamed(is_p_integral(&r, p, IntegralityMode::PZp), "reduction"))
}

fn check_digits(a: &MultiIndex, p: Prime, d: usize) -> Result<()> {
    if a.dim() != d || a.as_slice().iter().any(|&x| x < 0 || x >= p.as_i64()) {
        return Err(CongruenceError::Range(format!("a = {a} must have {d} digits in [0, {p})", p = p.get())));
    }
    Ok(())
}

fn check_k(big_k: &MultiIndex, d: usize) -> Result<()> {
    if big_k.dim() != d || !big_k.is_nonneg() {
        return Err(CongruenceError::Range(format!("K = {big_k} must be a nonnegative {d}-vector")));
    }
    Ok(())
}

fn b_rat(spec: &GkzSpec, m: &MultiIndex) -> BigRational {
    BigRational::from_integer(spec.b(m))
}

/// `C(a + pK) = Σ_{0<=k<=K} B_N(a+pk) B_N(K−k) (H_{L·(K−k)} − p H_{L·a + pL·k})`,
/// the coefficient of `z^{a+pK}` in the reduction series of `F_N`, `G_{L,N}`.
pub fn compute_c(
    spec: &GkzSpec,
    l: &MultiIndex,
    p: Prime,
    a: &MultiIndex,
    big_k: &MultiIndex,
) -> Result<BigRational> {
    let d = spec.d();
    check_digits(a, p, d)?;
    check_k(big_k, d)?;
    check_k(l, d)?;
    let pi = p.as_i64();
    let ph = BigRational::from_integer(BigInt::from(pi));
    let la = l.dot(a);
    let mut total = BigRational::zero();
    for k in MultiIndex::up_to(big_k) {
        let rest = big_k.sub(&k);
        let h = harmonic_at(l.dot(&rest)) - &ph * harmonic_at(la + pi * l.dot(&k));
        total += b_rat(spec, &a.add_scaled(pi, &k)) * b_rat(spec, &rest) * h;
    }
    Ok(total)
}

/// Requires `v_p(C(a + pK)) >= 1` for every prime, digit vector `a` and
/// `0 <= K <= bound`. Needs an admissible `L`.
pub fn check_c_in_pzp(spec: &GkzSpec, l: &MultiIndex, range: &SweepRange) -> Result<CongruenceReport> {
    if range.d != spec.d() {
        return Err(CongruenceError::Range(format!("spec dimension {} but d = {}", spec.d(), range.d)));
    }
    if !spec.is_admissible(l) {
        return Err(CongruenceError::Inadmissible(l.to_string()));
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for &p in &range.primes {
        let tuples: Vec<(MultiIndex, MultiIndex)> = digits(range.d, p.as_i64())
            .flat_map(|a| MultiIndex::up_to(&range.box_hi()).map(move |k| (a.clone(), k)))
            .collect();
        cases += tuples.len() as u64;
        let found: Vec<Result<Option<Witness>>> = tuples
            .par_iter()
            .map(|(a, k)| {
                let value = compute_c(spec, l, p, a, k)?;
                let actual = vp_rat(&value, p);
                Ok((actual < Valuation::Finite(1)).then(|| {
                    Witness::new(
                        params! { "p" => p.get(), "a" => a, "K" => k },
                        &value,
                        Valuation::Finite(1),
                        actual,
                        key_of(&[&[p.as_i64()], a.as_slice(), k.as_slice()]),
                    )
                }))
            })
            .collect();
        for f in found {
            failures.extend(f?);
        }
    }
    Ok(CongruenceReport::from_failures(
        "c-in-pzp",
        params! {
            "spec" => spec.to_string(), "L" => l, "primes" => primes_json(range),
            "bound" => range.bound
        },
        cases,
        failures,
    ))
}

/// Evaluates three exactly equal forms of the harmonic part of `C(a + pK)`:
/// the direct sum `Σ_k B_N(a+pk)B_N(K−k)(H_{L·(K−k)} − H_{L·k})`, its
/// antisymmetrized form `−Σ_k H_{L·k} W(k)`, and the decomposition over
/// `p`-adic boxes `−Σ_{s<r} Σ_m (H_{Σ L_i m_i p^s} − H_{Σ L_i ⌊m_i/p⌋ p^{s+1}}) Σ_box W`,
/// where `W(k) = B_N(a+pk)B_N(K−k) − B_N(a+p(K−k))B_N(k)` and `p^{r−1} > max K`.
pub fn verify_rearrangement(
    spec: &GkzSpec,
    l: &MultiIndex,
    p: Prime,
    a: &MultiIndex,
    big_k: &MultiIndex,
) -> Result<CongruenceReport> {
    let d = spec.d();
    check_digits(a, p, d)?;
    check_k(big_k, d)?;
    check_k(l, d)?;
    let pi = p.as_i64();
    let w = |k: &MultiIndex| -> BigRational {
        let rest = big_k.sub(k);
        b_rat(spec, &a.add_scaled(pi, k)) * b_rat(spec, &rest)
            - b_rat(spec, &a.add_scaled(pi, &rest)) * b_rat(spec, k)
    };

    let mut direct = BigRational::zero();
    let mut antisym = BigRational::zero();
    for k in MultiIndex::up_to(big_k) {
        let rest = big_k.sub(&k);
        let hl = harmonic_at(l.dot(&k));
        direct += b_rat(spec, &a.add_scaled(pi, &k))
            * b_rat(spec, &rest)
            * (harmonic_at(l.dot(&rest)) - &hl);
        antisym -= hl * w(&k);
    }

    let k_top = big_k.as_slice().iter().copied().max().unwrap_or(0);
    let mut r = 1u32;
    while p.pow(r - 1) <= k_top {
        r += 1;
    }
    let bn = CoeffMap::b_n(spec);
    let mut boxed = BigRational::zero();
    for s in 0..r {
        let ps = p.pow(s);
        for m in MultiIndex::up_to(&MultiIndex::constant(d, p.pow(r - s) - 1)) {
            let hd = harmonic_at(l.dot(&m) * ps) - harmonic_at(l.dot(&m.div_floor(pi)) * ps * pi);
            if hd.is_zero() {
                continue;
            }
            // the box sum of U is minus the box sum of W
            boxed += hd * theorem1_box_sum(&bn, p, a, &m, big_k, s);
        }
    }

    let mut failures = Vec::new();
    for (idx, (name, x, y)) in [("direct-vs-antisymmetric", &direct, &antisym), ("antisymmetric-vs-boxes", &antisym, &boxed)]
        .into_iter()
        .enumerate()
    {
        let defect = x - y;
        if !defect.is_zero() {
            failures.push(exact_witness(
                params! { "p" => p.get(), "a" => a, "K" => big_k, "form" => name },
                &defect,
                p,
                key_of(&[&[p.as_i64()], a.as_slice(), big_k.as_slice(), &[idx as i64]]),
            ));
        }
    }
    Ok(CongruenceReport::from_failures(
        "rearrangement",
        params! {
            "spec" => spec.to_string(), "L" => l, "p" => p.get(), "a" => a, "K" => big_k, "r" => r
        },
        2,
        failures,
    ))
}

/// [`verify_rearrangement`] over every prime, digit vector `a` and
/// `0 <= K <= bound`.
pub fn verify_rearrangement_sweep(
    spec: &GkzSpec,
    l: &MultiIndex,
    range: &SweepRange,
) -> Result<CongruenceReport> {
    if range.d != spec.d() {
        return Err(CongruenceError::Range(format!("spec dimension {} but d = {}", spec.d(), range.d)));
    }
    let mut tuples = Vec::new();
    for &p in &range.primes {
        for a in digits(range.d, p.as_i64()) {
            for k in MultiIndex::up_to(&range.box_hi()) {
                tuples.push((p, a.clone(), k));
            }
        }
    }
    let reports: Vec<Result<CongruenceReport>> = tuples
        .par_iter()
        .map(|(p, a, k)| verify_rearrangement(spec, l, *p, a, k))
        .collect();
    let mut cases = 0;
    let mut failures = Vec::new();
    for r in reports {
        let r = r?;
        cases += r.cases;
        failures.extend(r.witnesses);
    }
    Ok(CongruenceReport::from_failures(
        "rearrangement",
        params! {
            "spec" => spec.to_string(), "L" => l, "primes" => primes_json(range), "bound" => range.bound
        },
        cases,
        failures,
    ))
}

/// End to end for a mirror-type map: `exp(G_{L,N}/F_N)` (after the optional
/// specialization) must be integral to `degree`, and the reduction
/// congruence must hold for `F`, `G` at every listed prime.
pub fn full_pipeline_check(
    spec: &GkzSpec,
    l: &MultiIndex,
    primes: &[Prime],
    degree: u32,
    subst: Option<&Substitution>,
    allow_inadmissible: bool,
) -> Result<CongruenceReport> {
    if !spec.is_admissible(l) && !allow_inadmissible {
        return Err(CongruenceError::Inadmissible(l.to_string()));
    }
    let mut f = build_f(spec, degree);
    let mut g = build_g_at(spec, l, degree)?;
    if let Some(sub) = subst {
        f = f.specialize(sub)?;
        g = g.specialize(sub)?;
    }
    let q = g.checked_div(&f)?.exp()?;
    let mut parts = vec![is_integral(&q)];
    for &p in primes {
        parts.push(renamed(check_reduction(&f, &g, p)?, &format!("reduction-p{}", p.get())));
    }
    Ok(CongruenceReport::merge(
        "pipeline",
        params! {
            "spec" => spec.to_string(), "L" => l, "degree" => degree,
            "primes" => primes.iter().map(|p| p.get()).collect::<Vec<_>>(),
            "substitution" => subst.map(|s| s.to_string()).unwrap_or_default(),
            "admissible" => spec.is_admissible(l)
        },
        parts,
    ))
}
