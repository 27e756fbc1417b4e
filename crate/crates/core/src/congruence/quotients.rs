//! Quotients of multinomial products at p-adically related arguments,
//! and the p-adic gamma function facts they rest on.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::dwork::{exact_witness, primes_json};
use super::{digits, key_of, CongruenceError, Result, SweepRange};
use crate::exact::{factorial, gamma_p, multinomial_b, vp_rat, MultiIndex, Prime, Valuation};
use crate::gkz::GkzSpec;
use crate::params;
use crate::report::{CongruenceReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientCheck {
    /// `B_N(v+pu+p^{s+1}n)/B_N(pu+p^{s+1}n) − B_N(v+pu)/B_N(pu) ∈ p^{s+1}ℤ_p`.
    ShiftedRatio,
    /// `B_N(pu+p^{s+1}n)/B_N(u+p^s n) = B_N(pu)/B_N(u) (1 + O(p^{s+1}))`.
    FrobeniusRatio,
    /// `B_N(u+np^s)/B_N(u) ∈ B_N(n)ℤ_p`.
    Divisibility,
    /// `v_p(B(N^(j), p^s u)/B(N^(j), u)) = 0`.
    ZeroValuation,
}

impl QuotientCheck {
    pub const ALL: [QuotientCheck; 4] = [
        QuotientCheck::ShiftedRatio,
        QuotientCheck::FrobeniusRatio,
        QuotientCheck::Divisibility,
        QuotientCheck::ZeroValuation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuotientCheck::ShiftedRatio => "lem1",
            QuotientCheck::FrobeniusRatio => "lem2",
            QuotientCheck::Divisibility => "lem33",
            QuotientCheck::ZeroValuation => "zero-valuation",
        }
    }
}

impl fmt::Display for QuotientCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuotientCheck {
    type Err = CongruenceError;

    fn from_str(s: &str) -> Result<Self> {
        QuotientCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CongruenceError::Range(format!("unknown quotient check {s:?}")))
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Runs one of the quotient checks over `p`, `s <= s_max`, digit vectors
/// `v < p`, `u < p^s` (`0 <= u <= bound` for the zero-valuation check) and
/// `0 <= n <= bound`.
pub fn verify_quotients(
    spec: &GkzSpec,
    range: &SweepRange,
    which: QuotientCheck,
) -> Result<CongruenceReport> {
    if range.d != spec.d() {
        return Err(CongruenceError::Range(format!(
            "spec dimension {} but d = {}",
            spec.d(),
            range.d
        )));
    }
    let mut cases = 0;
    let mut failures = Vec::new();
    for &p in &range.primes {
        let pi = p.as_i64();
        let found: Vec<Option<Witness>> = match which {
            QuotientCheck::ZeroValuation => {
                let tuples: Vec<(u32, usize, MultiIndex)> = (0..=range.s_max)
                    .flat_map(|s| {
                        (0..spec.k()).flat_map(move |j| {
                            MultiIndex::up_to(&range.box_hi()).map(move |u| (s, j, u))
                        })
                    })
                    .collect();
                cases += tuples.len() as u64;
                tuples
                    .par_iter()
                    .map(|(s, j, u)| {
                        let w = &spec.n_list()[*j];
                        let value = ratio(multinomial_b(w, &u.scale(p.pow(*s))), multinomial_b(w, u));
                        let actual = vp_rat(&value, p);
                        (actual != Valuation::Finite(0)).then(|| {
                            Witness::new(
                                params! { "p" => p.get(), "s" => s, "j" => j + 1, "u" => u },
                                &value,
                                Valuation::Finite(0),
                                actual,
                                key_of(&[&[pi, *s as i64, *j as i64], u.as_slice()]),
                            )
                        })
                    })
                    .collect()
            }
            _ => {
                let mut tuples = Vec::new();
                for s in 0..=range.s_max {
                    let vs: Vec<MultiIndex> = if which == QuotientCheck::Divisibility {
                        vec![MultiIndex::zeros(range.d)]
                    } else {
                        digits(range.d, pi).collect()
                    };
                    for v in vs {
                        for u in digits(range.d, p.pow(s)) {
                            for n in MultiIndex::up_to(&range.box_hi()) {
                                tuples.push((s, v.clone(), u.clone(), n));
                            }
                        }
                    }
                }
                cases += tuples.len() as u64;
                tuples
                    .par_iter()
                    .map(|(s, v, u, n)| quotient_case(spec, p, *s, v, u, n, which))
                    .collect()
            }
        };
        failures.extend(found.into_iter().flatten());
    }
    Ok(CongruenceReport::from_failures(
        format!("quotients-{}", which.name()),
        params! {
            "spec" => spec.to_string(), "which" => which.name(), "primes" => primes_json(range),
            "s_max" => range.s_max, "d" => range.d, "bound" => range.bound
        },
        cases,
        failures,
    ))
}

fn quotient_case(
    spec: &GkzSpec,
    p: Prime,
    s: u32,
    v: &MultiIndex,
    u: &MultiIndex,
    n: &MultiIndex,
    which: QuotientCheck,
) -> Option<Witness> {
    let pi = p.as_i64();
    let ps = p.pow(s);
    let b = |m: &MultiIndex| spec.b(m);
    let (value, required) = match which {
        QuotientCheck::ShiftedRatio => {
            let pu = u.scale(pi);
            let far = pu.add_scaled(ps * pi, n);
            let value = ratio(b(&v.add(&far)), b(&far)) - ratio(b(&v.add(&pu)), b(&pu));
            (value, Valuation::Finite(s as i64 + 1))
        }
        QuotientCheck::FrobeniusRatio => {
            let pu = u.scale(pi);
            let left = ratio(b(&pu.add_scaled(ps * pi, n)), b(&u.add_scaled(ps, n)));
            let right = ratio(b(&pu), b(u));
            (left / right - BigRational::one(), Valuation::Finite(s as i64 + 1))
        }
        QuotientCheck::Divisibility => {
            let value = ratio(b(&u.add_scaled(ps, n)), b(u));
            let required = vp_rat(&BigRational::from_integer(b(n)), p);
            (value, required)
        }
        QuotientCheck::ZeroValuation => unreachable!("handled by the caller"),
    };
    let actual = vp_rat(&value, p);
    (actual < required).then(|| {
        Witness::new(
            params! { "p" => p.get(), "s" => s, "v" => v, "u" => u, "n" => n },
            &value,
            required,
            actual,
            key_of(&[&[pi, s as i64], v.as_slice(), u.as_slice(), n.as_slice()]),
        )
    })
}

/// `Γ_p(n) mod M`, exact residue arithmetic.
fn gamma_p_mod(n: u64, p: u64, modulus: u128) -> u128 {
    let mut acc: u128 = 1 % modulus;
    for k in 1..n {
        if k % p != 0 {
            acc = acc * (k as u128 % modulus) % modulus;
        }
    }
    if n % 2 == 1 && acc != 0 {
        modulus - acc
    } else {
        acc
    }
}

/// Two facts about `Γ_p`: the exact identity
/// `(np)!/n! = (−1)^{np+1} p^n Γ_p(1+np)` for `1 <= n <= n_max`, and the
/// congruence `Γ_p(k + np^s) ≡ Γ_p(k) mod p^s` for `1 <= k, n <= kn_max`,
/// `s <= s_max`.
pub fn verify_gamma_p(primes: &[Prime], n_max: u64, kn_max: u64, s_max: u32) -> CongruenceReport {
    let mut ident = Vec::new();
    let mut ident_cases = 0;
    let mut cong_cases = 0;
    let mut cong = Vec::new();
    for &p in primes {
        let pv = p.get();
        for n in 1..=n_max {
            ident_cases += 1;
            let left = ratio(factorial(n * pv), factorial(n));
            let sign = if (n * pv + 1) % 2 == 0 { 1 } else { -1 };
            let right = BigInt::from(sign) * BigInt::from(pv).pow(n as u32) * gamma_p(1 + n * pv, p);
            let defect = left - BigRational::from_integer(right);
            if !defect.is_zero() {
                ident.push(exact_witness(
                    params! { "p" => pv, "n" => n },
                    &defect,
                    p,
                    vec![pv as i64, n as i64],
                ));
            }
        }
        for s in 0..=s_max {
            let modulus = (pv as u128).pow(s);
            let ps = pv.pow(s);
            let pairs: Vec<(u64, u64)> = (1..=kn_max)
                .flat_map(|k| (1..=kn_max).map(move |n| (k, n)))
                .collect();
            cong_cases += pairs.len() as u64;
            let found: Vec<Option<Witness>> = pairs
                .par_iter()
                .map(|&(k, n)| {
                    if gamma_p_mod(k + n * ps, pv, modulus) == gamma_p_mod(k, pv, modulus) {
                        return None;
                    }
                    let diff = gamma_p(k + n * ps, p) - gamma_p(k, p);
                    let value = BigRational::from_integer(diff);
                    Some(Witness::new(
                        params! { "p" => pv, "s" => s, "k" => k, "n" => n },
                        &value,
                        Valuation::Finite(s as i64),
                        vp_rat(&value, p),
                        vec![pv as i64, s as i64, k as i64, n as i64],
                    ))
                })
                .collect();
            cong.extend(found.into_iter().flatten());
        }
    }
    let common = params! {
        "primes" => primes.iter().map(|p| p.get()).collect::<Vec<_>>(),
        "n_max" => n_max, "kn_max" => kn_max, "s_max" => s_max
    };
    CongruenceReport::merge(
        "gamma-p",
        common.clone(),
        vec![
            CongruenceReport::from_failures("factorial-identity", common.clone(), ident_cases, ident),
            CongruenceReport::from_failures("congruence", common, cong_cases, cong),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn residues_match_exact_values() {
        for n in 1..40 {
            let exact = gamma_p(n, p(3));
            let m = BigInt::from(27);
            let r = ((exact % &m) + &m) % &m;
            assert_eq!(r, BigInt::from(gamma_p_mod(n, 3, 27)));
        }
    }

    #[test]
    fn names_round_trip() {
        for c in QuotientCheck::ALL {
            assert_eq!(c.name().parse::<QuotientCheck>().unwrap(), c);
        }
        assert!("lem4".parse::<QuotientCheck>().is_err());
    }

    #[test]
    fn gamma_fails_only_where_expected_at_two() {
        let r = verify_gamma_p(&[p(2)], 10, 6, 2);
        assert!(!r.pass);
        assert!(r.witnesses.iter().all(|w| w.params["s"] == 2));
        let w = r
            .witnesses
            .iter()
            .find(|w| w.params["k"] == 1 && w.params["n"] == 1)
            .unwrap();
        // Γ_2(5) − Γ_2(1) = −3 − (−1)
        assert_eq!(w.value.num, "-2");
        assert!(verify_gamma_p(&[p(3), p(5)], 10, 6, 3).pass);
    }
}
