//! Dwork-type formal congruences: the box-sum congruence for a pair of
//! maps `A`, `g`, its hypothesis (iii), the identities among the box sums,
//! and the combinatorial rearrangement identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::grid::{Grid, Scaled};
use super::{digits, gather, key_of, nonzero_at, CoeffMap, Result, SweepRange, Values};
use crate::exact::{vp_rat, MultiIndex, Prime, Valuation};
use crate::params;
use crate::report::{CongruenceReport, Witness};

/// `U(k, K) = A(v + p(K−k)) A(k) − A(v + pk) A(K−k)`, zero-extended.
pub fn theorem1_summand<V: Values + ?Sized>(
    a: &V,
    p: Prime,
    v: &MultiIndex,
    k: &MultiIndex,
    big_k: &MultiIndex,
) -> BigRational {
    let pi = p.as_i64();
    let rest = big_k.sub(k);
    let lhs = a.at(&v.add_scaled(pi, &rest)).into_owned() * a.at(k).as_ref();
    let rhs = a.at(&v.add_scaled(pi, k)).into_owned() * a.at(&rest).as_ref();
    lhs - rhs
}

/// `H(m, K; s) = Σ_{p^s m <= k <= p^s(m+1) − 1} U(k, K)`.
pub fn theorem1_box_sum<V: Values + ?Sized>(
    a: &V,
    p: Prime,
    v: &MultiIndex,
    m: &MultiIndex,
    big_k: &MultiIndex,
    s: u32,
) -> BigRational {
    let ps = p.pow(s);
    let lo = m.scale(ps);
    // k beyond K contributes nothing
    let hi_full = m.add(&MultiIndex::ones(m.dim())).scale(ps);
    let hi = MultiIndex::new(
        hi_full
            .as_slice()
            .iter()
            .zip(big_k.as_slice())
            .map(|(&h, &kk)| (h - 1).min(kk))
            .collect(),
    );
    MultiIndex::range_inclusive(&lo, &hi)
        .map(|k| theorem1_summand(a, p, v, &k, big_k))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

/// Box sums clip `k` to `[0, K]`, so with `K` starting at or below 0 the
/// sweep reads `A` on exactly `0 <= m <= (p − 1 + p K_max)·1`.
fn conclusion_extent(range: &SweepRange, p: Prime) -> i64 {
    let pi = p.as_i64();
    pi - 1 + pi * range.k_max_for(p).max(0)
}

/// Checks, for every `p`, `s <= s_max`, digit vector `a`, `0 <= m <= bound`
/// and `K` in the `K` box, that
/// `Σ_{p^s m <= k <= p^s(m+1)−1} (A(a+pk)A(K−k) − A(a+p(K−k))A(k))`
/// lies in `p^{s+1} g(m) ℤ_p`.
pub fn verify_theorem1_conclusion(
    a: &CoeffMap,
    g: &CoeffMap,
    range: &SweepRange,
) -> Result<CongruenceReport> {
    let mut cases = 0u64;
    let mut failures = Vec::new();
    let ms: Vec<MultiIndex> = MultiIndex::up_to(&range.box_hi()).collect();
    for &p in &range.primes {
        let pi = p.as_i64();
        let ta = a.tabulate(&MultiIndex::constant(range.d, conclusion_extent(range, p)));
        let tg = g.tabulate(&range.box_hi());
        ta.require_nonzero()?;
        tg.require_nonzero()?;
        let scaled = Scaled::new(&ta);
        let cap = MultiIndex::constant(range.d, p.pow(range.s_max) * (range.bound + 1) - 1);
        let (klo, khi) = range.k_box(p);
        let pairs: Vec<(MultiIndex, MultiIndex)> = digits(range.d, pi)
            .flat_map(|dig| MultiIndex::range_inclusive(&klo, &khi).map(move |k| (dig.clone(), k)))
            .collect();
        cases += pairs.len() as u64 * (range.s_max as u64 + 1) * ms.len() as u64;
        let outcomes: Vec<Vec<Witness>> = pairs
            .par_iter()
            .map(|(dig, big_k)| {
                let grid = Grid::new(&scaled, p, dig, big_k, &cap);
                let mut found = Vec::new();
                for s in 0..=range.s_max {
                    let ps = p.pow(s);
                    for m in &ms {
                        let lo = m.scale(ps);
                        if !big_k.dominates(&lo) {
                            continue;
                        }
                        let hi = m.add(&MultiIndex::ones(range.d)).scale(ps).sub(&MultiIndex::ones(range.d));
                        let (sum, actual) = scaled.unscale(&-grid.block(&lo, &hi), p);
                        let required = vp_rat(&tg.get(m), p) + (s as i64 + 1);
                        if actual >= required {
                            continue;
                        }
                        found.push(Witness::new(
                            params! {
                                "p" => p.get(), "s" => s, "a" => dig, "m" => m, "K" => big_k
                            },
                            &sum,
                            required,
                            actual,
                            key_of(&[&[pi, s as i64], dig.as_slice(), m.as_slice(), big_k.as_slice()]),
                        ));
                    }
                }
                found
            })
            .collect();
        failures.extend(outcomes.into_iter().flatten());
    }
    Ok(CongruenceReport::from_failures(
        "theorem1-conclusion",
        params! {
            "A" => a.name(), "g" => g.name(), "primes" => primes_json(range),
            "s_max" => range.s_max, "d" => range.d, "bound" => range.bound,
            "k_min" => range.k_min, "k_max" => range.k_max
        },
        cases,
        failures,
    ))
}

pub(super) fn primes_json(range: &SweepRange) -> Vec<u64> {
    range.primes.iter().map(|p| p.get()).collect()
}

/// Checks
/// `A(v+pu+np^{s+1})/A(v+pu) − A(u+np^s)/A(u) ∈ p^{s+1} g(n)/g(v+pu) ℤ_p`
/// for `v_i < p`, `u_i < p^s`, `0 <= n <= bound`.
pub fn verify_theorem1_hypothesis_iii(
    a: &CoeffMap,
    g: &CoeffMap,
    range: &SweepRange,
) -> Result<CongruenceReport> {
    let mut cases = 0u64;
    let mut failures = Vec::new();
    for &p in &range.primes {
        let pi = p.as_i64();
        let mut tuples = Vec::new();
        for s in 0..=range.s_max {
            for v in digits(range.d, pi) {
                for u in digits(range.d, p.pow(s)) {
                    for n in MultiIndex::up_to(&range.box_hi()) {
                        tuples.push((s, v.clone(), u.clone(), n));
                    }
                }
            }
        }
        cases += tuples.len() as u64;
        let outcomes: Vec<Result<Option<Witness>>> = tuples
            .par_iter()
            .map(|(s, v, u, n)| {
                let ps = p.pow(*s);
                let vpu = v.add_scaled(pi, u);
                let left = a.eval(&vpu.add_scaled(ps * pi, n)) / nonzero_at(a, &vpu)?.as_ref();
                let right = a.eval(&u.add_scaled(ps, n)) / nonzero_at(a, u)?.as_ref();
                let diff = left - right;
                let gn = nonzero_at(g, n)?;
                let gvpu = nonzero_at(g, &vpu)?;
                let required = vp_rat(&gn, p) + (*s as i64 + 1 - finite(vp_rat(&gvpu, p)));
                let actual = vp_rat(&diff, p);
                if actual >= required {
                    return Ok(None);
                }
                Ok(Some(Witness::new(
                    params! { "p" => p.get(), "s" => s, "v" => v, "u" => u, "n" => n },
                    &diff,
                    required,
                    actual,
                    key_of(&[&[pi, *s as i64], v.as_slice(), u.as_slice(), n.as_slice()]),
                )))
            })
            .collect();
        failures.extend(gather(outcomes)?);
    }
    Ok(CongruenceReport::from_failures(
        "theorem1-hypothesis-iii",
        params! {
            "A" => a.name(), "g" => g.name(), "primes" => primes_json(range),
            "s_max" => range.s_max, "d" => range.d, "bound" => range.bound
        },
        cases,
        failures,
    ))
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("valuation of a nonzero value")
}

/// The three identities among the box sums `H(m, K; s)`:
/// antisymmetry `U(K−k, K) = −U(k, K)` for `0 <= k <= K`; completeness
/// `Σ_{0 <= m <= M} H(m, K; s) = 0` for the least `M` with
/// `p^s (M + 1) > K`; nesting
/// `H(k, K; s+1) = Σ_{0 <= i <= (p−1)·1} H(i + pk, K; s)` for `s < s_max`.
/// All are exact equalities. `K` runs over the range's `K` box, clipped
/// below at 0.
pub fn verify_box_sum_identities(a: &CoeffMap, range: &SweepRange) -> Result<CongruenceReport> {
    let mut anti = (0u64, Vec::new());
    let mut complete = (0u64, Vec::new());
    let mut nest = (0u64, Vec::new());
    let ms: Vec<MultiIndex> = MultiIndex::up_to(&range.box_hi()).collect();
    let ones = MultiIndex::ones(range.d);
    for &p in &range.primes {
        let pi = p.as_i64();
        let ta = a.tabulate(&MultiIndex::constant(range.d, conclusion_extent(range, p)));
        let scaled = Scaled::new(&ta);
        let (klo, khi) = range.k_box(p);
        let klo = MultiIndex::new(klo.as_slice().iter().map(|&x| x.max(0)).collect());
        let pairs: Vec<(MultiIndex, MultiIndex)> = digits(range.d, pi)
            .flat_map(|v| MultiIndex::range_inclusive(&klo, &khi).map(move |k| (v.clone(), k)))
            .collect();
        let block = |grid: &Grid, m: &MultiIndex, s: u32| -> BigInt {
            let ps = p.pow(s);
            let lo = m.scale(ps);
            grid.block(&lo, &m.add(&ones).scale(ps).sub(&ones))
        };

        type Found = [(u64, Vec<Witness>); 3];
        let found: Vec<Found> = pairs
            .par_iter()
            .map(|(v, big_k)| {
                let grid = Grid::new(&scaled, p, v, big_k, big_k);
                let mut out: Found = Default::default();

                for k in MultiIndex::up_to(big_k) {
                    out[0].0 += 1;
                    let defect = grid.get(k.as_slice()) + grid.get(big_k.sub(&k).as_slice());
                    if !defect.is_zero() {
                        let (value, _) = scaled.unscale(&defect, p);
                        out[0].1.push(exact_witness(
                            params! { "p" => p.get(), "v" => v, "k" => &k, "K" => big_k },
                            &value,
                            p,
                            key_of(&[&[pi], v.as_slice(), big_k.as_slice(), k.as_slice()]),
                        ));
                    }
                }

                for s in 0..=range.s_max {
                    let big_m = big_k.div_floor(p.pow(s));
                    out[1].0 += 1;
                    let total = MultiIndex::up_to(&big_m)
                        .map(|m| block(&grid, &m, s))
                        .fold(BigInt::zero(), |acc, x| acc + x);
                    if !total.is_zero() {
                        let (value, _) = scaled.unscale(&total, p);
                        out[1].1.push(exact_witness(
                            params! { "p" => p.get(), "s" => s, "v" => v, "M" => &big_m, "K" => big_k },
                            &value,
                            p,
                            key_of(&[&[pi, s as i64], v.as_slice(), big_k.as_slice()]),
                        ));
                    }
                    if s == range.s_max {
                        continue;
                    }
                    for m in &ms {
                        out[2].0 += 1;
                        let inner = digits(range.d, pi)
                            .map(|i| block(&grid, &i.add_scaled(pi, m), s))
                            .fold(BigInt::zero(), |acc, x| acc + x);
                        let defect = block(&grid, m, s + 1) - inner;
                        if !defect.is_zero() {
                            let (value, _) = scaled.unscale(&defect, p);
                            out[2].1.push(exact_witness(
                                params! { "p" => p.get(), "s" => s, "v" => v, "m" => m, "K" => big_k },
                                &value,
                                p,
                                key_of(&[&[pi, s as i64], v.as_slice(), big_k.as_slice(), m.as_slice()]),
                            ));
                        }
                    }
                }
                out
            })
            .collect();
        for [x, y, z] in found {
            for (acc, part) in [(&mut anti, x), (&mut complete, y), (&mut nest, z)] {
                acc.0 += part.0;
                acc.1.extend(part.1);
            }
        }
    }
    let common = params! {
        "A" => a.name(), "primes" => primes_json(range), "s_max" => range.s_max,
        "d" => range.d, "bound" => range.bound, "k_min" => range.k_min, "k_max" => range.k_max
    };
    Ok(CongruenceReport::merge(
        "box-sum-identities",
        common.clone(),
        vec![
            CongruenceReport::from_failures("antisymmetry", common.clone(), anti.0, anti.1),
            CongruenceReport::from_failures("completeness", common.clone(), complete.0, complete.1),
            CongruenceReport::from_failures("nesting", common, nest.0, nest.1),
        ],
    ))
}

/// Witness for an exact identity: the defect should be 0.
pub(super) fn exact_witness(
    params: serde_json::Map<String, serde_json::Value>,
    defect: &BigRational,
    p: Prime,
    key: Vec<i64>,
) -> Witness {
    Witness::new(params, defect, Valuation::Infinite, vp_rat(defect, p), key)
}

/// Evaluates both sides of the rearrangement identity
/// `Σ_{0 <= k <= (p^r−1)·1} Z(k)W(k) = Z(0) W̄_r(0)
///   + Σ_{s<r} Σ_{0 <= m <= (p^{r−s}−1)·1} (Z(p^s m) − Z(p^{s+1}⌊m/p⌋)) W̄_s(m)`
/// with `W̄_s(m) = Σ_{p^s m <= k <= p^s(m+1)−1} W(k)`, and requires equality.
pub fn verify_comb_identity(
    z: &CoeffMap,
    w: &CoeffMap,
    p: Prime,
    r: u32,
    d: usize,
) -> Result<CongruenceReport> {
    let (lhs, rhs) = comb_sides(z, w, p, r, d);
    let defect = &lhs - &rhs;
    let failures = if defect.is_zero() {
        vec![]
    } else {
        vec![exact_witness(
            params! { "p" => p.get(), "r" => r, "d" => d },
            &defect,
            p,
            vec![],
        )]
    };
    Ok(CongruenceReport::from_failures(
        "comb-identity",
        params! { "Z" => z.name(), "W" => w.name(), "p" => p.get(), "r" => r, "d" => d },
        1,
        failures,
    ))
}

pub(super) fn comb_sides(
    z: &CoeffMap,
    w: &CoeffMap,
    p: Prime,
    r: u32,
    d: usize,
) -> (BigRational, BigRational) {
    let top = MultiIndex::constant(d, p.pow(r) - 1);
    let tz = z.tabulate(&top);
    let tw = w.tabulate(&top);
    let lhs = MultiIndex::up_to(&top)
        .map(|k| tz.get(&k).into_owned() * tw.get(&k).as_ref())
        .fold(BigRational::zero(), |acc, x| acc + x);
    let w_bar = |s: u32, m: &MultiIndex| -> BigRational {
        let ps = p.pow(s);
        let lo = m.scale(ps);
        let hi = m.add(&MultiIndex::ones(d)).scale(ps).sub(&MultiIndex::ones(d));
        MultiIndex::range_inclusive(&lo, &hi)
            .map(|k| tw.get(&k).into_owned())
            .fold(BigRational::zero(), |acc, x| acc + x)
    };
    let zero = MultiIndex::zeros(d);
    let mut rhs = tz.get(&zero).into_owned() * w_bar(r, &zero);
    let pi = p.as_i64();
    for s in 0..r {
        let ps = p.pow(s);
        let m_top = MultiIndex::constant(d, p.pow(r - s) - 1);
        for m in MultiIndex::up_to(&m_top) {
            let zd = tz.get(&m.scale(ps)).into_owned() - tz.get(&m.div_floor(pi).scale(ps * pi)).as_ref();
            if !zd.is_zero() {
                rhs += zd * w_bar(s, &m);
            }
        }
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::gkz::GkzSpec;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn summand_is_antisymmetric_by_hand() {
        let a = CoeffMap::b_n(&GkzSpec::from_vecs(&[&[2, 1]]).unwrap());
        let v = MultiIndex::new(vec![1, 0]);
        let big_k = MultiIndex::new(vec![2, 1]);
        let k = MultiIndex::new(vec![1, 0]);
        let u = theorem1_summand(&a, p(2), &v, &k, &big_k);
        let w = theorem1_summand(&a, p(2), &v, &big_k.sub(&k), &big_k);
        assert_eq!(u, -w);
    }

    #[test]
    fn comb_identity_degenerate_cases() {
        let z = CoeffMap::random(1, -5, 5);
        let w = CoeffMap::random(2, -5, 5);
        let (l, r) = comb_sides(&z, &w, p(3), 0, 2);
        assert_eq!(l, r);
        let origin = MultiIndex::zeros(2);
        assert_eq!(l, z.eval(&origin) * w.eval(&origin));

        let one = CoeffMap::from_fn("one", |_| rat(1, 1));
        let (l, r) = comb_sides(&one, &w, p(2), 2, 2);
        let total = MultiIndex::up_to(&MultiIndex::constant(2, 3))
            .map(|k| w.eval(&k))
            .fold(BigRational::zero(), |acc, x| acc + x);
        assert_eq!(l, total);
        assert_eq!(r, total);
    }

    #[test]
    fn negative_k_is_vacuous() {
        let a = CoeffMap::b_n(&GkzSpec::from_vecs(&[&[2, 1]]).unwrap());
        let s = theorem1_box_sum(
            &a,
            p(2),
            &MultiIndex::zeros(2),
            &MultiIndex::zeros(2),
            &MultiIndex::new(vec![-1, 3]),
            1,
        );
        assert!(s.is_zero());
    }
}
