//! Integer tables for the box sums: map values scaled by a common
//! denominator, and the summand `U(k, K)` tabulated once per `(p, v, K)`
//! so that every box sum is a plain block sum of big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Dense;
use crate::exact::{vp_int, MultiIndex, Prime, Valuation};

/// `Λ · A(m)` on the tabulated box, with `Λ` the lcm of the denominators.
pub(super) struct Scaled {
    scale: BigInt,
    hi: Vec<i64>,
    ints: Vec<BigInt>,
}

impl Scaled {
    pub(super) fn new(table: &Dense<'_>) -> Self {
        let scale = table
            .values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints = table
            .values
            .iter()
            .map(|v| v.numer() * (&scale / v.denom()))
            .collect();
        Scaled {
            scale,
            hi: table.hi.clone(),
            ints,
        }
    }

    fn at(&self, m: &[i64]) -> &BigInt {
        let mut off = 0usize;
        for (&x, &h) in m.iter().zip(&self.hi) {
            assert!((0..=h).contains(&x), "index outside the tabulated box");
            off = off * (h as usize + 1) + x as usize;
        }
        &self.ints[off]
    }

    /// `x / Λ²` and its valuation.
    pub(super) fn unscale(&self, x: &BigInt, p: Prime) -> (BigRational, Valuation) {
        let sq = &self.scale * &self.scale;
        let v = match vp_int(x, p) {
            Valuation::Finite(e) => Valuation::Finite(e - 2 * vp_int(&self.scale, p).finite().unwrap_or(0)),
            Valuation::Infinite => Valuation::Infinite,
        };
        (BigRational::new(x.clone(), sq), v)
    }
}

/// `Λ² U(k, K)` for `0 <= k <= min(K, cap)`.
pub(super) struct Grid {
    top: Vec<i64>,
    values: Vec<BigInt>,
}

impl Grid {
    pub(super) fn new(a: &Scaled, p: Prime, v: &MultiIndex, big_k: &MultiIndex, cap: &MultiIndex) -> Self {
        let pi = p.as_i64();
        let top: Vec<i64> = big_k
            .as_slice()
            .iter()
            .zip(cap.as_slice())
            .map(|(&k, &c)| k.min(c))
            .collect();
        if top.iter().any(|&t| t < 0) {
            return Grid { top, values: Vec::new() };
        }
        let values = MultiIndex::up_to(&MultiIndex::new(top.clone()))
            .map(|k| {
                let rest = big_k.sub(&k);
                a.at(v.add_scaled(pi, &rest).as_slice()) * a.at(k.as_slice())
                    - a.at(v.add_scaled(pi, &k).as_slice()) * a.at(rest.as_slice())
            })
            .collect();
        Grid { top, values }
    }

    pub(super) fn get(&self, k: &[i64]) -> &BigInt {
        let mut off = 0usize;
        for (&x, &t) in k.iter().zip(&self.top) {
            off = off * (t as usize + 1) + x as usize;
        }
        &self.values[off]
    }

    /// `Σ_{lo <= k <= hi} Λ² U(k, K)`, clipped to the grid, which must
    /// cover every `k <= K` in the block.
    pub(super) fn block(&self, lo: &MultiIndex, hi: &MultiIndex) -> BigInt {
        if self.values.is_empty() {
            return BigInt::zero();
        }
        let hi = MultiIndex::new(
            hi.as_slice()
                .iter()
                .zip(&self.top)
                .map(|(&h, &t)| h.min(t))
                .collect(),
        );
        let mut total = BigInt::zero();
        for k in MultiIndex::range_inclusive(lo, &hi) {
            total += self.get(k.as_slice());
        }
        total
    }
}
