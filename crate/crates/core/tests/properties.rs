//! Algebraic invariants over randomly generated inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use gkz_mirror::congruence::{theorem1_summand, verify_comb_identity, CoeffMap};
use gkz_mirror::exact::{multinomial_b, vp_b, vp_int, vp_rat, MultiIndex, Prime};
use gkz_mirror::mps::{
    invert_map, is_integral, is_p_integral, monomials_up_to, round_trip_defect, CoefficientFile,
    IntegralityMode,
};
use gkz_mirror::{Series, Substitution};

const D: u32 = 4;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn series(dim: usize, degree: u32, den: bool) -> impl Strategy<Value = Series> {
    let monos: Vec<Vec<u32>> = monomials_up_to(dim, degree)
        .into_iter()
        .map(|m| m.exponents().to_vec())
        .collect();
    let n = monos.len();
    let coeff = if den {
        small_rat().boxed()
    } else {
        (-6i64..=6).prop_map(|x| BigRational::from_integer(BigInt::from(x))).boxed()
    };
    prop::collection::vec(coeff, n).prop_map(move |cs| {
        Series::from_terms(dim, degree, monos.iter().cloned().zip(cs)).unwrap()
    })
}

fn with_constant(s: Series, c: i64) -> Series {
    let shift = BigRational::from_integer(BigInt::from(c)) - s.constant_term();
    &s + &Series::constant(s.dim(), s.degree(), shift)
}

fn triple(dim: usize) -> impl Strategy<Value = (Series, Series, Series)> {
    (series(dim, D, true), series(dim, D, true), series(dim, D, true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws((a, b, c) in triple(2)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Series::zero(2, D));
    }

    #[test]
    fn reciprocal_is_an_inverse(a in series(2, D, true)) {
        let a = with_constant(a, 3);
        let r = a.reciprocal().unwrap();
        prop_assert_eq!(&a * &r, Series::one(2, D));
    }

    #[test]
    fn exp_and_log_are_inverse(a in series(2, D, true)) {
        let x = with_constant(a, 0);
        prop_assert_eq!(x.exp().unwrap().log().unwrap(), x.clone());
        let y = with_constant(x, 1);
        prop_assert_eq!(y.log().unwrap().exp().unwrap(), y);
    }

    #[test]
    fn exp_turns_sums_into_products((a, b, _) in triple(2)) {
        let (a, b) = (with_constant(a, 0), with_constant(b, 0));
        prop_assert_eq!((&a + &b).exp().unwrap(), &a.exp().unwrap() * &b.exp().unwrap());
    }

    #[test]
    fn frobenius_is_multiplicative((a, b, _) in triple(2), p in 2u32..=3) {
        prop_assert_eq!((&a * &b).frobenius(p), &a.frobenius(p) * &b.frobenius(p));
        prop_assert_eq!((&a + &b).frobenius(p), &a.frobenius(p) + &b.frobenius(p));
    }

    #[test]
    fn specialization_is_a_ring_map((a, b, _) in triple(2), weighted in any::<bool>()) {
        let text = if weighted { "z1=2*z2^2" } else { "z1=z2" };
        let sub = Substitution::parse(2, text).unwrap();
        let sp = |s: &Series| s.specialize(&sub).unwrap();
        prop_assert_eq!(sp(&(&a * &b)), &sp(&a) * &sp(&b));
        prop_assert_eq!(sp(&(&a + &b)), &sp(&a) + &sp(&b));
    }

    #[test]
    fn inverse_map_round_trips(u in series(2, D - 1, false), v in series(2, D - 1, false)) {
        let q = vec![
            with_constant(u, 1).shift_up(0),
            with_constant(v, 1).shift_up(1),
        ];
        let z = invert_map(&q).unwrap();
        for defect in round_trip_defect(&q, &z).unwrap() {
            prop_assert!(defect.is_zero());
        }
        for zi in &z {
            prop_assert!(is_integral(zi).pass);
        }
    }

    #[test]
    fn integer_series_are_p_integral(a in series(3, 3, false), p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assert!(is_p_integral(&a, Prime::new(p).unwrap(), IntegralityMode::Zp).pass);
        prop_assert!(is_integral(&a).pass);
    }

    #[test]
    fn coefficient_file_round_trips(a in series(2, D, true)) {
        let text = serde_json::to_string(&CoefficientFile::from(&a)).unwrap();
        let back: CoefficientFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Series::try_from(&back).unwrap(), a);
    }

    #[test]
    fn valuation_is_additive(x in small_rat(), y in small_rat(), p in prop::sample::select(vec![2u64, 3])) {
        let p = Prime::new(p).unwrap();
        prop_assert_eq!(vp_rat(&(&x * &y), p), vp_rat(&x, p) + vp_rat(&y, p));
    }

    #[test]
    fn vp_b_is_the_valuation_of_b(w in prop::collection::vec(0i64..=4, 2), m in prop::collection::vec(0i64..=8, 2), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let (w, m) = (MultiIndex::new(w), MultiIndex::new(m));
        let p = Prime::new(p).unwrap();
        prop_assert_eq!(vp_b(&w, &m, p), vp_int(&multinomial_b(&w, &m), p));
    }

    #[test]
    fn summand_is_antisymmetric(seed in any::<u64>(), k in prop::collection::vec(0i64..=5, 2), frac in prop::collection::vec(0i64..=5, 2), v in prop::collection::vec(0i64..=2, 2)) {
        let a = CoeffMap::random(seed, -50, 50);
        let p = Prime::new(3).unwrap();
        let big_k = MultiIndex::new(k);
        let k = MultiIndex::new(frac.iter().zip(big_k.as_slice()).map(|(f, b)| f.min(b)).copied().collect());
        let v = MultiIndex::new(v);
        let u = theorem1_summand(&a, p, &v, &k, &big_k);
        let w = theorem1_summand(&a, p, &v, &big_k.sub(&k), &big_k);
        prop_assert_eq!(u, -w);
    }

    #[test]
    fn comb_identity_is_exact(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3]), r in 0u32..=2, d in 1usize..=2) {
        let z = CoeffMap::random(seed, -9, 9);
        let w = CoeffMap::random(seed.wrapping_add(1), -9, 9);
        prop_assert!(verify_comb_identity(&z, &w, Prime::new(p).unwrap(), r, d).unwrap().pass);
    }
}
