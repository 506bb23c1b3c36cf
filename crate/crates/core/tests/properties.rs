use proptest::prelude::*;

use mtv_descent::arith::{elementary, gamma, ps_mul, BigComplex, BigReal, Elementary, PowerSeries, PrecisionContext};
use mtv_descent::index::{
    bl, bl_inv, bl_maximal_height_closed_form, block_index, classify, index_of_word, maximal_height_runs,
    word_of_block_index, word_of_index, BinaryWord, Index, IndexClass,
};
use mtv_descent::verify::{decide, stuffle_product, Verdict, VerificationReport};

fn admissible(max_weight: u32) -> impl Strategy<Value = Index> {
    prop::collection::vec(1u32..6, 0..10)
        .prop_flat_map(move |mut parts| {
            parts.push(2);
            let mut w = 0;
            parts.retain(|&k| {
                w += k;
                w <= max_weight
            });
            (Just(parts), 0u32..3)
        })
        .prop_map(|(mut parts, bump)| {
            if let Some(last) = parts.last_mut() {
                *last = (*last).max(2) + bump;
            }
            Index::new(parts).unwrap()
        })
}

fn maximal_height(max_depth: usize) -> impl Strategy<Value = Index> {
    prop::collection::vec(2u32..7, 1..=max_depth).prop_map(|p| Index::new(p).unwrap())
}

fn w01(max_len: usize) -> impl Strategy<Value = BinaryWord> {
    prop::collection::vec(0u8..2, 0..max_len).prop_map(|mut bits| {
        bits.insert(0, 1);
        bits.push(0);
        BinaryWord::new(bits).unwrap()
    })
}

fn ctx(d: u32) -> PrecisionContext {
    PrecisionContext::digits(d).unwrap()
}

fn complex_in_strip() -> impl Strategy<Value = (f64, f64)> {
    (0.1f64..5.0, -3.0f64..3.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_round_trip(idx in admissible(20)) {
        prop_assert_eq!(index_of_word(&word_of_index(&idx).unwrap()).unwrap(), idx);
    }

    #[test]
    fn block_round_trip(w in w01(20)) {
        let b = block_index(&w).unwrap();
        prop_assert_eq!(b.weight() as usize, w.len());
        prop_assert_eq!(word_of_block_index(&b).unwrap(), w);
    }

    #[test]
    fn bl_preserves_weight_and_inverts(idx in admissible(20)) {
        let b = bl(&idx).unwrap();
        prop_assert_eq!(b.weight(), idx.weight());
        prop_assert_eq!(bl_inv(&b).unwrap(), idx);
    }

    #[test]
    fn class_images(idx in maximal_height(7)) {
        let b = bl(&idx).unwrap();
        prop_assert!(classify(&b).contains(&IndexClass::OddOddEven));
        if classify(&idx).contains(&IndexClass::AllAtLeast3) {
            prop_assert!(classify(&b).contains(&IndexClass::OneOneThreeTwo));
        }
        let (a, r) = maximal_height_runs(&idx).unwrap();
        prop_assert_eq!(bl_maximal_height_closed_form(&a, &r).unwrap(), b);
    }

    #[test]
    fn stuffle_terms(a in admissible(8), b in admissible(8)) {
        let c = stuffle_product(&a, &b);
        let swapped = stuffle_product(&b, &a);
        prop_assert_eq!(&c, &swapped);
        for (t, n) in &c {
            prop_assert!(*n > 0);
            prop_assert_eq!(t.weight(), a.weight() + b.weight());
            prop_assert!(t.depth() >= a.depth().max(b.depth()));
            prop_assert!(t.depth() <= a.depth() + b.depth());
        }
    }

    #[test]
    fn no_pass_beyond_slack(res in 0.0f64..1.0, bound in 1e-40f64..1.0, tol in 1e-40f64..1.0) {
        let v = decide(res, bound, tol);
        if v == Verdict::Pass {
            prop_assert!(res <= tol && res <= 10.0 * bound && tol >= bound);
        }
    }

    #[test]
    fn report_json_round_trip(
        id in "[a-z_]{1,12}",
        inputs in "[0-9,]{0,12}",
        residual in prop_oneof![Just(f64::INFINITY), 0.0f64..1.0],
        bound in 0.0f64..1.0,
        digits in 10u32..60,
    ) {
        let r = VerificationReport::new(&id, inputs, "1".into(), "1".into(), residual, bound, &ctx(digits));
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(r, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn elementary_bounds_are_sound((re, im) in complex_in_strip(), f in 0usize..4) {
        let func = [Elementary::Exp, Elementary::Log, Elementary::Sqrt, Elementary::Sin][f].clone();
        let (lo, hi) = (ctx(20), ctx(40));
        let z = BigComplex::from_f64(re, im, 64);
        let a = elementary(&func, &z, &lo).unwrap();
        let b = elementary(&func, &z, &hi).unwrap();
        prop_assert!(a.distance(&b) <= a.error());
    }

    #[test]
    fn gamma_bounds_are_sound((re, im) in complex_in_strip()) {
        let z = BigComplex::from_f64(re, im, 64);
        let a = gamma(&z, &ctx(20)).unwrap();
        let b = gamma(&z, &ctx(40)).unwrap();
        prop_assert!(a.distance(&b) <= a.error());
    }

    #[test]
    fn gamma_functional_equation((re, im) in complex_in_strip()) {
        let c = ctx(30);
        let z = BigComplex::from_f64(re, im, c.bits());
        let z1 = &z + &BigComplex::one(c.bits());
        let lhs = gamma(&z1, &c).unwrap();
        let rhs = &z * &gamma(&z, &c).unwrap();
        prop_assert!(lhs.distance(&rhs) <= lhs.error() + rhs.error());
    }

    #[test]
    fn series_product_laws(
        a in prop::collection::vec(-5i64..5, 6),
        b in prop::collection::vec(-5i64..5, 6),
        c in prop::collection::vec(-5i64..5, 6),
    ) {
        let p = 128;
        let s = |v: &[i64]| PowerSeries::new(v.iter().map(|&x| BigReal::from_i64(x, p)).collect()).unwrap();
        let (a, b, c) = (s(&a), s(&b), s(&c));
        let close = |x: &PowerSeries, y: &PowerSeries| {
            x.order() == y.order()
                && x.coeffs().iter().zip(y.coeffs()).all(|(u, v)| u.distance(v) <= u.error() + v.error())
        };
        prop_assert!(close(&ps_mul(&a, &b), &ps_mul(&b, &a)));
        prop_assert!(close(&ps_mul(&ps_mul(&a, &b), &c), &ps_mul(&a, &ps_mul(&b, &c))));
    }
}
