use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tfactor::cli::expr::{parse_etale, parse_field};
use tfactor::cli::{load_instance, to_json};
use tfactor::etale::{norm_test, QuadraticEtale};
use tfactor::factor::compute_delta;
use tfactor::localfield::{hilbert_symbol, is_square, square_class, BaseField, SquareClass};
use tfactor::params::FormulaCase;
use tfactor::sample::{Sampler, Shape};
use tfactor::verify::{cayley, cayley_inv};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 13])
}

fn nonzero() -> impl Strategy<Value = (i64, i64)> {
    ((-400i64..=400).prop_filter("nonzero", |n| *n != 0), 1i64..=50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_symbol_is_symmetric_and_bimultiplicative(p in prime(), a in nonzero(), b in nonzero(), c in nonzero()) {
        let t = BaseField::padic(p).unwrap().trivial_tower();
        let el = |(n, d): (i64, i64)| t.from_int(n).div(&t.from_int(d)).unwrap();
        let (a, b, c) = (el(a), el(b), el(c));
        let h = |x: &_, y: &_| hilbert_symbol(x, y).unwrap();
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert_eq!(h(&a.mul(&b), &c), h(&a, &c) * h(&b, &c));
        prop_assert_eq!(h(&a, &a.neg()), 1);
        prop_assert_eq!(h(&a, &a.mul(&a)), 1);
    }

    #[test]
    fn square_class_matches_its_representative(p in prime(), a in nonzero()) {
        let t = BaseField::padic(p).unwrap().trivial_tower();
        let x = t.from_int(a.0).div(&t.from_int(a.1)).unwrap();
        let r = square_class(&x).unwrap().representative(&t);
        prop_assert!(is_square(&x.mul(&r)).unwrap());
    }

    #[test]
    fn norms_are_norms(p in prime(), a in nonzero(), b in nonzero(), class in 1usize..4) {
        let t = BaseField::padic(p).unwrap().trivial_tower();
        let delta = SquareClass::all(&t)[class].representative(&t);
        let e = QuadraticEtale::field(&t, delta).unwrap();
        let z = e.elem(t.from_int(a.0), t.from_int(b.0));
        prop_assert_eq!(norm_test(&z.norm(), &e).unwrap(), 1);
        let c = t.from_int(a.1);
        prop_assert_eq!(norm_test(&c.mul(&z.norm()), &e).unwrap(), norm_test(&c, &e).unwrap());
    }

    #[test]
    fn cayley_round_trip(p in prime(), a in nonzero(), b in nonzero(), class in 1usize..4) {
        let t = BaseField::padic(p).unwrap().trivial_tower();
        let delta = SquareClass::all(&t)[class].representative(&t);
        let e = QuadraticEtale::field(&t, delta).unwrap();
        let w = e.elem(t.from_int(a.0), t.from_int(b.0));
        let y = w.div(&w.tau()).unwrap();
        if let Ok(x) = cayley(&y) {
            prop_assert!(x.is_anti_fixed());
            prop_assert_eq!(cayley_inv(&x).unwrap(), y);
        }
    }

    #[test]
    fn literals_round_trip(p in prime(), a in nonzero(), b in nonzero()) {
        let t = BaseField::padic(p).unwrap().trivial_tower();
        let e = QuadraticEtale::field(&t, t.from_int(p as i64)).unwrap();
        let z = e.elem(t.from_int(a.0).div(&t.from_int(a.1)).unwrap(), t.from_int(b.0).div(&t.from_int(b.1)).unwrap());
        prop_assert_eq!(parse_etale(&z.to_string(), &e).unwrap(), z.clone());
        prop_assert_eq!(parse_field(&z.norm().to_string(), &t).unwrap(), z.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delta_is_deterministic_and_survives_serialization(seed in any::<u64>(), case in 0usize..9, p in prime()) {
        let fc = FormulaCase::ALL[case];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Sampler::new(p).unwrap();
        let inst = s.instance(&mut rng, fc, &Shape::new(p, 2, 1)).unwrap();
        let (d1, t1) = compute_delta(&inst).unwrap();
        let (d2, t2) = compute_delta(&inst).unwrap();
        prop_assert_eq!(&d1, &d2);
        prop_assert_eq!(&t1, &t2);
        prop_assert_eq!(t1.product(), d1.clone());
        let back = load_instance(&to_json(&inst), None).unwrap();
        prop_assert_eq!(compute_delta(&back).unwrap().0, d1);
    }
}
