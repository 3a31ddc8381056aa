use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfactor::localfield::{hilbert_symbol, SquareClass};
use tfactor::params::FormulaCase;
use tfactor::sample::{Sampler, Shape};
use tfactor::verify::{
    auxiliary_data, check_bi_ci_consistency, check_cd_square_class, cayley, delta_i_lie, run_all,
};

#[test]
fn identity_suite_passes_on_sampled_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for p in [3, 5, 7] {
        let s = Sampler::new(p).unwrap();
        for _ in 0..10 {
            let shape = Shape::new(p, rng.gen_range(1..=3), rng.gen_range(0..=2));
            let inst = s.instance(&mut rng, FormulaCase::TwistedGlOdd, &shape).unwrap();
            let data = auxiliary_data(&inst).unwrap();
            for r in run_all(&data).unwrap() {
                assert!(r.passed, "{}", r.name);
            }
            assert_eq!(data.lie.len(), inst.param.indices.len());
            assert!(delta_i_lie(&data).unwrap().sign().is_some());
        }
    }
}

/// Changing the class of c_D breaks the B_i/C_i relation: it needs
/// c_D ≡ η P_I(1) P_I(−1), which the presentation of θ̃ forces.
#[test]
fn bi_ci_relation_depends_on_c_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let s = Sampler::new(5).unwrap();
    let mut broken = 0;
    for _ in 0..20 {
        let mut shape = Shape::new(5, rng.gen_range(1..=2), 1);
        shape.split_prob = 0.0;
        let inst = s.instance(&mut rng, FormulaCase::TwistedGlOdd, &shape).unwrap();
        let mut data = auxiliary_data(&inst).unwrap();
        assert!(check_cd_square_class(&data).unwrap());
        let minus = data.minus_fields();
        let i = minus[0];
        let alg = &data.inst.param.indices[i].alg;
        if !alg.base().is_trivial() {
            continue;
        }
        let r = SquareClass::all(&s.ground)
            .into_iter()
            .map(|c| c.representative(&s.ground))
            .find(|r| hilbert_symbol(r, alg.delta()).unwrap() == -1)
            .unwrap();
        data.c_d = data.c_d.mul(&r);
        assert!(!check_cd_square_class(&data).unwrap());
        if !check_bi_ci_consistency(&data, i).unwrap() {
            broken += 1;
        }
    }
    assert!(broken > 0);
}

#[test]
fn cayley_poles() {
    let s = Sampler::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inst = s.instance(&mut rng, FormulaCase::TwistedGlOdd, &Shape::new(3, 1, 0)).unwrap();
    let alg = &inst.param.indices[0].alg;
    assert!(cayley(&alg.from_int(-1)).is_err());
}
