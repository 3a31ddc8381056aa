//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Tolerances: every comparison is exact; criterion 1 must finish in 60 s
//! and criterion 5 in 120 s.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};
use tfactor::cli::{cmd_compute, to_json};
use tfactor::etale::{brute_force_norm_oracle, norm_test, QuadraticEtale};
use tfactor::factor::character::UnitCircleValue;
use tfactor::factor::{build_charpoly_pack, compute_c, compute_delta, special_case_indicator, swapped_delta};
use tfactor::forms::{trace_form_gram, TraceBlock};
use tfactor::localfield::{
    hilbert_symbol, is_square, make_extension, oracle::minimal_depth, BaseField, ExtensionTower, SquareClass,
};
use tfactor::params::{validate_instance, CocycleClass, FormulaCase, Side};
use tfactor::sample::{Sampler, Shape};
use tfactor::verify::{auxiliary_data, run_all};

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const IDENTITY_BUDGET: Duration = Duration::from_secs(120);

struct Outcome {
    passed: bool,
    detail: String,
}

/// The first failure, if any, appended to a detail line.
fn first<T: std::fmt::Display>(fails: &[T]) -> String {
    fails.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Every non-dyadic tower with e·f ≤ 2 over Q_p, then Q_2.
fn towers() -> Vec<Arc<ExtensionTower>> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7, 13] {
        let base = BaseField::padic(p).unwrap();
        let pi = p as i64;
        let t = base.trivial_tower();
        let eps = t.nonresidue_lift().unwrap().as_rational().unwrap();
        let eps = eps.to_integer().try_into().unwrap_or(2i64);
        out.push(t);
        out.push(make_extension(base, 2, &[-pi, 1]).unwrap());
        out.push(make_extension(base, 1, &[-pi, 0, 1]).unwrap());
        out.push(make_extension(base, 1, &[-pi * eps, 0, 1]).unwrap());
    }
    out.push(BaseField::padic(2).unwrap().trivial_tower());
    out
}

fn reps(t: &Arc<ExtensionTower>) -> Vec<tfactor::localfield::FieldElement> {
    SquareClass::all(t).iter().map(|c| c.representative(t)).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut pairs, mut bad) = (0, Vec::new());
    for t in towers() {
        for delta in reps(&t) {
            if is_square(&delta).unwrap() {
                continue;
            }
            let ext = QuadraticEtale::field(&t, delta.clone()).unwrap();
            let depth = minimal_depth(&delta).unwrap();
            for c in reps(&t) {
                pairs += 1;
                let f = norm_test(&c, &ext).unwrap();
                let o = brute_force_norm_oracle(&c, &ext, depth).unwrap();
                if f != o {
                    bad.push(format!("{} δ={delta} c={c}", t.describe()));
                }
            }
        }
    }
    let took = start.elapsed();
    outcome(
        bad.is_empty() && took < ORACLE_BUDGET,
        format!("norm test vs brute force: {pairs} pairs, {} disagreements, {took:.1?}", bad.len()),
    )
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut all = towers();
    all.push(BaseField::real().trivial_tower());
    for t in all {
        let rs = reps(&t);
        let h = |a: &_, b: &_| hilbert_symbol(a, b).unwrap();
        for a in &rs {
            if h(a, &a.neg()) != 1 {
                bad.push(format!("(a,-a) a={a}"));
            }
            let one_minus = t.one().sub(a);
            if !one_minus.is_zero() && h(a, &one_minus) != 1 {
                bad.push(format!("(a,1-a) a={a}"));
            }
            for b in &rs {
                checked += 1;
                if h(a, b) != h(b, a) {
                    bad.push(format!("symmetry {a},{b}"));
                }
                for c in &rs {
                    if h(&a.mul(b), c) != h(a, c) * h(b, c) {
                        bad.push(format!("bimultiplicativity {a},{b},{c}"));
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("hilbert symbol axioms: {checked} pairs, {} failures{}", bad.len(), first(&bad)),
    )
}

fn shape(rng: &mut ChaCha8Rng, p: u64) -> Shape {
    let minus = rng.gen_range(1..=3);
    let plus = rng.gen_range(0..=2);
    Shape::new(p, minus, plus)
}

fn criterion_3(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = Vec::new();
    let mut counted = 0;
    for fc in FormulaCase::ALL {
        let mut seen = 0;
        let mut k = 0;
        while seen < 100 {
            let s = &samplers[k % samplers.len()];
            k += 1;
            let sh = shape(rng, s.ground.p().unwrap());
            let inst = s.instance(rng, fc, &sh).unwrap();
            let pack = build_charpoly_pack(&inst).unwrap();
            let fields: Vec<_> = inst.param.indices.iter().filter(|i| i.alg.is_field()).collect();
            if fields.is_empty() {
                continue;
            }
            seen += 1;
            for ip in fields {
                counted += 1;
                match compute_c(&inst, &pack, ip) {
                    Ok(c) if !c.is_zero() => {}
                    Ok(_) => fails.push(format!("{}: C_{} = 0", fc.name(), ip.id)),
                    Err(e) => fails.push(format!("{}: {e}", fc.name())),
                }
            }
        }
    }
    outcome(
        fails.is_empty(),
        format!(
            "C_i fixed by τ and nonzero: 9 cases x 100 instances, {counted} indices, {} failures{}",
            fails.len(),
            first(&fails)
        ),
    )
}

fn criterion_4(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = Vec::new();
    for fc in FormulaCase::ALL {
        for k in 0..50 {
            let s = &samplers[k % samplers.len()];
            let sh = shape(rng, s.ground.p().unwrap());
            let inst = s.instance(rng, fc, &sh).unwrap();
            let (d, _) = compute_delta(&inst).unwrap();
            let mut moved = inst.clone();
            for ip in moved.param.indices.iter_mut() {
                let t = s.unit_of(rng, &ip.alg);
                let n = ip.alg.from_base(&t.norm());
                if let Some(c) = &ip.c {
                    ip.c = Some(c.mul(&n));
                }
                if let Some(x) = &ip.x {
                    ip.x = Some(x.mul(&n));
                }
            }
            if let Some(xd) = &moved.param.x_d {
                let r = s.element(rng, &s.ground);
                moved.param.x_d = Some(xd.mul(&r).mul(&r));
            }
            if compute_delta(&moved).unwrap().0 != d {
                fails.push(fc.name());
            }
        }
    }
    outcome(
        fails.is_empty(),
        format!("norm-class invariance: 9 cases x 50 instances, {} changed{}", fails.len(), first(&fails)),
    )
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let samplers = [Sampler::new(3).unwrap(), Sampler::new(5).unwrap()];
    let (mut checks, mut fails) = (0, Vec::new());
    for k in 0..100 {
        let s = &samplers[k % 2];
        let sh = shape(rng, s.ground.p().unwrap());
        let inst = s.instance(rng, FormulaCase::TwistedGlOdd, &sh).unwrap();
        let data = auxiliary_data(&inst).unwrap();
        for r in run_all(&data).unwrap() {
            checks += 1;
            if !r.passed {
                fails.push(r.name);
            }
        }
    }
    let took = start.elapsed();
    outcome(
        fails.is_empty() && took < IDENTITY_BUDGET,
        format!(
            "identity suite on 100 twisted_gl_odd instances: {checks} checks, {} failures{}, {took:.1?}",
            fails.len(),
            first(&fails)
        ),
    )
}

fn criterion_6(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = 0;
    let mut n = 0;
    for k in 0..60 {
        let s = &samplers[k % samplers.len()];
        let mut sh = Shape::new(s.ground.p().unwrap(), 1, 0);
        sh.ext_prob = 0.5;
        sh.split_prob = 0.0;
        let inst = s.instance(rng, FormulaCase::SoEven, &Shape { minus: 2, ..sh }).unwrap();
        for ip in &inst.param.indices {
            n += 1;
            let c = ip.alg.from_base(&s.element(rng, ip.base()));
            let gram = trace_form_gram(&s.ground, &[TraceBlock { alg: ip.alg.clone(), coeff: c }], None).unwrap();
            let target = s.ground.from_q(&ip.alg.delta().neg().norm_to_base());
            if !is_square(&gram.det().mul(&target)).unwrap() {
                fails += 1;
            }
        }
    }
    outcome(fails == 0, format!("trace-form determinant ≡ N(-δ_i): {n} field indices, {fails} failures"))
}

fn criterion_7(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = 0;
    let mut non_trivial = 0;
    for k in 0..50 {
        let s = &samplers[k % samplers.len()];
        let p = s.ground.p().unwrap();
        let minus = rng.gen_range(1..=3);
        let inst = s.instance(rng, FormulaCase::TwistedGlEven, &Shape::new(p, minus, 0)).unwrap();
        assert_eq!((inst.endo.d_minus, inst.endo.d_plus), (inst.group.d, 1));
        let (d, _) = compute_delta(&inst).unwrap();
        if d.sign() == Some(-1) {
            non_trivial += 1;
        }
        if special_case_indicator(&inst).unwrap() != d {
            fails += 1;
        }
    }
    outcome(
        fails == 0 && non_trivial > 0,
        format!("twisted even special case vs form comparison: 50 instances, {fails} mismatches, {non_trivial} with Δ = -1"),
    )
}

fn criterion_8(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let (mut n, mut fails, mut nontrivial) = (0, 0, 0);
    let mut k = 0;
    while n < 100 {
        let s = &samplers[k % samplers.len()];
        k += 1;
        let (a, b) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        if a + b == 0 {
            continue;
        }
        let inst = s.instance(rng, FormulaCase::SoOdd, &Shape::new(s.ground.p().unwrap(), a, b)).unwrap();
        n += 1;
        let (d, _) = compute_delta(&inst).unwrap();
        let want = match inst.endo.cocycle {
            CocycleClass::Trivial => d,
            CocycleClass::Nontrivial => {
                nontrivial += 1;
                d.neg()
            }
        };
        if swapped_delta(&inst).unwrap() != want {
            fails += 1;
        }
    }
    outcome(
        fails == 0 && nontrivial > 0 && nontrivial < n,
        format!("swap of the two factors in so_odd: {n} instances, {nontrivial} nontrivial cocycles, {fails} failures"),
    )
}

const REAL_SYMPLECTIC: &str = r#"{
  "base": { "real": true },
  "group": { "case": "symplectic", "d": 2, "eta": "1" },
  "endoscopic": { "d_minus": 2, "d_plus": 0, "delta_minus": "-1" },
  "indices": [
    { "id": "a", "side": "minus", "delta": "-1", "y": "(3 + 4*s)/5", "c": "C" }
  ]
}"#;

fn criterion_9(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = Vec::new();
    let mut sampled = 0;
    for fc in FormulaCase::ALL {
        for k in 0..10 {
            let s = &samplers[k % samplers.len()];
            let p = s.ground.p().unwrap();
            let unitary = fc.group_case().is_unitary_type();
            let mut sh = Shape::new(p, if unitary { 0 } else { rng.gen_range(1..=2) }, rng.gen_range(1..=2));
            sh.split_prob = 1.0;
            let mut inst = s.instance(rng, fc, &sh).unwrap();
            sampled += 1;
            if let Some(chi) = inst.endo.chi.as_mut() {
                *chi = s.ground.one();
            }
            assert!(inst.param.side(Side::Minus).all(|ip| !ip.alg.is_field()));
            let (d, tr) = compute_delta(&inst).unwrap();
            let prefactors_trivial = tr.prefactors.iter().all(|p| p.angle == "0");
            let expect_one = prefactors_trivial || !fc.group_case().is_unitary_type();
            if expect_one && d != UnitCircleValue::one() {
                fails.push(format!("{}: empty I^-* gives {d}", fc.name()));
            }
            if !expect_one && d != tr.product() {
                fails.push(format!("{}: Δ differs from its prefactors", fc.name()));
            }
        }
    }
    let real = |c: &str| {
        let doc = REAL_SYMPLECTIC.replace("\"C\"", &format!("\"{c}\""));
        cmd_compute(&doc, None, false, false)
    };
    let (pos, neg) = (real("s"), real("-s"));
    if !pos.text.contains("delta: +1") || !neg.text.contains("delta: -1") {
        fails.push(format!("real base: {:?} / {:?}", pos.text, neg.text));
    }
    outcome(
        fails.is_empty() && sampled == 90,
        format!(
            "empty I^-* on {sampled} instances and the real base with F_i = C: {} failures{}",
            fails.len(),
            first(&fails)
        ),
    )
}

fn criterion_10(rng: &mut ChaCha8Rng, samplers: &[Sampler]) -> Outcome {
    let mut fails = 0;
    for fc in FormulaCase::ALL {
        let s = &samplers[0];
        let sh = shape(rng, s.ground.p().unwrap());
        let inst = s.instance(rng, fc, &sh).unwrap();
        assert!(validate_instance(&inst).unwrap().is_empty());
        let doc = to_json(&inst);
        let a = cmd_compute(&doc, None, true, false);
        let b = cmd_compute(&doc, None, true, false);
        let c = cmd_compute(&doc, None, true, true);
        let d = cmd_compute(&doc, None, true, true);
        if a.code != 0 || a != b || c != d {
            fails += 1;
        }
    }
    outcome(fails == 0, format!("compute output is byte-identical on rerun: 9 documents, {fails} differences"))
}

#[test]
fn acceptance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samplers: Vec<Sampler> = [3, 5, 7].into_iter().map(|p| Sampler::new(p).unwrap()).collect();
    let results = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(&mut rng, &samplers),
        criterion_4(&mut rng, &samplers),
        criterion_5(&mut rng),
        criterion_6(&mut rng, &samplers),
        criterion_7(&mut rng, &samplers),
        criterion_8(&mut rng, &samplers),
        criterion_9(&mut rng, &samplers),
        criterion_10(&mut rng, &samplers),
    ];
    // Written to the process stdout directly so the lines survive output capture.
    let mut out = std::io::stdout().lock();
    for (k, r) in results.iter().enumerate() {
        let _ = writeln!(out, "criterion {:>2}: {} {}", k + 1, if r.passed { "PASS" } else { "FAIL" }, r.detail);
    }
    let _ = out.flush();
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.passed).map(|(k, _)| k + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
