use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfactor::cli::{cmd_check, cmd_compute, cmd_oracle, cmd_validate, load_instance, to_json};
use tfactor::factor::compute_delta;
use tfactor::params::{validate_instance, FormulaCase};
use tfactor::sample::{Sampler, Shape};
use tfactor::verify::{auxiliary_data, li_identity_1};

const SYMPLECTIC: &str = r#"{
  "base": { "p": 5 },
  "group": { "case": "symplectic", "d": 2, "eta": "1" },
  "endoscopic": { "d_minus": 2, "d_plus": 0, "delta_minus": "-2" },
  "indices": [
    { "id": "a", "side": "minus", "delta": "2", "y": "-3 - 2*s", "c": "s" }
  ]
}"#;

#[test]
fn symplectic_document() {
    assert_eq!(cmd_validate(SYMPLECTIC, None, false).code, 0);
    let out = cmd_compute(SYMPLECTIC, None, true, false);
    assert_eq!(out.code, 0);
    assert!(out.text.contains("C_a (minus) = -32"), "{}", out.text);
    assert!(out.text.ends_with("delta: +1\nangle: 0\n"));
    let check = cmd_check(SYMPLECTIC, None, false);
    assert_eq!(check.code, 0);
    assert!(check.text.starts_with("notice:"));
}

#[test]
fn excluded_plane_is_rejected() {
    let doc = SYMPLECTIC.replace(r#""delta_minus": "-2""#, r#""delta_minus": "1""#);
    let out = cmd_validate(&doc, None, false);
    assert_eq!(out.code, 1);
    assert!(out.text.contains("[ellipticity]"), "{}", out.text);
}

#[test]
fn malformed_literal_is_a_parse_error() {
    let doc = SYMPLECTIC.replace("-3 - 2*s", "-3 - 2*s)");
    let out = cmd_validate(&doc, None, false);
    assert_eq!(out.code, 3);
    assert!(out.text.contains("line 6"), "{}", out.text);
    let out = cmd_compute("{ \"base\": ", None, false, false);
    assert_eq!(out.code, 3);
}

#[test]
fn oracle_command() {
    let out = cmd_oracle(5, "5", "2", 3, None, false);
    assert_eq!((out.code, out.text.as_str()), (0, "formula: -1\noracle: -1\nagree: true\n"));
    let out = cmd_oracle(5, "5", "1", 3, None, false);
    assert_eq!(out.text, "formula: +1\noracle: +1\nagree: true\n");
    assert_eq!(cmd_oracle(3, "3", "-1", 3, None, false).code, 0);
    assert_eq!(cmd_oracle(5, "5", "2", 0, None, false).code, 2);
}

#[test]
fn documents_round_trip_in_every_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3, 5] {
        let s = Sampler::new(p).unwrap();
        for fc in FormulaCase::ALL {
            for _ in 0..3 {
                let shape = Shape::new(p, rng.gen_range(1..=2), rng.gen_range(0..=2));
                let inst = s.instance(&mut rng, fc, &shape).unwrap();
                let json = to_json(&inst);
                let back = load_instance(&json, None).unwrap();
                assert_eq!(back, inst, "{}", fc.name());
                assert!(validate_instance(&back).unwrap().is_empty());
                assert_eq!(compute_delta(&back).unwrap().0, compute_delta(&inst).unwrap().0);
                assert_eq!(to_json(&back), json);
                assert_eq!(cmd_compute(&json, None, true, false).code, 0, "{json}");
            }
        }
    }
}

#[test]
fn check_command_on_twisted_odd() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = Sampler::new(5).unwrap();
    let inst = s.instance(&mut rng, FormulaCase::TwistedGlOdd, &Shape::new(5, 2, 1)).unwrap();
    let out = cmd_check(&to_json(&inst), None, false);
    assert_eq!(out.code, 0, "{}", out.text);
    assert!(out.text.contains("PASS li identity 1"));
    assert!(!out.text.contains("FAIL"));
}

#[test]
fn corrupted_y_breaks_li_identity_1() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = Sampler::new(3).unwrap();
    let mut shape = Shape::new(3, 1, 1);
    shape.split_prob = 0.0;
    let inst = s.instance(&mut rng, FormulaCase::TwistedGlOdd, &shape).unwrap();
    let mut data = auxiliary_data(&inst).unwrap();
    let (i, j) = (0, 1);
    assert!(li_identity_1(&data, i, j).unwrap());
    let y = data.inst.param.indices[j].y.clone();
    data.inst.param.indices[j].y = y.mul(&y);
    assert!(!li_identity_1(&data, i, j).unwrap());
}

#[test]
fn twisted_match_failure() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = Sampler::new(5).unwrap();
    let mut inst = s.instance(&mut rng, FormulaCase::TwistedGlEven, &Shape::new(5, 1, 1)).unwrap();
    let ip = &mut inst.param.indices[0];
    let x = ip.x.clone().unwrap();
    ip.x = Some(x.mul(&ip.y));
    let out = cmd_compute(&to_json(&inst), None, false, false);
    assert_eq!(out.code, 1);
    assert!(out.text.contains("stable classes"), "{}", out.text);
}
