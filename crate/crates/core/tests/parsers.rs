use std::fs;
use std::path::Path;

use critical_hl::witnesses::WitnessSpec;
use critical_hl::{DynForm, ExponentVector, ExtScalar};
use proptest::prelude::*;

const TOKENS: &str = "[0-9a-z/:=,x.;()\\[\\] +-]{0,40}";

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ext_scalar_parse_is_total(s in TOKENS) {
        if let Ok(x) = s.parse::<ExtScalar>() {
            prop_assert_eq!(x.to_string().parse::<ExtScalar>().unwrap(), x);
        }
    }

    #[test]
    fn exponent_vector_parse_is_total(s in TOKENS) {
        if let Ok(v) = s.parse::<ExponentVector>() {
            prop_assert_eq!(v.to_string().parse::<ExponentVector>().unwrap(), v);
        }
    }

    #[test]
    fn witness_spec_parse_is_total(kind in "(dot|partial|t0|identity|sign|gauss|file)", rest in TOKENS) {
        let s = format!("{kind}:{rest}");
        if let Ok(spec) = s.parse::<WitnessSpec>() {
            prop_assert_eq!(spec.to_string().parse::<WitnessSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn tensor_json_decode_is_total(
        m in 0usize..4,
        dims in prop::collection::vec(0usize..4, 0..4),
        complex in any::<bool>(),
        coeffs in prop::collection::vec(-1e3f64..1e3, 0..20),
        domain in prop::option::of("\\[(\"(inf|[1-9]|[1-9]/[1-9])\", ?){0,3}\"2\"\\]"),
    ) {
        let cs: Vec<String> = coeffs
            .iter()
            .map(|c| if complex { format!("[{c}, {}]", -c) } else { c.to_string() })
            .collect();
        let mut s = format!(
            r#"{{"m": {m}, "dims": {dims:?}, "scalar": "{}", "coeffs": [{}]"#,
            if complex { "complex" } else { "real" },
            cs.join(",")
        );
        if let Some(d) = domain {
            s.push_str(&format!(r#", "domain_p": {d}"#));
        }
        s.push('}');
        if let Ok(form) = DynForm::from_json_str(&s) {
            prop_assert_eq!(form.dims(), &dims[..]);
            prop_assert_eq!(DynForm::from_json_str(&form.to_json_string().unwrap()).unwrap(), form);
        }
    }
}

fn corpus(target: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn fuzz_seeds_decode_or_fail_cleanly() {
    let scalars = corpus("ext_scalar");
    assert!(scalars.iter().any(|s| s.parse::<ExtScalar>().is_ok()));
    assert!(scalars.iter().any(|s| s.parse::<ExtScalar>().is_err()));
    assert!(corpus("exponent_vector")
        .iter()
        .any(|s| s.parse::<ExponentVector>().is_ok()));
    let specs = corpus("witness_spec");
    assert!(
        specs
            .iter()
            .filter(|s| s.parse::<WitnessSpec>().is_ok())
            .count()
            >= 7
    );
    let tensors = corpus("tensor_json");
    assert_eq!(
        tensors
            .iter()
            .filter(|s| DynForm::from_json_str(s).is_ok())
            .count(),
        3
    );
}
