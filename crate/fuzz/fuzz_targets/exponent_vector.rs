#![no_main]

use critical_hl::exponents::inclusion_exponents;
use critical_hl::{ExponentVector, ExtScalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let mut parts = s.splitn(3, ';');
    let (Some(a), Some(b), Some(c)) = (parts.next(), parts.next(), parts.next()) else {
        if let Ok(v) = s.parse::<ExponentVector>() {
            assert_eq!(v.to_string().parse::<ExponentVector>().unwrap(), v);
        }
        return;
    };
    let (Ok(r), Ok(p), Ok(q)) = (
        a.parse::<ExtScalar>(),
        b.parse::<ExponentVector>(),
        c.parse::<ExponentVector>(),
    ) else {
        return;
    };
    // Applicable triples must produce exponents; anything else must be an error, never a panic.
    let _ = inclusion_exponents(&r, &p, &q);
});
