#![no_main]

use critical_hl::ExtScalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = s.parse::<ExtScalar>() {
        assert_eq!(x.to_string().parse::<ExtScalar>().unwrap(), x);
        if let Ok(inv) = x.recip() {
            assert_eq!(ExtScalar::from_recip(inv), x);
        }
    }
});
