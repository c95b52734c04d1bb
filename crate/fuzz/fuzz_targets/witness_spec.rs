#![no_main]

use critical_hl::witnesses::WitnessSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = s.parse::<WitnessSpec>() {
        assert_eq!(spec.to_string().parse::<WitnessSpec>().unwrap(), spec);
    }
});
