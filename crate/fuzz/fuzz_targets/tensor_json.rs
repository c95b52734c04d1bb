#![no_main]

use critical_hl::DynForm;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(form) = DynForm::from_json_str(s) {
        let back = DynForm::from_json_str(&form.to_json_string().unwrap()).unwrap();
        assert_eq!(back.dims(), form.dims());
        assert_eq!(back.domain_p(), form.domain_p());
    }
});
