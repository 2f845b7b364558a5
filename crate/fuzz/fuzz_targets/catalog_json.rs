#![no_main]

use dt_regge::io::{catalog_from_json, catalog_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = catalog_from_json(s) {
        let out = catalog_to_json(&c);
        assert_eq!(catalog_to_json(&catalog_from_json(&out).expect("re-decode")), out);
    }
});
