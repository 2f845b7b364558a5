#![no_main]

use dt_regge::io::{triangulation_from_json, triangulation_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = triangulation_from_json(s) {
        let again = triangulation_from_json(&triangulation_to_json(&t)).expect("re-decode");
        assert_eq!(again, t);
    }
});
