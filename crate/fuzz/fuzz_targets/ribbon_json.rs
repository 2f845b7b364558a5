#![no_main]

use dt_regge::io::{ribbon_from_json, ribbon_to_json};
use dt_regge::pairing::enumerate::triangulation_of;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = ribbon_from_json(s) {
        assert_eq!(ribbon_from_json(&ribbon_to_json(&g)).expect("re-decode"), g);
        if g.dart_count() <= 60 {
            let _ = triangulation_of(&g);
        }
    }
});
