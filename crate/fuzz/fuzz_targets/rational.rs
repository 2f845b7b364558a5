#![no_main]

use dt_regge::numeric::rational::{format_q, parse_q};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 4096 {
        return;
    }
    if let Ok(x) = parse_q(s) {
        assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }
});
