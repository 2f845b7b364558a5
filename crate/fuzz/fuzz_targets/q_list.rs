#![no_main]

use dt_regge::io::parse_q_list;
use dt_regge::pairing::enumerate::check_feasible;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_q_list(s) {
        assert!(!q.is_empty() && q.iter().all(|&x| x >= 1));
        let joined: Vec<String> = q.iter().map(u32::to_string).collect();
        assert_eq!(parse_q_list(&joined.join(",")).unwrap(), q);
        for g in 0..3 {
            let _ = check_feasible(g, q.len(), &q);
        }
    }
});
