#![no_main]

use circwidth::rewrites::{format_trace, parse_trace};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(steps) = parse_trace(text) {
        assert_eq!(parse_trace(&format_trace(&steps)).unwrap(), steps);
    }
});
