#![no_main]

use circwidth::knot_table::{canonical_decomposition, parse_table};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_table(text) {
        for r in &rows {
            if let Ok(d) = canonical_decomposition(r) {
                assert!(d.is_valid());
            }
        }
    }
});
