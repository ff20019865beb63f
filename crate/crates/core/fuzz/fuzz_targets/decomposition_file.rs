#![no_main]

use circwidth::format::{parse, serialize};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(d) = parse(text) else {
        return;
    };
    let again = parse(&serialize(&d)).expect("serialized output parses");
    assert_eq!(again, d);
    if d.is_valid() && d.k() <= 4 {
        let _ = d.width();
        let _ = d.canonical_form();
        let _ = circwidth::rewrites::thin_search(&d, 50);
    }
});
