#![no_main]

use circwidth::{SurfaceClass, TwoHandleMove};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = text.parse::<SurfaceClass>() {
        assert_eq!(s.to_string().parse::<SurfaceClass>(), Ok(s.clone()));
        for m in TwoHandleMove::all_on(&s) {
            let after = s.apply_two_handle(m).unwrap();
            assert_eq!(after.euler(), s.euler() + 2);
        }
    }
    if let Ok(m) = text.parse::<TwoHandleMove>() {
        assert_eq!(m.to_string().parse::<TwoHandleMove>(), Ok(m));
    }
});
