#![no_main]
use libfuzzer_sys::fuzz_target;

use eaqcc::laurent::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = LaurentPoly::parse(s) {
            // canonical text must round-trip exactly
            let again = LaurentPoly::parse(&p.render()).unwrap();
            assert_eq!(p, again);
        }
    }
});
