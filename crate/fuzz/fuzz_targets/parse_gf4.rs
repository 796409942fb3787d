#![no_main]
use libfuzzer_sys::fuzz_target;

use eaqcc::gf4::{import_gf4, parse_gf4_file, render_gf4_file};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = parse_gf4_file(s) {
            let again = parse_gf4_file(&render_gf4_file(&g)).unwrap();
            assert_eq!(g, again);
            let m = import_gf4(&g);
            assert_eq!(m.rows(), 2);
        }
    }
});
