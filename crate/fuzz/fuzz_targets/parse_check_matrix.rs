#![no_main]
use libfuzzer_sys::fuzz_target;

use eaqcc::check::{parse_check_matrix, render_check_matrix};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse_check_matrix(s) {
            let rendered = render_check_matrix(&m);
            let again = parse_check_matrix(&rendered).unwrap();
            assert_eq!(render_check_matrix(&again), rendered);
        }
    }
});
