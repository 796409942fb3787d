#![no_main]
use libfuzzer_sys::fuzz_target;

use eaqcc::check::GateOp;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = GateOp::parse(s) {
            let again = GateOp::parse(&g.render()).unwrap();
            assert_eq!(g, again);
        }
    }
});
