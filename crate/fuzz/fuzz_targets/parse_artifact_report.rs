#![no_main]
use libfuzzer_sys::fuzz_target;

use eaqcc::report::ArtifactDoc;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(doc) = ArtifactDoc::parse(s) {
            // a parsed report re-renders into a parseable report
            let text = doc.to_text();
            let _ = ArtifactDoc::parse(&text).unwrap();
        }
    }
});
