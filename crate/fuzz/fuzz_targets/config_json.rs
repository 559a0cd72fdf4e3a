#![no_main]

use cqed_core::app::config::{Document, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = Document::parse_json(text) {
        let _ = RunConfig::from_document(&doc);
    }
});
