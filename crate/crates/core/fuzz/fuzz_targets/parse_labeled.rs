#![no_main]

use libfuzzer_sys::fuzz_target;
use rocbounds::input::{parse_labeled, parse_sample_text, SampleInput};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(l) = parse_labeled(text) {
        assert!(l.class0.iter().chain(&l.class1).all(|v| v.is_finite()));
        // with no data rows the format is ambiguous
        if !(l.class0.is_empty() && l.class1.is_empty()) {
            assert_eq!(parse_sample_text(text).ok(), Some(SampleInput::Labeled(l)));
        }
    }
});
