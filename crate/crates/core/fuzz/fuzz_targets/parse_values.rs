#![no_main]

use libfuzzer_sys::fuzz_target;
use rocbounds::input::parse_values;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_values(text) {
        assert!(values.iter().all(|v| v.is_finite()));
    }
});
