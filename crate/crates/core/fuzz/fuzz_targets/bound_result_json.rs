#![no_main]

use libfuzzer_sys::fuzz_target;
use rocbounds::BoundResult;

fuzz_target!(|data: &[u8]| {
    if let Ok(r) = serde_json::from_slice::<BoundResult>(data) {
        let again: BoundResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        // NaN params are not equal to themselves
        if r.value == r.value && r.params.values().all(|v| v == v) {
            assert_eq!(again, r);
        }
    }
});
