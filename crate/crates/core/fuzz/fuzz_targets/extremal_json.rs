#![no_main]

use libfuzzer_sys::fuzz_target;
use rocbounds::ExtremalDistribution;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = serde_json::from_slice::<ExtremalDistribution>(data) {
        // decoding validates, so every accessor is well defined
        assert!((d.cdf(f64::MAX) - 1.0).abs() <= 1e-9);
        let q = d.quantile(0.5);
        assert!(q.is_finite());
        let back: ExtremalDistribution =
            serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
    }
});
