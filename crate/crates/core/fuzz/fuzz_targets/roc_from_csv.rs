#![no_main]

use libfuzzer_sys::fuzz_target;
use rocbounds::input::parse_labeled;
use rocbounds::roc::{auc_mann_whitney, roc_curve};
use rocbounds::{ClassLabel, EmpiricalSample};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(l) = parse_labeled(text) else {
        return;
    };
    let (Ok(s0), Ok(s1)) = (
        EmpiricalSample::new(l.class0, ClassLabel::Class0),
        EmpiricalSample::new(l.class1, ClassLabel::Class1),
    ) else {
        return;
    };
    let curve = roc_curve(&s0, &s1);
    let mw = auc_mann_whitney(&s0, &s1);
    assert_eq!(curve.auc_trapezoid, mw);
    assert!((0.0..=1.0).contains(&mw));
    assert!(curve
        .points
        .windows(2)
        .all(|w| w[0].alpha <= w[1].alpha && w[0].power <= w[1].power));
    let swapped = auc_mann_whitney(
        &EmpiricalSample::new(s1.values().to_vec(), ClassLabel::Class0).unwrap(),
        &EmpiricalSample::new(s0.values().to_vec(), ClassLabel::Class1).unwrap(),
    );
    assert!((mw + swapped - 1.0).abs() <= 1e-12);
});
