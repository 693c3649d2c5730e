#![no_main]
use libfuzzer_sys::fuzz_target;
use tractal::nystrom::{kernel_value, Domain, KernelSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<KernelSpec>(data) else { return };
    if spec.validate().is_err() {
        return;
    }
    let points: &[f64] = match spec.domain() {
        Domain::UnitInterval => &[0.0, 0.3, 1.0],
        Domain::GaussianLine => &[-2.0, 0.0, 1.5],
    };
    for &x in points {
        for &y in points {
            if let (Ok(a), Ok(b)) = (kernel_value(&spec, x, y), kernel_value(&spec, y, x)) {
                assert!(a == b || (a.is_nan() && b.is_nan()), "{spec:?} at ({x}, {y})");
            }
        }
    }
});
