#![no_main]
use libfuzzer_sys::fuzz_target;
use tractal::FamilySpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = tractal_cli::parse_family(text) else { return };
    let again = FamilySpec::from_json(&spec.to_json()).expect("accepted documents reparse");
    assert_eq!(again.params(), spec.params());
    for k in 1..=3 {
        if let Ok(f) = spec.factor(k) {
            let (a, b) = (f.eigenvalue(1), f.eigenvalue(2));
            assert!(a > 0.0 && b <= a, "factor {k}: {a} {b}");
        }
    }
});
