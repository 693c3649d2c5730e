#![no_main]
use libfuzzer_sys::fuzz_target;
use tractal_cli::{parse_criterion, parse_dims, parse_epsilons, parse_threads, MAX_D, MAX_LIST};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(eps) = parse_epsilons(text) {
        assert!(!eps.is_empty() && eps.len() <= MAX_LIST);
        assert!(eps.iter().all(|&e| e > 0.0 && e < 1.0));
    }
    if let Ok(dims) = parse_dims(text) {
        assert!(!dims.is_empty() && dims.len() <= MAX_LIST);
        assert!(dims.iter().all(|&d| (1..=MAX_D).contains(&d)));
    }
    if let Ok(n) = parse_threads(text) {
        assert!(n >= 1);
    }
    let _ = parse_criterion(text);
});
