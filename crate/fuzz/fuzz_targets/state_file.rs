#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(psi) = qgrain_harness::parse_state_file(text) {
            assert!((psi.norm_sq() - 1.0).abs() < 1e-9);
        }
    }
});
