#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = qgrain_harness::parse_config(text) {
            assert!(cfg.row_count() > 0);
        }
    }
});
