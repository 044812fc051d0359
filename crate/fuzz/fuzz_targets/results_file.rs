#![no_main]
use libfuzzer_sys::fuzz_target;
use qgrain_harness::render_results;
use qgrain_harness::report::{read_results, render_report, summarize, ReportFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rows) = read_results(text) else { return };
    let report = summarize(&rows);
    for format in [ReportFormat::Json, ReportFormat::Csv, ReportFormat::Plot] {
        render_report(&report, format).expect("parsed rows always render");
    }
    let again = read_results(&render_results(&rows).expect("rows serialize")).expect("rendered rows parse");
    assert_eq!(again, rows);
});
