#![no_main]

use libfuzzer_sys::fuzz_target;
use qent::io::{measure_result_json, parse_measure_result};

fuzz_target!(|data: &str| {
    if let Ok(result) = parse_measure_result(data) {
        if let Err(e) = parse_measure_result(&measure_result_json(&result)) {
            assert!(!e.is_parse(), "emitted result is malformed: {e}");
        }
    }
});
