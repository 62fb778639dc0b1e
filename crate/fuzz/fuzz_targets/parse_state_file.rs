#![no_main]

use libfuzzer_sys::fuzz_target;
use qent::io::{parse_state_file, state_file_json};

fuzz_target!(|data: &str| {
    if let Ok((rho, label)) = parse_state_file(data) {
        if let Err(e) = parse_state_file(&state_file_json(&rho, label)) {
            assert!(!e.is_parse(), "emitted state file is malformed: {e}");
        }
    }
});
