#![no_main]

use libfuzzer_sys::fuzz_target;
use monolab::states::{named_state_capped, parse_label};

fuzz_target!(|data: &[u8]| {
    if let Ok(label) = std::str::from_utf8(data) {
        if let Ok(named) = parse_label(label) {
            let _ = named_state_capped(&named, 256);
        }
    }
});
