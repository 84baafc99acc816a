#![no_main]

use libfuzzer_sys::fuzz_target;
use monolab::states::StateSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = StateSpec::parse_shorthand(text) {
            let _ = spec.resolve(256);
        }
    }
});
