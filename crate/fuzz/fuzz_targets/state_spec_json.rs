#![no_main]

use libfuzzer_sys::fuzz_target;
use monolab::states::StateSpec;

// Small cap keeps tensor powers and large registers cheap.
const CAP: usize = 256;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = StateSpec::from_json(text) {
            let _ = spec.resolve(CAP);
        }
    }
});
