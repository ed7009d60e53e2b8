#![no_main]

use chernvan::groebner::RingPresentation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing only; completion can be arbitrarily expensive.
    if let Ok(p) = RingPresentation::parse(text) {
        let _ = RingPresentation::parse(&p.to_text());
    }
});
