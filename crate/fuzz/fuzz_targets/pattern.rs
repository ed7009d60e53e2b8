#![no_main]

use chernvan::stability::SubsheafPattern;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = SubsheafPattern::parse(text) {
        let _ = p.reflect();
        let _ = p.name();
    }
});
