#![no_main]

use chernvan::stability::{transfer, ChainBundle};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cb) = ChainBundle::parse(text) {
        let _ = transfer(&cb, 3);
    }
});
