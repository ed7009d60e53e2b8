#![no_main]

use chernvan::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = Report::parse_text(text) {
        assert_eq!(
            Report::parse_text(&r.to_text()).expect("printed report parses"),
            r
        );
    }
    let _ = Report::from_json(text);
});
