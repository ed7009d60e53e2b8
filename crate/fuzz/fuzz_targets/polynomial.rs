#![no_main]

use chernvan::poly::{Ambient, Polynomial};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let amb = Ambient::from_pairs(&[
        ("xi", 2),
        ("eta", 2),
        ("u", 2),
        ("v", 2),
        ("a", 4),
        ("b", 6),
    ])
    .unwrap();
    if let Ok(p) = Polynomial::parse(text, &amb) {
        // Printing then parsing gives the same polynomial back.
        let back = Polynomial::parse(&p.to_string(), &amb).expect("printed form parses");
        assert_eq!(back, p);
    }
});
