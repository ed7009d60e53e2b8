#![no_main]

use chernvan::cohomology::S2Class;
use chernvan::poly::Ambient;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let s1 = Ambient::from_pairs(&[("xi", 2), ("a", 4), ("b", 6)]).unwrap();
    let bt = Ambient::from_pairs(&[("eta", 2), ("u", 2), ("v", 2), ("a", 4), ("b", 6)]).unwrap();
    let _ = S2Class::parse(text, &s1, &bt);
});
