#![no_main]

use libfuzzer_sys::fuzz_target;
use origami_gaps::origami::Origami;

fuzz_target!(|data: &[u8]| {
    // The parser must never panic on arbitrary input, and accepted
    // surfaces must round-trip through the canonical text form.
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(o) = Origami::parse(s) {
            let text = o.to_text();
            let back = Origami::parse(&text).expect("canonical text reparses");
            assert_eq!(back, o);
            if o.tile_count() <= 512 {
                assert_eq!(o.canonical_form().canonical_form(), o.canonical_form());
            }
        }
    }
});
