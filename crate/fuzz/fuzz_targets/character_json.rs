#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = hecke::characters::FormalCharacter::from_json(s) {
            let back = hecke::characters::FormalCharacter::from_json(&c.to_json().expect("serializes")).expect("roundtrip");
            assert_eq!(back, c);
        }
    }
});
