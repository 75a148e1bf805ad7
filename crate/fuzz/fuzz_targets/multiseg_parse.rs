#![no_main]
use hecke::multiseg::Multisegment;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = s.parse::<Multisegment>() {
            let back: Multisegment = g.to_string().parse().expect("printed multisegment parses");
            assert_eq!(back, g);
        }
        if let Ok(g) = Multisegment::from_json(s) {
            let _ = g.standard_listing();
        }
    }
});
