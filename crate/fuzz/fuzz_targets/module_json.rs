#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = hecke::ModuleRep::from_json(s) {
            let _ = hecke::modrep::verify_module(&m);
            let again = hecke::ModuleRep::from_json(&m.to_json().expect("serializes")).expect("roundtrip");
            assert_eq!(again.dim(), m.dim());
        }
    }
});
