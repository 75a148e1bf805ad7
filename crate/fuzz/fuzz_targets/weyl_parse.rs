#![no_main]
use hecke::multiseg::CrystalOp;
use hecke::weyl::{ParabolicShape, WeylElem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = s.parse::<WeylElem>();
        if let Ok(sh) = s.parse::<ParabolicShape>() {
            let _ = sh.generators();
        }
        let _ = s.parse::<CrystalOp>();
    }
});
