#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = s.parse::<hecke::Scalar>() {
            let back: hecke::Scalar = x.to_string().parse().expect("printed scalar parses");
            assert_eq!(back, x);
        }
    }
});
