#![no_main]

use cqed_core::app::output::{read_spectrum_csv, write_spectrum_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spectrum) = read_spectrum_csv(data) else {
        return;
    };
    let mut bytes = Vec::new();
    write_spectrum_csv(&mut bytes, &spectrum).expect("accepted spectra serialize");
    let again = read_spectrum_csv(bytes.as_slice()).expect("serialized spectra parse");
    assert_eq!(again.omega_p.len(), spectrum.omega_p.len());
    for (a, b) in again.s21.iter().zip(&spectrum.s21) {
        assert_eq!((a.re.to_bits(), a.im.to_bits()), (b.re.to_bits(), b.im.to_bits()));
    }
});
