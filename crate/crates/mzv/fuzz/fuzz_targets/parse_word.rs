//! Fuzzes the binary-word parser: accepted words must round-trip through
//! their display form, dualize involutively, and decode consistently.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    mzv_fuzz::check_word(data);
});
