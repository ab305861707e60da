//! Fuzzes the poset JSON decoder: accepted posets must round-trip through
//! the canonical serialization and behave involutively under transpose.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    mzv_fuzz::check_poset(data);
});
