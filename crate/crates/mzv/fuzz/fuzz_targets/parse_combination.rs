//! Fuzzes the zeta-combination JSON decoder: accepted combinations carry
//! only admissible indices, round-trip canonically, and dualize
//! involutively.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    mzv_fuzz::check_combination(data);
});
