//! Fuzzes the index text parser: arbitrary input must either be rejected
//! with an error or produce an index whose invariants hold.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    mzv_fuzz::check_index(data);
});
