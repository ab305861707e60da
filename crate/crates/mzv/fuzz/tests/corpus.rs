//! Replays every checked-in corpus seed through its harness logic, so the
//! fuzz invariants run under plain `cargo test` even without a fuzzing
//! toolchain.

use std::path::Path;

fn replay(target: &str, check: fn(&[u8])) -> usize {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(target);
    let mut seeds = 0;
    for entry in std::fs::read_dir(&dir).expect("corpus directory exists") {
        let path = entry.expect("corpus entry").path();
        let data = std::fs::read(&path).expect("seed is readable");
        check(&data);
        seeds += 1;
    }
    seeds
}

#[test]
fn corpus_seeds_pass_their_harnesses() {
    assert!(replay("parse_index", mzv_fuzz::check_index) >= 4);
    assert!(replay("parse_word", mzv_fuzz::check_word) >= 4);
    assert!(replay("parse_poset", mzv_fuzz::check_poset) >= 3);
    assert!(replay("parse_combination", mzv_fuzz::check_combination) >= 4);
}

#[test]
fn harnesses_reject_garbage_quietly() {
    for garbage in [
        &b""[..],
        b"\xff\xfe",
        b"not an index",
        b"2,,1",
        b"0,0,0",
        b"{\"vertices\":[]}",
        b"[{\"index\":[1],\"coeff\":\"1/1\"}]",
        b"[{\"index\":[2],\"coeff\":\"1/0\"}]",
    ] {
        mzv_fuzz::check_index(garbage);
        mzv_fuzz::check_word(garbage);
        mzv_fuzz::check_poset(garbage);
        mzv_fuzz::check_combination(garbage);
    }
}
