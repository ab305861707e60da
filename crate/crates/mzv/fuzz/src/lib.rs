//! Shared invariant checks for the fuzz targets. Each `fuzz_targets/*.rs`
//! binary forwards its input here, and `tests/corpus.rs` replays the
//! checked-in seed corpora through the same functions so the harness
//! logic itself stays covered by `cargo test` on a stable toolchain.

use mzv::poset::LabeledPoset;
use mzv::symbolic::ZetaCombination;
use mzv::{Index, Word};
use num::{BigUint, Zero};

/// Weight cap below which weight-sized structures (words, transpose
/// bookkeeping) are exercised; degenerate giant-part inputs like
/// `"4000000000,4000000000"` must not OOM the harness.
const WEIGHT_CAP: u64 = 1 << 12;

fn weight_of(index: &Index) -> u64 {
    index.parts().iter().map(|&p| u64::from(p)).sum()
}

pub fn check_index(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(index) = text.parse::<Index>() else {
        return;
    };

    // The parser only accepts nonempty sequences of positive parts.
    assert!(!index.is_empty());
    assert!(index.parts().iter().all(|&p| p > 0));

    // Display text re-parses to the same index.
    let round: Index = index.to_string().parse().expect("display text re-parses");
    assert_eq!(round, index);

    if weight_of(&index) <= WEIGHT_CAP {
        let transposed = index.transpose().expect("nonempty index transposes");
        assert_eq!(transposed.transpose().expect("involution"), index);
        assert_eq!(transposed.weight(), index.weight());
        assert_eq!(
            (transposed.depth() + index.depth()) as u64,
            u64::from(index.weight()) + 1
        );
    }
}

pub fn check_word(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(word) = text.parse::<Word>() else {
        return;
    };

    assert!(word.letters().iter().all(|&l| l <= 1));

    let round: Word = word.to_string().parse().expect("display text re-parses");
    assert_eq!(round, word);

    let dual = word.dual();
    assert_eq!(dual.len(), word.len());
    assert_eq!(dual.dual(), word);

    // Admissible words decode to an index that encodes back to the word.
    if let Ok(index) = word.to_index() {
        assert!(index.is_admissible());
        assert_eq!(index.to_word().expect("admissible index encodes"), word);
    }
}

pub fn check_poset(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(poset) = LabeledPoset::from_json(text) else {
        return;
    };

    // Canonical serialization round-trips structurally.
    let json = poset.to_json();
    let round = LabeledPoset::from_json(&json).expect("canonical JSON re-parses");
    assert_eq!(round, poset);

    // Transpose is an involution and preserves admissibility and size.
    let transposed = poset.transpose();
    assert_eq!(transposed.transpose(), poset);
    assert_eq!(poset.is_admissible(), transposed.is_admissible());
    assert_eq!(poset.weight(), transposed.weight());

    // Extension counting agrees with the iterator, kept to small posets
    // so a wide antichain cannot blow up the per-input cost.
    if poset.vertex_count() <= 7 {
        let count = poset.linear_extensions().count();
        assert_eq!(poset.count_linear_extensions(), BigUint::from(count));
    }
}

pub fn check_combination(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(combination) = ZetaCombination::from_json(text) else {
        return;
    };

    // Every stored index is admissible with a nonzero coefficient.
    for (k, c) in combination.terms() {
        assert!(k.is_admissible());
        assert!(!c.is_zero());
    }

    // Canonical serialization round-trips.
    let json = combination.to_json();
    let round = ZetaCombination::from_json(&json).expect("canonical JSON re-parses");
    assert_eq!(round, combination);

    // Duality builds weight-sized words; gate it against degenerate
    // giant-part indices.
    if combination.terms().all(|(k, _)| weight_of(k) <= WEIGHT_CAP) {
        assert_eq!(combination.dual().dual(), combination);
    }
}
