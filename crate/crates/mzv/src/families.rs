//! Builders and verifiers for three structured families of relations:
//! Arakawa–Kaneko values and Ohno's relation, Mordell–Tornheim values and
//! the Bradley–Zhou decomposition, and Komori–Matsumoto–Tsumura (KMT)
//! values with their refinement-derived relation.
//!
//! Each family is represented by an explicit 2-labeled poset built out of
//! vertical diagrams; the verifiers compare exact decompositions (and,
//! where a family has an independent series definition, high-precision
//! numeric evaluations) of both sides of the classical statement.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::integer::binomial;
use num::rational::BigRational;
use num::One;

use crate::error::{Error, Result};
use crate::index::Index;
use crate::numeric::{combination_eval, mt_series_eval};
use crate::poset::{vertical_diagram, zigzag_poset, LabeledPoset};
use crate::symbolic::{decompose, decompose_words, WordCombination, ZetaCombination};

/// Truncation used by the numeric half of [`verify_bradley_zhou`]: both the
/// decomposition and the defining series are evaluated with every summation
/// variable capped at this bound, and the results must agree within their
/// combined error bounds.
pub const MT_VERIFY_TRUNCATION: u64 = 2000;

/// The Arakawa–Kaneko poset for `ξ_k(n)`: a `(k+1)`-vertex chain
/// `t1 > … > t(k+1)` (hollow except for the filled bottom `t(k+1)`)
/// together with an antichain of `n−1` filled vertices `a1, …, a(n−1)`,
/// each lying below the top `t1` only.
///
/// For `n = 1` the antichain is empty and the result is exactly
/// `chain_poset((k+1))`. The poset is always admissible, and
/// `(n−1)! · ξ_k(n) = I(ak_poset(k, n))`.
pub fn ak_poset(k: u32, n: u32) -> Result<LabeledPoset> {
    if k < 1 || n < 1 {
        return Err(Error::MalformedShape(
            "ak_poset requires k ≥ 1 and n ≥ 1".into(),
        ));
    }
    let chain = Index::new(vec![k + 1]).expect("k + 1 ≥ 1");
    let mut vertices: Vec<String> = (1..=k + 1).map(|j| format!("t{j}")).collect();
    let mut covers: Vec<(String, String)> = (1..=k)
        .map(|j| (format!("t{}", j + 1), format!("t{j}")))
        .collect();
    let mut labels: BTreeMap<String, u8> = chain
        .word_unchecked()
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &l)| (format!("t{}", i + 1), l))
        .collect();
    for i in 1..n {
        let name = format!("a{i}");
        vertices.push(name.clone());
        covers.push((name.clone(), "t1".into()));
        labels.insert(name, 1);
    }
    LabeledPoset::build(vertices, covers, labels)
}

/// Checks Ohno's relation `ξ_k(n) = ζ*(k+1, 1^{n−1})` in its exact poset
/// form: the decomposition of [`ak_poset`]`(k, n)` must equal `(n−1)!`
/// times the decomposition of the zig-zag poset of `(k+1, 1^{n−1})`,
/// as an identity of formal zeta combinations.
pub fn verify_ohno(k: u32, n: u32) -> Result<bool> {
    let ak = ak_poset(k, n)?;
    let mut parts = vec![k + 1];
    parts.extend(std::iter::repeat(1).take(n as usize - 1));
    let star = zigzag_poset(&Index::new(parts).expect("all parts positive"))?;
    let mut factorial = BigInt::one();
    for i in 2..n {
        factorial *= i;
    }
    let lhs = decompose(&ak)?;
    let rhs = decompose(&star)?.scale(&BigRational::from(factorial));
    Ok(lhs == rhs)
}

/// The Mordell–Tornheim poset for `ζ_MT,r(k₁, …, k_r; k)`: a common
/// hollow chain `c1 > … > ck` with `r` branches hanging below its bottom
/// `ck`, branch `i` being a vertical diagram of the single-part index
/// `(k_i)` with vertices `b{i}_1 > … > b{i}_{k_i}` (hollow except the
/// filled bottom).
///
/// `ks` must be nonempty. `k = 0` is allowed and produces the disjoint
/// union of the branches (no common chain); the poset is admissible
/// whenever `k ≥ 1`.
pub fn mt_poset(ks: &Index, k: u32) -> Result<LabeledPoset> {
    if ks.depth() == 0 {
        return Err(Error::EmptyIndex);
    }
    let mut vertices = Vec::new();
    let mut covers = Vec::new();
    let mut labels: BTreeMap<String, u8> = BTreeMap::new();
    for j in 1..=k {
        vertices.push(format!("c{j}"));
        labels.insert(format!("c{j}"), 0);
        if j > 1 {
            covers.push((format!("c{j}"), format!("c{}", j - 1)));
        }
    }
    for (i, &part) in ks.parts().iter().enumerate() {
        let i = i + 1;
        for j in 1..=part {
            let name = format!("b{i}_{j}");
            vertices.push(name.clone());
            labels.insert(name, if j == part { 1 } else { 0 });
            if j > 1 {
                covers.push((format!("b{i}_{j}"), format!("b{i}_{}", j - 1)));
            }
        }
        if k > 0 {
            covers.push((format!("b{i}_1"), format!("c{k}")));
        }
    }
    LabeledPoset::build(vertices, covers, labels)
}

/// Checks the Bradley–Zhou statement for `ζ_MT,r(ks; k)`: the
/// decomposition of [`mt_poset`] consists of terms of weight
/// `k₁ + … + k_r + k` and depth `r` only, and its numeric value matches
/// an independent evaluation of the defining `r`-fold series (both at
/// truncation [`MT_VERIFY_TRUNCATION`], within combined error bounds).
pub fn verify_bradley_zhou(ks: &Index, k: u32) -> Result<bool> {
    let poset = mt_poset(ks, k)?;
    let combination = decompose(&poset)?;
    let weight = ks.weight() + k;
    let depth = ks.depth();
    for (index, _) in combination.terms() {
        if index.weight() != weight || index.depth() != depth {
            return Ok(false);
        }
    }
    let from_poset = combination_eval(&combination, MT_VERIFY_TRUNCATION)?;
    let from_series = mt_series_eval(ks, k, MT_VERIFY_TRUNCATION)?;
    Ok(from_poset.agrees_with(&from_series))
}

/// Shape parameters of a KMT value `ζ_KMT(p; q; r)`: a trunk index `p`
/// and two branch indexes `q`, `r`.
///
/// The poset form is built by [`kmt_poset`]; the relation derived by
/// refinements requires `q` and `r` nonempty (their leading parts drive
/// the recursion), while `p` may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmtShape {
    pub p: Index,
    pub q: Index,
    pub r: Index,
}

impl KmtShape {
    pub fn new(p: Index, q: Index, r: Index) -> Self {
        KmtShape { p, q, r }
    }

    /// Total weight `|p| + |q| + |r|`.
    pub fn weight(&self) -> u32 {
        self.p.weight() + self.q.weight() + self.r.weight()
    }
}

impl fmt::Display for KmtShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.p, self.q, self.r)
    }
}

/// The KMT poset: vertical diagrams for `p`, `q`, `r` (vertex prefixes
/// `p`, `q`, `r`) with the branch tops `q1` and `r1` placed below the
/// trunk's bottom vertex `x = p{|p|}`.
///
/// Empty segments simply omit their diagram; with `p` empty the two
/// branches stay disjoint. The poset is admissible whenever every
/// maximal vertex is hollow — in particular whenever `p₁ ≥ 2`.
pub fn kmt_poset(shape: &KmtShape) -> Result<LabeledPoset> {
    let trunk = vertical_diagram(&shape.p, "p");
    let left = vertical_diagram(&shape.q, "q");
    let right = vertical_diagram(&shape.r, "r");
    let mut poset = trunk.direct_sum(&left)?.direct_sum(&right)?;
    if shape.p.depth() > 0 {
        let x = format!("p{}", shape.p.weight());
        if shape.q.depth() > 0 {
            poset = poset.refine("q1", &x)?;
        }
        if shape.r.depth() > 0 {
            poset = poset.refine("r1", &x)?;
        }
    }
    Ok(poset)
}

/// One application of the refinement identity inside the KMT derivation:
/// `poset` is split along the incomparable `pair = (a, b)` into the two
/// refinements `a < b` and `b < a`.
#[derive(Debug, Clone, PartialEq)]
pub struct KmtSplit {
    pub poset: LabeledPoset,
    pub pair: (String, String),
}

/// One term of one of the two sums on the right-hand side of the KMT
/// relation: the leaf refinement `cascade_poset` of the original poset
/// realises `multiplicity` (i.e. `C(·−1+j, j)`) copies of the reduced KMT
/// shape's poset — identical decompositions up to that factor.
#[derive(Debug, Clone, PartialEq)]
pub struct KmtTerm {
    pub j: u32,
    pub multiplicity: BigUint,
    pub cascade_poset: LabeledPoset,
    pub reduced: KmtShape,
    pub reduced_poset: LabeledPoset,
}

/// The full refinement derivation of the KMT relation for one shape:
/// every split performed (each satisfies the refinement identity), the
/// terms of both sums, and the two sides as word combinations.
///
/// `lhs_words = rhs_words` holds for every shape; when [`kmt_poset`] is
/// admissible both convert to equal [`ZetaCombination`]s (see
/// [`kmt_relation_lhs_rhs`]).
#[derive(Debug, Clone, PartialEq)]
pub struct KmtDerivation {
    pub shape: KmtShape,
    pub poset: LabeledPoset,
    pub splits: Vec<KmtSplit>,
    pub first_terms: Vec<KmtTerm>,
    pub second_terms: Vec<KmtTerm>,
    pub lhs_words: WordCombination,
    pub rhs_words: WordCombination,
}

/// The reduced shape contributed by the leaf with `j` hollow vertices of
/// the fixed branch's leading run placed above the mover: the mover's
/// segment merges into the trunk and the fixed branch keeps a shortened
/// leading part.
fn reduced_shape(shape: &KmtShape, j: u32, first_family: bool) -> KmtShape {
    let b = shape.q.parts()[0];
    let c = shape.r.parts()[0];
    let mut p = shape.p.parts().to_vec();
    let (q, r) = if first_family {
        p.push(c + j);
        let mut q = vec![b - j];
        q.extend_from_slice(&shape.q.parts()[1..]);
        (q, shape.r.parts()[1..].to_vec())
    } else {
        p.push(b + j);
        let mut r = vec![c - j];
        r.extend_from_slice(&shape.r.parts()[1..]);
        (shape.q.parts()[1..].to_vec(), r)
    };
    KmtShape {
        p: Index::new(p).expect("merged trunk parts are positive"),
        q: Index::new(q).expect("branch parts stay positive"),
        r: Index::new(r).expect("branch parts stay positive"),
    }
}

/// Walks the mover vertex down the leading hollow run of the fixed
/// branch: at each rung the poset splits into a leaf (mover below the
/// rung) and a continuation (mover above it), and the final continuation
/// is the `j = 0` leaf. Returns the terms with `j` ascending.
fn cascade(
    shape: &KmtShape,
    start: LabeledPoset,
    mover: &str,
    fixed_prefix: &str,
    fixed_first: u32,
    mover_first: u32,
    first_family: bool,
    splits: &mut Vec<KmtSplit>,
) -> Result<Vec<KmtTerm>> {
    let mut leaves: Vec<(u32, LabeledPoset)> = Vec::new();
    let mut current = start;
    for t in (1..fixed_first).rev() {
        let rung = format!("{fixed_prefix}{t}");
        splits.push(KmtSplit {
            poset: current.clone(),
            pair: (mover.to_string(), rung.clone()),
        });
        leaves.push((t, current.refine(mover, &rung)?));
        current = current.refine(&rung, mover)?;
    }
    leaves.push((0, current));
    leaves.reverse();
    leaves
        .into_iter()
        .map(|(j, cascade_poset)| {
            let reduced = reduced_shape(shape, j, first_family);
            let reduced_poset = kmt_poset(&reduced)?;
            let multiplicity =
                binomial(BigUint::from(mover_first - 1 + j), BigUint::from(j));
            Ok(KmtTerm {
                j,
                multiplicity,
                cascade_poset,
                reduced,
                reduced_poset,
            })
        })
        .collect()
}

/// Executes the refinement derivation of the KMT relation for `shape`.
///
/// The poset is first split along the incomparable pair `(y, z)` of
/// filled vertices closing the leading segments of `q` and `r`. In the
/// branch with `z` above `y`, `z` then cascades down the `q₁ − 1` hollow
/// vertices above `y`; the leaf with `j` of them above `z` realises
/// `C(r₁−1+j, j)` copies of the reduced shape
/// `(p ⧺ (r₁+j); (q₁−j, q₂, …); (r₂, …))` — the binomial counts the ways
/// to interleave those `j` hollows with the `r₁ − 1` hollows of `z`'s own
/// segment. The branch with `y` above `z` is handled symmetrically.
/// Requires `q` and `r` nonempty.
pub fn kmt_derivation(shape: &KmtShape) -> Result<KmtDerivation> {
    if shape.q.depth() == 0 || shape.r.depth() == 0 {
        return Err(Error::MalformedShape(
            "the KMT relation requires both branch indexes to be nonempty".into(),
        ));
    }
    let poset = kmt_poset(shape)?;
    let b = shape.q.parts()[0];
    let c = shape.r.parts()[0];
    let y = format!("q{b}");
    let z = format!("r{c}");

    let mut splits = vec![KmtSplit {
        poset: poset.clone(),
        pair: (y.clone(), z.clone()),
    }];
    let first_terms = cascade(
        shape,
        poset.refine(&y, &z)?,
        &z,
        "q",
        b,
        c,
        true,
        &mut splits,
    )?;
    let second_terms = cascade(
        shape,
        poset.refine(&z, &y)?,
        &y,
        "r",
        c,
        b,
        false,
        &mut splits,
    )?;

    let lhs_words = decompose_words(&poset);
    let mut rhs_words = WordCombination::zero();
    for term in first_terms.iter().chain(second_terms.iter()) {
        let factor = BigRational::from(BigInt::from(term.multiplicity.clone()));
        rhs_words = rhs_words + decompose_words(&term.reduced_poset).scale(&factor);
    }

    Ok(KmtDerivation {
        shape: shape.clone(),
        poset,
        splits,
        first_terms,
        second_terms,
        lhs_words,
        rhs_words,
    })
}

/// Both sides of the KMT relation as zeta combinations: the left side is
/// the decomposition of [`kmt_poset`]`(shape)`, the right side is the
/// double sum of binomial multiples of reduced KMT decompositions
/// produced by [`kmt_derivation`]. The two are exactly equal.
///
/// Requires the shape's poset to be admissible (e.g. `p₁ ≥ 2`); for
/// arbitrary shapes the identity still holds at the word level and is
/// available through [`kmt_derivation`].
pub fn kmt_relation_lhs_rhs(shape: &KmtShape) -> Result<(ZetaCombination, ZetaCombination)> {
    let derivation = kmt_derivation(shape)?;
    if !derivation.poset.is_admissible() {
        return Err(Error::NonAdmissiblePoset);
    }
    Ok((
        derivation.lhs_words.to_zeta_combination()?,
        derivation.rhs_words.to_zeta_combination()?,
    ))
}
