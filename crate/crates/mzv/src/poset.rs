//! Finite 2-labeled posets and their calculus.
//!
//! A [`LabeledPoset`] is a finite partially ordered set whose vertices carry
//! a label 0 or 1. Such a poset `X` stands for the iterated integral
//!
//! ```text
//! I(X) = ∫_{Δ(X)} Π_v ω_{label(v)}(t_v),   ω_0 = dt/t,  ω_1 = dt/(1-t),
//! ```
//!
//! over the region `Δ(X) = { t : 0 < t_v < 1, t_u < t_v whenever u < v }`.
//! The integral converges exactly when the poset is *admissible*: every
//! minimal vertex is labeled 1 and every maximal vertex 0. Linear
//! extensions decompose `I(X)` into ordinary multiple zeta values; that
//! part of the calculus lives in [`crate::symbolic`].
//!
//! The in-crate conventions: Hasse covers are written `(lower, upper)`,
//! vertex identity is a string name, and drawings put larger elements
//! higher. Chains are built downward from the maximal vertex `t1`, so the
//! letters of a word correspond to `t1, t2, ...` in order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Index;

/// Hard cap on the vertex count; the order relation is kept as one 64-bit
/// row per vertex.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct LabeledPoset {
    names: Vec<String>,
    /// `above[i]` has bit `j` set iff `i < j` in the order (strict,
    /// transitively closed).
    above: Vec<u64>,
    labels: Vec<u8>,
}

impl LabeledPoset {
    /// The empty poset, whose integral is the empty product 1.
    pub fn empty() -> Self {
        LabeledPoset {
            names: Vec::new(),
            above: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Builds a poset from named vertices, cover relations `(lower, upper)`,
    /// and labels. Covers may include redundant (transitively implied)
    /// pairs; cycles, unknown or duplicate names, and missing or non-binary
    /// labels are rejected.
    pub fn build(
        vertices: Vec<String>,
        covers: Vec<(String, String)>,
        labels: BTreeMap<String, u8>,
    ) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(MAX_VERTICES));
        }
        let n = vertices.len();
        let mut position = HashMap::with_capacity(n);
        for (i, name) in vertices.iter().enumerate() {
            if position.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        for name in labels.keys() {
            if !position.contains_key(name) {
                return Err(Error::LabelForUnknownVertex(name.clone()));
            }
        }
        let mut label_vec = Vec::with_capacity(n);
        for name in &vertices {
            match labels.get(name) {
                None => return Err(Error::MissingLabel(name.clone())),
                Some(&l) if l > 1 => return Err(Error::BadLabel(name.clone())),
                Some(&l) => label_vec.push(l),
            }
        }
        let mut successors = vec![0u64; n];
        let mut indegree = vec![0usize; n];
        for (lo, hi) in &covers {
            let &i = position.get(lo).ok_or_else(|| Error::UnknownVertex(lo.clone()))?;
            let &j = position.get(hi).ok_or_else(|| Error::UnknownVertex(hi.clone()))?;
            if i == j {
                return Err(Error::Cycle(lo.clone()));
            }
            if successors[i] & (1 << j) == 0 {
                successors[i] |= 1 << j;
                indegree[j] += 1;
            }
        }
        // Kahn's algorithm: a topological order certifies acyclicity and
        // gives the order in which to accumulate the transitive closure.
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for j in bits(successors[v]) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if topo.len() != n {
            let culprit = (0..n)
                .find(|&v| indegree[v] > 0)
                .expect("some vertex is left on every cycle");
            return Err(Error::Cycle(vertices[culprit].clone()));
        }
        let mut above = vec![0u64; n];
        for &v in topo.iter().rev() {
            for j in bits(successors[v]) {
                above[v] |= (1 << j) | above[j];
            }
        }
        Ok(LabeledPoset {
            names: vertices,
            above,
            labels: label_vec,
        })
    }

    /// Convenience form of [`LabeledPoset::build`] for literals.
    pub fn from_covers(
        vertices: &[&str],
        covers: &[(&str, &str)],
        labels: &[(&str, u8)],
    ) -> Result<Self> {
        Self::build(
            vertices.iter().map(|s| s.to_string()).collect(),
            covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            labels
                .iter()
                .map(|(v, l)| (v.to_string(), *l))
                .collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Weight of the integral: the number of vertices.
    pub fn weight(&self) -> usize {
        self.names.len()
    }

    /// Depth of the integral: the number of vertices labeled 1.
    pub fn depth(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn label(&self, v: usize) -> u8 {
        self.labels[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Strict order test `u < v`.
    pub fn less(&self, u: usize, v: usize) -> bool {
        self.above[u] & (1 << v) != 0
    }

    pub fn are_incomparable(&self, u: usize, v: usize) -> bool {
        u != v && !self.less(u, v) && !self.less(v, u)
    }

    pub fn minimal_vertices(&self) -> Vec<usize> {
        let mut has_lower = 0u64;
        for &row in &self.above {
            has_lower |= row;
        }
        (0..self.vertex_count())
            .filter(|&v| has_lower & (1 << v) == 0)
            .collect()
    }

    pub fn maximal_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.above[v] == 0)
            .collect()
    }

    /// Every minimal vertex labeled 1 and every maximal vertex labeled 0;
    /// equivalently, `I(X)` converges. The empty poset is admissible.
    pub fn is_admissible(&self) -> bool {
        self.minimal_vertices().iter().all(|&v| self.labels[v] == 1)
            && self.maximal_vertices().iter().all(|&v| self.labels[v] == 0)
    }

    /// The Hasse covers `(lower, upper)`, sorted by vertex id.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut result = Vec::new();
        for u in 0..self.vertex_count() {
            let mut implied = 0u64;
            for j in bits(self.above[u]) {
                implied |= self.above[j];
            }
            for v in bits(self.above[u] & !implied) {
                result.push((u, v));
            }
        }
        result
    }

    /// Disjoint union `X ⊔ Y`; the integral multiplies: `I(X ⊔ Y) =
    /// I(X) · I(Y)`. Name collisions on the right operand are resolved by
    /// appending primes.
    pub fn direct_sum(&self, other: &LabeledPoset) -> Result<Self> {
        let n = self.vertex_count();
        let m = other.vertex_count();
        if n + m > MAX_VERTICES {
            return Err(Error::TooManyVertices(MAX_VERTICES));
        }
        let mut names = self.names.clone();
        for base in &other.names {
            let mut candidate = base.clone();
            while names.contains(&candidate) {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        let mut above = self.above.clone();
        above.extend(other.above.iter().map(|row| row << n));
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(LabeledPoset { names, above, labels })
    }

    /// Refinement `X` with the extra relation `lower < upper` imposed (the
    /// two vertices must be incomparable beforehand). Together with its
    /// mirror image this is the basic split `I(X) = I(X with a<b) +
    /// I(X with b<a)` for incomparable `a`, `b`.
    pub fn refine(&self, lower: &str, upper: &str) -> Result<Self> {
        let a = self.index_of(lower)?;
        let b = self.index_of(upper)?;
        if !self.are_incomparable(a, b) {
            return Err(Error::NotIncomparable(lower.to_string(), upper.to_string()));
        }
        let gain = (1u64 << b) | self.above[b];
        let mut above = self.above.clone();
        for x in 0..self.vertex_count() {
            if x == a || self.above[x] & (1 << a) != 0 {
                above[x] |= gain;
            }
        }
        Ok(LabeledPoset {
            names: self.names.clone(),
            above,
            labels: self.labels.clone(),
        })
    }

    /// Order-reversal with all labels flipped; corresponds to the change of
    /// variables `t ↦ 1-t` in the integral, so `I(X*)` decomposes into the
    /// duals of the terms of `I(X)`. Admissibility is preserved.
    pub fn transpose(&self) -> Self {
        let n = self.vertex_count();
        let mut above = vec![0u64; n];
        for u in 0..n {
            for v in bits(self.above[u]) {
                above[v] |= 1 << u;
            }
        }
        LabeledPoset {
            names: self.names.clone(),
            above,
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
        }
    }

    /// All linear extensions, lexicographically by vertex id. Each is the
    /// list of vertex ids from the bottom of the chain upward.
    pub fn linear_extensions(&self) -> LinearExtensions {
        let n = self.vertex_count();
        let mut below = vec![0u64; n];
        for u in 0..n {
            for v in bits(self.above[u]) {
                below[v] |= 1 << u;
            }
        }
        LinearExtensions {
            below,
            n,
            prefix: Vec::with_capacity(n),
            next_try: vec![0; n + 1],
            placed: 0,
            started: false,
            done: false,
        }
    }

    /// Number of linear extensions, via memoization over down-sets.
    pub fn count_linear_extensions(&self) -> BigUint {
        let n = self.vertex_count();
        let mut below = vec![0u64; n];
        for u in 0..n {
            for v in bits(self.above[u]) {
                below[v] |= 1 << u;
            }
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut memo: HashMap<u64, BigUint> = HashMap::new();
        fn count(
            placed: u64,
            full: u64,
            below: &[u64],
            memo: &mut HashMap<u64, BigUint>,
        ) -> BigUint {
            if placed == full {
                return BigUint::one();
            }
            if let Some(hit) = memo.get(&placed) {
                return hit.clone();
            }
            let mut total = BigUint::zero();
            for (v, &b) in below.iter().enumerate() {
                if placed & (1 << v) == 0 && b & !placed == 0 {
                    total += count(placed | (1 << v), full, below, memo);
                }
            }
            memo.insert(placed, total.clone());
            total
        }
        count(0, full, &below, &mut memo)
    }

    /// Canonical single-line JSON: vertex order as constructed, Hasse
    /// covers sorted, labels keyed by name.
    pub fn to_json(&self) -> String {
        let dto = PosetDto {
            vertices: self.names.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(u, v)| (self.names[u].clone(), self.names[v].clone()))
                .collect(),
            labels: self
                .names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), self.labels[i]))
                .collect(),
        };
        serde_json::to_string(&dto).expect("poset serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: PosetDto = serde_json::from_str(text)?;
        Self::build(dto.vertices, dto.covers, dto.labels)
    }

    /// GraphViz rendering of the Hasse diagram: label-1 vertices are filled
    /// (the `•` of the diagrams), label-0 vertices hollow (`○`), larger
    /// elements drawn higher. The first line is a comment carrying the
    /// canonical JSON, so the drawing can be parsed back losslessly.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("// poset-json: ");
        out.push_str(&self.to_json());
        out.push_str("\ndigraph poset {\n  rankdir = BT;\n");
        for (i, name) in self.names.iter().enumerate() {
            let style = if self.labels[i] == 1 {
                "style=filled, fillcolor=black, fontcolor=white"
            } else {
                "style=filled, fillcolor=white"
            };
            out.push_str(&format!(
                "  n{i} [label=\"{}\", shape=circle, {style}];\n",
                dot_escape(name)
            ));
        }
        for (u, v) in self.covers() {
            out.push_str(&format!("  n{u} -> n{v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for LabeledPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poset{}", self.to_json())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetDto {
    vertices: Vec<String>,
    covers: Vec<(String, String)>,
    labels: BTreeMap<String, u8>,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Iterates over the set bits of a word.
fn bits(word: u64) -> impl Iterator<Item = usize> {
    let mut rest = word;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        }
    })
}

/// A linear extension as vertex ids from bottom to top.
pub type LinearExtension = Vec<usize>;

/// Backtracking iterator over all linear extensions.
pub struct LinearExtensions {
    below: Vec<u64>,
    n: usize,
    prefix: Vec<usize>,
    next_try: Vec<usize>,
    placed: u64,
    started: bool,
    done: bool,
}

impl Iterator for LinearExtensions {
    type Item = LinearExtension;

    fn next(&mut self) -> Option<LinearExtension> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.n == 0 {
                self.done = true;
                return Some(Vec::new());
            }
        } else {
            debug_assert_eq!(self.prefix.len(), self.n);
            self.backtrack();
        }
        loop {
            let depth = self.prefix.len();
            if depth == self.n {
                return Some(self.prefix.clone());
            }
            let mut v = self.next_try[depth];
            while v < self.n {
                let placeable = self.placed & (1 << v) == 0
                    && self.below[v] & !self.placed == 0;
                if placeable {
                    break;
                }
                v += 1;
            }
            if v == self.n {
                if depth == 0 {
                    self.done = true;
                    return None;
                }
                self.backtrack();
            } else {
                self.next_try[depth] = v + 1;
                self.prefix.push(v);
                self.placed |= 1 << v;
                self.next_try[depth + 1] = 0;
            }
        }
    }
}

impl LinearExtensions {
    fn backtrack(&mut self) {
        let v = self.prefix.pop().expect("backtrack from a nonempty prefix");
        self.placed &= !(1u64 << v);
    }
}

/// The vertical diagram of an index: a chain of `|k|` vertices named
/// `{prefix}1 > {prefix}2 > ... > {prefix}|k|` from top to bottom, vertex
/// `j` labeled with the `j`-th letter of `0^(k1-1) 1 0^(k2-1) 1 ...` — so
/// each part contributes a run of hollow vertices closed by a filled one.
/// Accepts any index (the empty index gives the empty poset); the result
/// is admissible exactly when `k` is admissible and nonempty.
pub fn vertical_diagram(k: &Index, prefix: &str) -> LabeledPoset {
    let word = k.word_unchecked();
    let w = word.len();
    let vertices: Vec<String> = (1..=w).map(|j| format!("{prefix}{j}")).collect();
    let covers = (1..w)
        .map(|j| (format!("{prefix}{}", j + 1), format!("{prefix}{j}")))
        .collect();
    let labels = word
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &l)| (format!("{prefix}{}", i + 1), l))
        .collect();
    LabeledPoset::build(vertices, covers, labels).expect("a chain is a valid poset")
}

/// The totally ordered poset of an admissible index: vertices `t1 > t2 >
/// ... > tw` from top to bottom, vertex `tj` labeled with the `j`-th letter
/// of the word of `k`. Its integral is `ζ(k)` on the nose.
pub fn chain_poset(k: &Index) -> Result<LabeledPoset> {
    k.to_word()?;
    Ok(vertical_diagram(k, "t"))
}

/// The zig-zag poset of a nonempty index: vertices `t1, ..., tw` with
/// `tj < t(j+1)` when `j ∉ J(k)` and `tj > t(j+1)` when `j ∈ J(k)`, vertex
/// `tj` labeled `δ(j)`. For admissible `k` this is the poset of the star
/// value `ζ*(k)`; it is admissible exactly when `ζ*(k)` converges.
pub fn zigzag_poset(k: &Index) -> Result<LabeledPoset> {
    let delta = k.delta_map()?;
    let j_set = k.j_set()?;
    let w = k.weight() as usize;
    let vertices: Vec<String> = (1..=w).map(|j| format!("t{j}")).collect();
    let covers = (1..w)
        .map(|j| {
            if j_set.contains(j as u32) {
                // descent: t_j > t_(j+1)
                (format!("t{}", j + 1), format!("t{j}"))
            } else {
                (format!("t{j}"), format!("t{}", j + 1))
            }
        })
        .collect();
    let labels = delta
        .iter()
        .enumerate()
        .map(|(i, &l)| (format!("t{}", i + 1), l))
        .collect();
    LabeledPoset::build(vertices, covers, labels)
}
