//! Composition indices and the transpose operation.
//!
//! An [`Index`] is a finite sequence of positive integers `(k1, ..., kn)`.
//! Throughout the crate it plays three roles: exponent vector of a multiple
//! zeta value `ζ(k) = Σ_{m1 > m2 > ... > mn ≥ 1} 1 / (m1^k1 · ... · mn^kn)`,
//! exponent vector of the star variant `ζ*(k)` (weak inequalities), and
//! exponent vector of the finite sums `s_k(N)` where `m1` is pinned to `N`.
//! An index is *admissible* when it is empty or its first part is at least 2,
//! which is exactly when `ζ(k)` converges.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A composition: a finite (possibly empty) sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    parts: Vec<u32>,
}

impl Index {
    /// Builds an index, rejecting zero parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::ZeroPart);
        }
        Ok(Index { parts })
    }

    /// The empty index; weight 0, depth 0, admissible by convention.
    pub fn empty() -> Self {
        Index { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Weight `|k| = k1 + ... + kn`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Depth `n`, the number of parts.
    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    /// Empty, or first part at least 2.
    pub fn is_admissible(&self) -> bool {
        self.parts.first().map_or(true, |&k1| k1 >= 2)
    }

    /// The set of proper partial sums `A(k) = {k1, k1+k2, ..., k1+...+k_{n-1}}`,
    /// a subset of `{1, ..., |k|-1}`. Rejects the empty index.
    pub fn partial_sum_set(&self) -> Result<PartialSumSet> {
        if self.parts.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut elements = Vec::with_capacity(self.parts.len() - 1);
        let mut acc = 0u32;
        for &p in &self.parts[..self.parts.len() - 1] {
            acc += p;
            elements.push(acc);
        }
        Ok(PartialSumSet { elements })
    }

    /// `J(k) = A(k) ∪ {0}`, the set that controls the zig-zag shape: the
    /// chain of integration variables descends at position `j` (that is,
    /// `t_j > t_{j+1}`) exactly when `j ∈ J(k)`.
    pub fn j_set(&self) -> Result<PartialSumSet> {
        let a = self.partial_sum_set()?;
        let mut elements = Vec::with_capacity(a.elements.len() + 1);
        elements.push(0);
        elements.extend_from_slice(&a.elements);
        Ok(PartialSumSet { elements })
    }

    /// The transpose `k*`: the unique index of the same weight `w` whose
    /// partial-sum set is the complement of `A(k)` inside `{1, ..., w-1}`.
    /// It is an involution and governs the duality between the finite sums
    /// `s_k` and `s_{k*}`. Not the same operation as [`Index::dual`].
    pub fn transpose(&self) -> Result<Index> {
        let w = self.weight();
        let complement = self.partial_sum_set()?.complement_in(w.saturating_sub(1));
        let mut parts = Vec::with_capacity(complement.elements.len() + 1);
        let mut prev = 0u32;
        for &b in complement.elements.iter().chain(std::iter::once(&w)) {
            parts.push(b - prev);
            prev = b;
        }
        Ok(Index { parts })
    }

    /// The letter map `δ` of the zig-zag integral for `s_k`: a vector of
    /// length `|k|` whose `j`-th entry (1-based) is 1 if `j-1 ∈ J(k)` and 0
    /// otherwise. Entry `j` tells which form is attached to the variable
    /// `t_j`: `dt/(1-t)` for 1, `dt/t` for 0. Entry 1 is always 1, although
    /// the finite-sum integral replaces it by `t1^{N-1} dt1`.
    pub fn delta_map(&self) -> Result<Vec<u8>> {
        let j_set = self.j_set()?;
        let w = self.weight();
        Ok((1..=w)
            .map(|j| u8::from(j_set.contains(j - 1)))
            .collect())
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let text = self
            .parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        f.write_str(&text)
    }
}

// Indices read better as `2,1,2` than as a struct dump in test failures.
impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Text form is comma-separated positive integers, e.g. `"2,1,2"`. The empty
/// string is rejected: the empty index has no text form.
impl FromStr for Index {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::EmptyIndexText);
        }
        let mut parts = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let value: u32 = token
                .parse()
                .map_err(|_| Error::MalformedPart(token.to_string()))?;
            if value == 0 {
                return Err(Error::ZeroPart);
            }
            parts.push(value);
        }
        Ok(Index { parts })
    }
}

/// A strictly increasing set of nonnegative integers, used for the
/// partial-sum sets `A(k)` and `J(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSumSet {
    elements: Vec<u32>,
}

impl PartialSumSet {
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The complement within `{1, ..., n}`.
    pub fn complement_in(&self, n: u32) -> PartialSumSet {
        let elements = (1..=n).filter(|&x| !self.contains(x)).collect();
        PartialSumSet { elements }
    }
}
