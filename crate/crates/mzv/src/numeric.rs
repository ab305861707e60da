//! High-precision numeric evaluation of the series this crate manipulates
//! formally: multiple zeta values, Mordell–Tornheim sums, and the
//! Komori–Matsumoto–Tsumura two-branch sums.
//!
//! Everything here computes a truncated partial sum in double-double
//! arithmetic (a `TwoFloat`, roughly 31 significant decimal digits) and
//! pairs it with a rigorous `f64` over-estimate of the distance to the
//! exact value. The dominating contribution is always the truncation
//! tail, bounded by integral comparison; double-double rounding noise is
//! folded in as a small relative slack.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num::{BigRational, ToPrimitive};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::finite::log_power_tail_rational;
use crate::index::Index;
use crate::rat::{format_decimal, rat_from_f64};
use crate::symbolic::ZetaCombination;

/// Largest accepted truncation parameter: the evaluators allocate one
/// double-double per summation index, so this caps memory at ~160 MB.
pub const MAX_TRUNCATION: u64 = 10_000_000;

/// A numeric approximation together with a rigorous error bound:
/// the exact quantity being approximated lies within `error_bound`
/// of `value`.
#[derive(Clone, Copy, Debug)]
pub struct ApproxValue {
    value: TwoFloat,
    error_bound: f64,
}

impl ApproxValue {
    fn new(value: TwoFloat, error_bound: f64) -> Self {
        assert!(
            error_bound.is_finite() && error_bound >= 0.0,
            "error bound must be a finite non-negative number"
        );
        ApproxValue { value, error_bound }
    }

    /// Wraps a value known exactly (zero error bound).
    pub fn exact(value: f64) -> Self {
        ApproxValue::new(TwoFloat::from(value), 0.0)
    }

    /// Attaches a truncation tail to a computed partial sum. The tail
    /// over-estimate is doubled — a fixed multiplier that leaves the
    /// rounding of the tail formula and of the double-double accumulation
    /// far below the reported bound, so truncation always dominates — and
    /// a floor proportional to the value covers rounding even when the
    /// tail itself is negligible.
    fn with_tail(value: TwoFloat, tail: f64) -> Self {
        let slack = value.hi().abs() * 1e-28 + 1e-300;
        ApproxValue::new(value, tail * 2.0 + slack)
    }

    pub fn value(&self) -> TwoFloat {
        self.value
    }

    /// Leading component of the double-double value (nearest `f64`).
    pub fn value_f64(&self) -> f64 {
        self.value.hi()
    }

    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn add(&self, other: &ApproxValue) -> ApproxValue {
        let value = self.value + other.value;
        let slack = value.hi().abs() * 1e-30 + 1e-300;
        ApproxValue::new(value, self.error_bound + other.error_bound + slack)
    }

    pub fn sub(&self, other: &ApproxValue) -> ApproxValue {
        let value = self.value - other.value;
        let slack = value.hi().abs() * 1e-30 + 1e-300;
        ApproxValue::new(value, self.error_bound + other.error_bound + slack)
    }

    pub fn scale(&self, by: &BigRational) -> ApproxValue {
        let factor = rational_to_dd(by);
        let value = self.value * factor;
        let slack = value.hi().abs() * 1e-30 + 1e-300;
        let scaled_bound = self.error_bound * factor.hi().abs() * (1.0 + 1e-15);
        ApproxValue::new(value, scaled_bound + slack)
    }

    /// Whether the two approximations are consistent with describing the
    /// same exact number: `|v₁ − v₂| ≤ b₁ + b₂`.
    pub fn agrees_with(&self, other: &ApproxValue) -> bool {
        let diff = (self.value - other.value).abs();
        diff.hi() <= (self.error_bound + other.error_bound) * (1.0 + 1e-12) + 1e-300
    }

    /// Whether the approximated magnitude is at most `tol`. Used for
    /// "this relation evaluates to zero within tolerance" checks.
    pub fn magnitude_at_most(&self, tol: f64) -> bool {
        self.value.abs().hi() <= tol
    }

    /// Fixed-point decimal rendering of the double-double value with
    /// `frac_digits` digits after the point. The rendering is exact for
    /// the stored value; how many digits are meaningful is governed by
    /// `error_bound`.
    pub fn decimal(&self, frac_digits: usize) -> String {
        format_decimal(&dd_to_rational(self.value), frac_digits)
    }
}

impl std::fmt::Display for ApproxValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ± {:e}", self.decimal(32), self.error_bound)
    }
}

/// `1/y` to full double-double accuracy: an `f64` seed plus one Newton
/// step carried out with correctly-rounded primitives. `TwoFloat`'s own
/// division computes its Newton residual with a plain rounded multiply
/// instead of an fma, which zeroes out the low word — so it is not used
/// anywhere in this module.
fn dd_recip(y: TwoFloat) -> TwoFloat {
    let x0 = y.hi().recip();
    let e = 1.0 - y * x0;
    x0 + e * x0
}

/// `m^(-k)` in double-double; `m ≥ 1` fits in 53 bits here.
fn powneg(m: u64, k: u32) -> TwoFloat {
    dd_recip(TwoFloat::from(m as f64).powi(k as i32))
}

/// Double-double approximation of a rational, accurate to ~1 ulp of the
/// 106-bit format: leading part from `to_f64`, trailing part from the
/// exactly-computed residue.
fn rational_to_dd(r: &BigRational) -> TwoFloat {
    let hi = r.to_f64().expect("rational convertible to f64");
    assert!(hi.is_finite(), "rational out of f64 range");
    let residue = r - rat_from_f64(hi);
    let lo = residue.to_f64().unwrap_or(0.0);
    TwoFloat::new_add(hi, lo)
}

/// Exact rational equal to the stored double-double value.
fn dd_to_rational(v: TwoFloat) -> BigRational {
    rat_from_f64(v.hi()) + rat_from_f64(v.lo())
}

/// `f64` over-estimate of `Σ_{N > M} (1 + ln N)^a / N^k`, by rounding the
/// exact rational bound upward.
pub(crate) fn log_power_tail_f64(a: u32, k: u32, m: u64) -> Result<f64> {
    let m32 = u32::try_from(m).map_err(|_| Error::TruncationTooLarge(MAX_TRUNCATION))?;
    let exact = log_power_tail_rational(a, k, m32)?;
    Ok(exact.to_f64().expect("tail bound fits in f64") * (1.0 + 1e-9))
}

fn check_truncation(m: u64) -> Result<usize> {
    if m == 0 {
        return Err(Error::TruncationTooSmall(1));
    }
    if m > MAX_TRUNCATION {
        return Err(Error::TruncationTooLarge(MAX_TRUNCATION));
    }
    Ok(m as usize)
}

/// `out[x] = Σ_{x = m₁ > m₂ > … > m_n ≥ 1} Π mᵢ^(-kᵢ)` for `x ≤ m`
/// (the outermost variable pinned to `x`); `out[0] = 0`.
///
/// One array, two passes per level: a prefix sum turns "pinned top"
/// into "top at most", then the next variable is pinned strictly above.
fn pinned_top_sums(parts: &[u32], m: usize) -> Vec<TwoFloat> {
    let zero = TwoFloat::from(0.0);
    let mut acc = vec![zero; m + 1];
    let n = parts.len();
    for x in 1..=m {
        acc[x] = powneg(x as u64, parts[n - 1]);
    }
    for &kj in parts[..n - 1].iter().rev() {
        for x in 1..=m {
            let prev = acc[x - 1];
            acc[x] += prev;
        }
        for x in (1..=m).rev() {
            acc[x] = powneg(x as u64, kj) * acc[x - 1];
        }
    }
    acc
}

/// `out[x] = Σ_{m ≥ l₁ > … > l_a = x} Π lᵢ^(-pᵢ)` (the innermost variable
/// pinned to `x`, all variables at most `m`); `out[0] = 0`.
fn pinned_bottom_sums(parts: &[u32], m: usize) -> Vec<TwoFloat> {
    let zero = TwoFloat::from(0.0);
    let mut acc = vec![zero; m + 1];
    for x in 1..=m {
        acc[x] = powneg(x as u64, parts[0]);
    }
    for &pj in &parts[1..] {
        let mut above = zero;
        for x in (1..=m).rev() {
            let old = acc[x];
            acc[x] = powneg(x as u64, pj) * above;
            above += old;
        }
    }
    acc
}

/// Evaluates `ζ(k) = Σ_{m₁ > … > m_n ≥ 1} Π mᵢ^(-kᵢ)` by summing all
/// chains with `m₁ ≤ m`. The tail `Σ_{m₁ > m}` is bounded using
/// `H_{m₁}^(n-1) ≤ (1 + ln m₁)^(n-1)` for the inner variables.
///
/// `ζ` of the empty index is exactly 1. Non-admissible indices diverge
/// and are rejected, as are truncations too small for the tail bound's
/// monotonicity requirement or larger than [`MAX_TRUNCATION`].
pub fn mzv_eval(k: &Index, m: u64) -> Result<ApproxValue> {
    if k.is_empty() {
        return Ok(ApproxValue::exact(1.0));
    }
    if !k.is_admissible() {
        return Err(Error::Divergent(
            "ζ(k) converges only when the leading part is at least 2".into(),
        ));
    }
    let m_us = check_truncation(m)?;
    let tail = log_power_tail_f64(k.depth() as u32 - 1, k.parts()[0], m)?;
    let mut value = TwoFloat::from(0.0);
    for term in pinned_top_sums(k.parts(), m_us) {
        value += term;
    }
    Ok(ApproxValue::with_tail(value, tail))
}

/// Evaluates a finite `ζ`-combination by evaluating each term at the same
/// truncation and accumulating `Σ coeff · value` with
/// `Σ |coeff| · bound` as the error bound. Terms are distributed over
/// [`worker_count`] threads; the reduction order is fixed by the term
/// order, so results are bit-identical regardless of thread count.
pub fn combination_eval(c: &ZetaCombination, m: u64) -> Result<ApproxValue> {
    let terms: Vec<(&Index, &BigRational)> = c.terms().collect();
    let evals = map_indexed(terms.len(), worker_count(), |i| mzv_eval(terms[i].0, m));
    let mut total = ApproxValue::exact(0.0);
    for (i, eval) in evals.into_iter().enumerate() {
        total = total.add(&eval?.scale(terms[i].1));
    }
    Ok(total)
}

/// Upper bound for `ζ(s)`, `s > 1`: `1 + 1/(s-1)` by integral comparison.
fn zeta_upper(s: f64) -> f64 {
    1.0 + 1.0 / (s - 1.0)
}

/// Evaluates the Mordell–Tornheim sum
/// `ζ_MT(k₁,…,k_r; k) = Σ_{m₁,…,m_r ≥ 1} Π mᵢ^(-kᵢ) · (m₁+…+m_r)^(-k)`
/// over the box `mᵢ ≤ m`, via iterated convolution over the total
/// `s = m₁+…+m_r` (cost `O(r² m²)` double-double operations).
///
/// Truncation error: the region outside the box is covered by the union
/// of the `r` half-spaces `mᵢ > m`, and on each one the other variables
/// are released to full sums bounded by `ζ(kⱼ + 1/(r-1))`, giving
/// `Σᵢ Πⱼ≠ᵢ ζ(kⱼ + 1/(r-1)) · m^(2-kᵢ-k) / (kᵢ+k-2)`
/// (for `r = 1` simply `m^(1-k₁-k) / (k₁+k-1)`). The split of the weight
/// `k ≥ 2` onto the axes requires exactly that hypothesis, so smaller `k`
/// is rejected even where the series itself converges.
pub fn mt_series_eval(ks: &Index, k: u32, m: u64) -> Result<ApproxValue> {
    if ks.is_empty() {
        return Err(Error::EmptyIndex);
    }
    if k < 2 {
        return Err(Error::Divergent(
            "the Mordell–Tornheim tail bound needs k ≥ 2".into(),
        ));
    }
    let m_us = check_truncation(m)?;
    let parts = ks.parts();
    let r = parts.len();

    // f[s] = Σ over (m₁,…,m_j) in the box with m₁+…+m_j = s
    let zero = TwoFloat::from(0.0);
    let mut f = vec![zero; m_us + 1];
    for s in 1..=m_us {
        f[s] = powneg(s as u64, parts[0]);
    }
    for (j, &kj) in parts.iter().enumerate().skip(1) {
        let mut next = vec![zero; (j + 1) * m_us + 1];
        for (s, &fs) in f.iter().enumerate() {
            if fs == 0.0 {
                continue;
            }
            for v in 1..=m_us {
                next[s + v] += fs * powneg(v as u64, kj);
            }
        }
        f = next;
    }
    let mut value = zero;
    for (s, &fs) in f.iter().enumerate().skip(r) {
        value += fs * powneg(s as u64, k);
    }

    let mf = m as f64;
    let tail = if r == 1 {
        mf.powi(1 - (parts[0] + k) as i32) / ((parts[0] + k - 1) as f64)
    } else {
        let bump = 1.0 / (r as f64 - 1.0);
        let mut total = 0.0;
        for i in 0..r {
            let mut others = 1.0;
            for (j, &kj) in parts.iter().enumerate() {
                if j != i {
                    others *= zeta_upper(kj as f64 + bump);
                }
            }
            total += others * mf.powi(2 - (parts[i] + k) as i32)
                / ((parts[i] + k - 2) as f64);
        }
        total
    };
    Ok(ApproxValue::with_tail(value, tail))
}

/// Evaluates the Komori–Matsumoto–Tsumura two-branch sum
/// `ζ_KMT(p; q; r) = Σ Π lᵢ^(-pᵢ) Π mⱼ^(-qⱼ) Π nⱼ^(-rⱼ)`
/// over strictly decreasing chains `l₁ > … > l_a`, `m₁ > … > m_b ≥ 1`,
/// `n₁ > … > n_c ≥ 1` coupled by `l_a > m₁ + n₁`, truncated to the box
/// where every variable is at most `m`.
///
/// Computed as branch sums pinned at `m₁ = v` and `n₁ = v`, convolved
/// over `w = m₁ + n₁`, against suffix sums of the `l`-chain pinned at
/// `l_a = x` (cost `O(m²)`). An empty `q` or `r` removes that branch
/// (its pinned sum degenerates to a unit mass at 0); an empty `p` is
/// rejected here because the series then factors as `ζ(q)·ζ(r)` with no
/// coupling — build that product directly instead.
///
/// Truncation error: any escape from the box forces `l₁ > m`, each inner
/// `l` contributes a harmonic factor and each branch a full harmonic sum
/// below `l₁`, so the tail is at most
/// `Σ_{l₁ > m} (1 + ln l₁)^(a-1+b+c) / l₁^(p₁)`, which needs `p₁ ≥ 2`.
pub fn kmt_series_eval(p: &Index, q: &Index, r: &Index, m: u64) -> Result<ApproxValue> {
    if p.is_empty() {
        return Err(Error::EmptyIndex);
    }
    if p.parts()[0] < 2 {
        return Err(Error::Divergent(
            "the outer chain needs its leading exponent at least 2".into(),
        ));
    }
    let m_us = check_truncation(m)?;
    let depth_sum = p.depth() as u32 - 1 + q.depth() as u32 + r.depth() as u32;
    let tail = log_power_tail_f64(depth_sum, p.parts()[0], m)?;

    let one = TwoFloat::from(1.0);
    let branch = |idx: &Index| -> Vec<TwoFloat> {
        if idx.is_empty() {
            vec![one]
        } else {
            pinned_top_sums(idx.parts(), m_us)
        }
    };
    let bq = branch(q);
    let br = branch(r);

    // suffix[x] = Σ_{y ≥ x} (l-chains with l_a = y), so the coupling
    // l_a > w reads suffix[w + 1]
    let mut suffix = pinned_bottom_sums(p.parts(), m_us);
    for x in (1..m_us).rev() {
        let next = suffix[x + 1];
        suffix[x] += next;
    }

    let zero = TwoFloat::from(0.0);
    let mut value = zero;
    for w in 0..m_us {
        let mut conv = zero;
        let lo = (w + 1).saturating_sub(br.len());
        for v in lo..bq.len().min(w + 1) {
            conv += bq[v] * br[w - v];
        }
        if conv != 0.0 {
            value += conv * suffix[w + 1];
        }
    }
    Ok(ApproxValue::with_tail(value, tail))
}

/// Number of worker threads for batch evaluation: the `MZV_WORKERS`
/// environment variable when set to a positive integer, otherwise 1.
pub fn worker_count() -> usize {
    std::env::var("MZV_WORKERS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Applies `f` to `0..count` across `workers` threads and returns the
/// results in input order — the output is independent of scheduling.
pub(crate) fn map_indexed<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if workers <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(count) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let value = f(i);
                *slots[i].lock().unwrap() = Some(value);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every index visited"))
        .collect()
}
