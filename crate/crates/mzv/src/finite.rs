//! Finite multiple harmonic sums, their binomial duality, and the exact
//! zig-zag integral representation.
//!
//! The central object is the finite sum with the outer variable pinned:
//!
//! ```text
//! s_k(N) = Σ_{N = m1 ≥ m2 ≥ ... ≥ mn ≥ 1}  1 / (m1^k1 · m2^k2 · ... · mn^kn)
//! ```
//!
//! Two facts about these sums are implemented and tested here. First the
//! duality: the binomial transform `Σ_i (-1)^i C(N-1, i) s_k(i+1)` equals
//! `s_{k*}(N)` for the transpose index `k*`. Second the integral
//! representation: `s_k(N)` equals an iterated integral over the zig-zag
//! region `Δ(k)`, evaluated exactly here by polynomial recurrences.

use std::collections::BTreeMap;

use num::integer::binomial;
use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::index::Index;
use crate::rat::{rat_from_f64, rat_u, recip_pow};

/// `s_k(N)`, exact. Requires a nonempty index and `N ≥ 1`.
pub fn harmonic_sum(k: &Index, n: u32) -> Result<BigRational> {
    let mut values = harmonic_sums_up_to(k, n)?;
    Ok(values.pop().expect("n >= 1 was checked"))
}

/// The whole prefix `s_k(1), ..., s_k(max)` in one pass; entry `i` holds
/// `s_k(i+1)`. Runs in `O(depth · max)` rational operations.
pub fn harmonic_sums_up_to(k: &Index, max: u32) -> Result<Vec<BigRational>> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    if max == 0 {
        return Err(Error::TruncationTooSmall(1));
    }
    let parts = k.parts();
    let max = max as usize;
    // inner[m-1] is the sum over weakly descending chains starting at a
    // variable ≤ m for the parts after the first; updated level by level
    // from the innermost variable outwards via running prefix sums.
    let mut inner = vec![BigRational::one(); max];
    for &exponent in parts.iter().skip(1).rev() {
        let mut acc = BigRational::zero();
        for (m, entry) in inner.iter_mut().enumerate() {
            acc += recip_pow(m as u64 + 1, exponent) * &*entry;
            *entry = acc.clone();
        }
    }
    Ok(inner
        .into_iter()
        .enumerate()
        .map(|(m, t)| recip_pow(m as u64 + 1, parts[0]) * t)
        .collect())
}

/// The binomial-transform side of the duality:
/// `Σ_{i=0}^{N-1} (-1)^i C(N-1, i) s_k(i+1)`, which equals
/// `s_{k*}(N)` for the transpose `k*`.
pub fn duality_lhs(k: &Index, n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::TruncationTooSmall(1));
    }
    let prefix = harmonic_sums_up_to(k, n)?;
    let mut total = BigRational::zero();
    for (i, s) in prefix.iter().enumerate() {
        let c = binomial(BigInt::from(n - 1), BigInt::from(i));
        let term = BigRational::from_integer(c) * s;
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// A polynomial in one variable with exact rational coefficients, sparse by
/// degree. Supports exactly the operations the zig-zag integrator needs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalPolynomial {
    coeffs: BTreeMap<u32, BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(degree: u32, coeff: BigRational) -> Self {
        let mut p = Self::zero();
        p.insert(degree, coeff);
        p
    }

    fn insert(&mut self, degree: u32, coeff: BigRational) {
        if !coeff.is_zero() {
            self.coeffs.insert(degree, coeff);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coefficient(&self, degree: u32) -> BigRational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `p(1)`, the sum of the coefficients.
    pub fn eval_one(&self) -> BigRational {
        self.coeffs.values().sum()
    }

    /// `p(t) / t`; `None` if the constant term is nonzero.
    pub fn div_t(&self) -> Option<Self> {
        if self.coeffs.contains_key(&0) {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&d, c)| (d - 1, c.clone()))
            .collect();
        Some(RationalPolynomial { coeffs })
    }

    /// `p(t) / (1 - t)` by synthetic division; `None` unless `p(1) = 0`.
    pub fn div_one_minus_t(&self) -> Option<Self> {
        let Some(top) = self.degree() else {
            return Some(Self::zero());
        };
        let mut quotient = Self::zero();
        let mut running = BigRational::zero();
        for d in 0..=top {
            running += self.coefficient(d);
            if d < top {
                quotient.insert(d, running.clone());
            }
        }
        // the last running sum is p(1), which must vanish for exactness
        running.is_zero().then_some(quotient)
    }

    /// `∫_0^u p(t) dt` as a polynomial in `u`.
    pub fn integrate_from_zero(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&d, c)| (d + 1, c / rat_u(d as u64 + 1)))
            .collect();
        RationalPolynomial { coeffs }
    }

    /// `∫_u^1 p(t) dt` as a polynomial in `u`.
    pub fn integrate_to_one(&self) -> Self {
        let mut result = Self::zero();
        let mut constant = BigRational::zero();
        for (&d, c) in &self.coeffs {
            let piece = c / rat_u(d as u64 + 1);
            constant += &piece;
            result.insert(d + 1, -piece);
        }
        result.insert(0, constant);
        result
    }

    /// `∫_0^1 p(t) dt`.
    pub fn integral_01(&self) -> BigRational {
        self.coeffs
            .iter()
            .map(|(&d, c)| c / rat_u(d as u64 + 1))
            .sum()
    }
}

/// Evaluates the zig-zag iterated integral for `s_k(N)` exactly:
/// `t1` carries `t1^(N-1) dt1`, the variable `t_j` for `j ≥ 2` carries
/// `dt/(1-t)` or `dt/t` according to the letter map `δ(j)`, and consecutive
/// variables satisfy `t_j > t_(j+1)` exactly when `j ∈ J(k)`. Integration
/// runs from `t1` outwards, each step a polynomial recurrence.
pub fn zigzag_integral_exact(k: &Index, n: u32) -> Result<BigRational> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    if n == 0 {
        return Err(Error::TruncationTooSmall(1));
    }
    let w = k.weight();
    let j_set = k.j_set()?;
    let delta = k.delta_map()?;
    let mut p = RationalPolynomial::monomial(n - 1, BigRational::one());
    for j in 1..=w {
        if j > 1 {
            // attach the form of t_j; the two divisions are exact because a
            // descent step leaves p(1) = 0 and an ascent step leaves no
            // constant term, matching which letter follows which step
            p = if delta[j as usize - 1] == 1 {
                p.div_one_minus_t()
                    .expect("dt/(1-t) always follows a descent")
            } else {
                p.div_t().expect("dt/t always follows an ascent")
            };
        }
        if j == w {
            return Ok(p.integral_01());
        }
        p = if j_set.contains(j) {
            p.integrate_to_one()
        } else {
            p.integrate_from_zero()
        };
    }
    unreachable!("nonempty index has weight >= 1")
}

/// Partial sum of `ζ*(k) = Σ_{N ≥ 1} s_k(N)` up to `N = M`, together with an
/// exact rational over-estimate of the dropped tail.
///
/// The tail bound comes from `s_k(N) ≤ (1 + ln N)^(n-1) / N^(k1)` and
/// integral comparison; it is valid (and returned) only when the integrand
/// is already decreasing at `M`, i.e. when `(1 + ln M) · k1 > n - 1` —
/// otherwise the truncation is rejected as too small. Requires `k1 ≥ 2`;
/// for `k1 = 1` the series diverges.
pub fn truncated_zeta_star(k: &Index, m: u32) -> Result<(BigRational, BigRational)> {
    if k.is_empty() {
        // ζ*(∅) is the empty sum convention: exactly 1, no tail.
        return Ok((BigRational::one(), BigRational::zero()));
    }
    let k1 = k.parts()[0];
    if k1 < 2 {
        return Err(Error::Divergent(
            "star value needs its first part to be at least 2".into(),
        ));
    }
    if m == 0 {
        return Err(Error::TruncationTooSmall(1));
    }
    let value: BigRational = harmonic_sums_up_to(k, m)?.into_iter().sum();
    let a = k.depth() as u32 - 1;
    let tail = log_power_tail_rational(a, k1, m)?;
    Ok((value, tail))
}

/// Exact rational over-estimate of `Σ_{N > M} (1 + ln N)^a / N^k` for
/// `k ≥ 2`, via the closed form
/// `M^(1-k)/(k-1) · Σ_{j=0}^{a} a!/(a-j)! · L^(a-j) / (k-1)^j`
/// with `L` a rational upper bound on `1 + ln M`.
pub(crate) fn log_power_tail_rational(a: u32, k: u32, m: u32) -> Result<BigRational> {
    debug_assert!(k >= 2 && m >= 1);
    // rational bracket around ln M: f64 ln is correct to < 1 ulp, so a
    // relative margin of 1e-12 on either side safely contains the truth
    let ln_m = (m as f64).ln();
    let upper = BigRational::one() + rat_from_f64(ln_m + ln_m.abs() * 1e-12 + 1e-15);
    let lower = BigRational::one() + rat_from_f64(ln_m - ln_m.abs() * 1e-12 - 1e-15);
    if lower * rat_u(k as u64) <= rat_u(a as u64) {
        // integrand not yet decreasing: the comparison with the integral
        // would be unsound, so demand a bigger truncation
        let needed = ((a as f64 / k as f64 - 1.0).exp().ceil() as u64).max(1) + 1;
        return Err(Error::TruncationTooSmall(needed));
    }
    let c = rat_u(k as u64 - 1);
    let mut falling = BigRational::one(); // a! / (a-j)!
    let mut c_pow = BigRational::one(); // (k-1)^j
    let mut total = BigRational::zero();
    for j in 0..=a {
        if j > 0 {
            falling *= rat_u((a - j + 1) as u64);
            c_pow *= &c;
        }
        total += &falling * upper.clone().pow((a - j) as i32) / &c_pow;
    }
    let m_factor = BigRational::new(BigInt::one(), BigInt::from(m).pow(k - 1));
    Ok(m_factor / c * total)
}
