//! Small helpers around `BigRational`.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

pub(crate) fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `1 / m^k` as an exact rational; `m ≥ 1`.
pub(crate) fn recip_pow(m: u64, k: u32) -> BigRational {
    debug_assert!(m >= 1);
    BigRational::new(BigInt::one(), BigInt::from(m).pow(k))
}

/// Exact rational value of a finite float (dyadic, no rounding).
pub(crate) fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Canonical text form `numer/denom`, reduced, denominator positive and
/// always written (so `2` prints as `2/1`).
pub(crate) fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Fixed-point decimal string with `frac_digits` digits after the point,
/// rounded half away from zero.
pub(crate) fn format_decimal(r: &BigRational, frac_digits: usize) -> String {
    use num::Signed;
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let scale = BigInt::from(10).pow(frac_digits as u32);
    let scaled: BigInt = (a.numer() * &scale * 2 + a.denom()) / (a.denom() * 2);
    let digits = scaled.to_string();
    if frac_digits == 0 {
        return format!("{sign}{digits}");
    }
    let padded = if digits.len() <= frac_digits {
        format!("{}{}", "0".repeat(frac_digits + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - frac_digits);
    format!("{sign}{int_part}.{frac_part}")
}

/// Accepts `p/q` or a bare integer `p`.
pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::MalformedRational(s.to_string());
    let mut pieces = s.splitn(2, '/');
    let numer: BigInt = pieces
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let denom: BigInt = match pieces.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}
