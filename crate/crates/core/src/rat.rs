//! Exact rational probabilities.
//!
//! Every probability in the crate is a [`Rat`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. Text I/O always
//! emits `n/d`; parsing accepts `n/d`, integers and decimals (optionally with
//! an exponent), converting decimals exactly (`"0.25"` is `1/4`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number.
pub type Rat = BigRational;

/// Default tolerance for approximate decimal conversion (`10^-9`).
pub fn default_tolerance() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats as `n/d`, including integers (`1/1`, `0/1`).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `n/d`, an integer, or a decimal such as `0.125` or `2.5e-3`.
pub fn parse_rat(text: &str) -> Result<Rat, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid number `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Rat::new(n, d));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rat::from_integer(digits);
    if scale >= 0 {
        value *= Rat::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rat::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Parses like [`parse_rat`], but a decimal input is replaced by the simplest
/// rational within `tolerance` of its exact value (so `0.333333333` becomes
/// `1/3` at tolerance `10^-9`). `n/d` inputs are kept exact.
pub fn parse_rat_approx(text: &str, tolerance: &Rat) -> Result<Rat, Error> {
    let exact = parse_rat(text)?;
    if text.contains('/') {
        return Ok(exact);
    }
    let lo = &exact - tolerance;
    let hi = &exact + tolerance;
    Ok(simplest_between(&lo, &hi))
}

/// Simplest rational (smallest denominator, then smallest numerator magnitude)
/// in the closed interval `[lo, hi]`, found by continued-fraction descent.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if lo.is_positive() {
        simplest_positive(lo, hi)
    } else if hi.is_negative() {
        -simplest_positive(&-hi, &-lo)
    } else {
        Rat::zero()
    }
}

fn simplest_positive(lo: &Rat, hi: &Rat) -> Rat {
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl < hi.floor() {
        return fl + Rat::one();
    }
    // Same integer part: recurse on the reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_positive(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

/// Exact `a/b` for small integers, used by callers building uniform rows.
pub fn fraction(numer: usize, denom: usize) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(r: &Rat) -> Rat {
    r - r.floor()
}
