//! Exact rational scalars and dense univariate polynomials over Q.
//!
//! Every quantity in the classification pipeline is a [`BigRational`], which
//! `num-rational` keeps in lowest terms with a positive denominator after
//! every operation.

mod poly;
pub(crate) mod sturm;

pub use num_rational::BigRational;
pub use poly::Polynomial;
pub use sturm::{sturm_chain, sturm_roots_in_open_interval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Beta function at positive integers, `B(p, q) = (p-1)!(q-1)!/(p+q-1)!`.
pub fn beta_int(p: u64, q: u64) -> BigRational {
    assert!(p >= 1 && q >= 1, "beta_int needs positive arguments");
    BigRational::new(factorial(p - 1) * factorial(q - 1), factorial(p + q - 1))
}

/// `base^e` for a rational base.
pub fn rpow(base: &BigRational, e: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

pub fn two_pow(e: u64) -> BigRational {
    BigRational::from_integer(BigInt::one() << e)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Decimal points are rejected so that the
/// value round-trips exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational \"p/q\": {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Fixed-point decimal rendering of `r` rounded half away from zero to
/// `digits` places after the point. Presentation only.
pub fn to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * BigRational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem.abs() * 2u32;
    let mut q = q;
    if twice >= *scaled.denom() {
        if scaled.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    let negative = q.is_negative();
    let mag = q.abs().to_string();
    let mag = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int_part, frac) = mag.split_at(mag.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Scientific rendering `d.ddd…e±N` with `digits` places in the mantissa.
/// Presentation only.
pub fn to_scientific(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return format!("{}e0", to_decimal(r, digits));
    }
    let abs = r.abs();
    // log10(2) ~ 0.30103; refine the estimate by at most a couple of steps
    let mut e = (log2_abs(r).unwrap_or(0) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow10 = |e: i64| -> BigRational {
        let p = BigRational::from_integer(BigInt::from(10u32).pow(e.unsigned_abs() as u32));
        if e < 0 {
            p.recip()
        } else {
            p
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }
    let mut mantissa = to_decimal(&(r / pow10(e)), digits);
    // rounding may carry into a new leading digit
    if mantissa.trim_start_matches('-').starts_with("10") {
        e += 1;
        mantissa = to_decimal(&(r / pow10(e)), digits);
    }
    format!("{mantissa}e{e}")
}

/// Approximate base-2 logarithm of `|r|`, accurate to within about one.
/// Returns `None` for zero.
pub fn log2_abs(r: &BigRational) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    Some(r.numer().bits() as i64 - r.denom().bits() as i64)
}

/// Rounds `r` to the nearest multiple of `2^-bits`.
pub fn round_to_bits(r: &BigRational, bits: u64) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = r * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

/// Lossy conversion for diagnostics and plotting.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_small_values() {
        assert_eq!(beta_int(1, 1), int(1));
        assert_eq!(beta_int(2, 3), rat(1, 12));
    }

    #[test]
    fn beta_matches_integration_oracle() {
        // B(p, q) = int_0^1 t^(p-1) (1-t)^(q-1) dt
        for p in 1..=8u64 {
            for q in 1..=8u64 {
                let t = Polynomial::x();
                let one_minus_t = Polynomial::from_ints(&[1, -1]);
                let integrand = t.pow(p as u32 - 1) * one_minus_t.pow(q as u32 - 1);
                let oracle = integrand.definite_integral(&int(0), &int(1));
                assert_eq!(beta_int(p, q), oracle, "B({p},{q})");
            }
        }
    }

    #[test]
    fn beta_symmetry_and_recurrence() {
        for p in 1..=10u64 {
            for q in 1..=10u64 {
                assert_eq!(beta_int(p, q), beta_int(q, p));
                let rhs = beta_int(p, q) * rat(p as i64, (p + q) as i64);
                assert_eq!(beta_int(p + 1, q), rhs);
            }
        }
    }

    #[test]
    fn binomial_row() {
        let row: Vec<_> = (0..=5).map(|k| binomial(5, k)).collect();
        let expected: Vec<BigInt> = [1, 5, 10, 10, 5, 1]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(row, expected);
        assert_eq!(binomial(3, 4), BigInt::zero());
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("35/43").unwrap(), rat(35, 43));
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(35, 43), 6), "0.813953");
        assert_eq!(to_decimal(&rat(-2, 3), 4), "-0.6667");
        assert_eq!(to_decimal(&rat(5, 2), 0), "3");
        assert_eq!(to_decimal(&int(12), 2), "12.00");
        assert_eq!(to_decimal(&rat(-1, 1000), 2), "0.00");
        assert_eq!(to_scientific(&rat(35, 43), 3), "8.140e-1");
        assert_eq!(to_scientific(&rat(-12345, 1), 2), "-1.23e4");
        assert_eq!(to_scientific(&rat(1, 3_000_000_000), 1), "3.3e-10");
        assert_eq!(to_scientific(&rat(9999, 1000), 2), "1.00e1");
        assert_eq!(to_scientific(&int(0), 2), "0.00e0");
    }

    #[test]
    fn rounding_to_bits() {
        let r = round_to_bits(&rat(1, 3), 8);
        assert_eq!(r, rat(85, 256));
        assert_eq!(round_to_bits(&rat(3, 4), 2), rat(3, 4));
    }
}
