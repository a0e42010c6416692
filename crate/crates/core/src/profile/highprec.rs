use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::log2_abs;

/// Working precision for the exponential-weight path, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 64;
    pub const MIN_DIGITS: u32 = 16;

    pub fn new(digits: u32) -> Self {
        Precision {
            digits: digits.max(Self::MIN_DIGITS),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary digits carrying at least `digits` decimal digits.
    pub fn bits(&self) -> u64 {
        (self.digits as u64 * 3322).div_ceil(1000)
    }

    pub fn doubled(&self) -> Self {
        Precision::new(self.digits * 2)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(Self::DEFAULT_DIGITS)
    }
}

/// `e^x` for rational `x` with relative error below `2^-bits`.
///
/// Halves the argument below `2^-10`, sums the Taylor series in fixed point
/// and squares back.
pub fn exp_rational(x: &BigRational, bits: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::one();
    }
    if x.is_negative() {
        return exp_rational(&-x, bits).recip();
    }
    let halvings = log2_abs(x).map_or(0, |l| (l + 11).max(0) as u64);
    let prec = bits + halvings + 32;
    let one = BigInt::one() << prec;
    // y = x / 2^halvings in fixed point
    let y = (x.numer() << prec) / (x.denom() << halvings);
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = ((term * &y) >> prec) / k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..halvings {
        sum = (&sum * &sum) >> prec;
    }
    BigRational::new(sum, BigInt::one() << prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, round_to_bits};

    fn close(a: &BigRational, b: &BigRational, rel_bits: u64) -> bool {
        let diff = (a - b).abs();
        let scale = a.abs().max(b.abs());
        diff * (BigRational::from_integer(BigInt::one() << rel_bits)) <= scale
    }

    #[test]
    fn exp_of_zero_and_symmetry() {
        assert_eq!(exp_rational(&int(0), 100), int(1));
        let e = exp_rational(&int(1), 300);
        let inv = exp_rational(&int(-1), 300);
        assert!(close(&(e * inv), &int(1), 290));
    }

    #[test]
    fn exp_matches_reference_digits() {
        // e to 60 digits
        let e60 = crate::exact::parse_rational(
            "2718281828459045235360287471352662497757247093699959574966967/1000000000000000000000000000000000000000000000000000000000000",
        )
        .unwrap();
        let e = exp_rational(&int(1), 220);
        assert!(close(&e, &e60, 195));
    }

    #[test]
    fn exp_is_additive() {
        for (a, b) in [
            (rat(1, 3), rat(5, 7)),
            (int(13), rat(-29, 3)),
            (rat(-1, 1000), int(40)),
        ] {
            let lhs = exp_rational(&(&a + &b), 256);
            let rhs = exp_rational(&a, 256) * exp_rational(&b, 256);
            assert!(close(&lhs, &rhs, 240), "{a} + {b}");
        }
    }

    #[test]
    fn exp_at_large_argument_against_taylor_oracle() {
        // plain exact Taylor sum with a rigorous tail, no argument reduction
        let x = int(50);
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        for k in 1..400 {
            sum += &term;
            term = term * &x / int(k);
        }
        let fast = exp_rational(&x, 200);
        assert!(close(&fast, &round_to_bits(&sum, 300), 190));
    }

    #[test]
    fn precision_bits() {
        assert_eq!(Precision::new(64).bits(), 213);
        assert_eq!(Precision::new(4).digits(), 16);
        assert_eq!(Precision::default().doubled().digits(), 128);
    }
}
