use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Polynomial;

/// Canonical Sturm sequence `p, p', -rem(p, p'), ...` ending at the last
/// nonzero remainder.
pub fn sturm_chain(p: &Polynomial) -> Vec<Polynomial> {
    let mut chain = vec![p.clone()];
    if p.is_zero() {
        return chain;
    }
    let mut prev = p.clone();
    let mut cur = p.derivative();
    while !cur.is_zero() {
        let (_, r) = prev.div_rem(&cur);
        chain.push(cur.clone());
        prev = cur;
        cur = -r;
    }
    chain
}

fn sign_variations(chain: &[Polynomial], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `p` in the open interval `(a, b)`.
///
/// The count runs on the square-free part of `p`. Roots sitting exactly on an
/// endpoint are divided out first so the chain is never evaluated at a root.
pub fn sturm_roots_in_open_interval(p: &Polynomial, a: &BigRational, b: &BigRational) -> usize {
    assert!(!p.is_zero(), "root count of the zero polynomial");
    assert!(a < b, "empty interval");
    let mut sf = p.square_free_part();
    for end in [a, b] {
        if sf.eval(end).is_zero() {
            let factor = Polynomial::linear(-end.clone(), BigRational::one());
            sf = sf.div_rem(&factor).0;
        }
    }
    if sf.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(&sf);
    sign_variations(&chain, a) - sign_variations(&chain, b)
}

/// True when `p` has no root in the closed interval `[a, b]` and is positive
/// there.
pub(crate) fn positive_on_closed(p: &Polynomial, a: &BigRational, b: &BigRational) -> bool {
    if p.is_zero() || !p.eval(a).is_positive() || !p.eval(b).is_positive() {
        return false;
    }
    sturm_roots_in_open_interval(p, a, b) == 0
}

/// True when `p` has no root in the open interval `(a, b)` and is positive at
/// its midpoint, hence on the whole open interval.
pub(crate) fn positive_on_open(p: &Polynomial, a: &BigRational, b: &BigRational) -> bool {
    if p.is_zero() {
        return false;
    }
    let mid = (a + b) / BigRational::from_integer(2.into());
    sturm_roots_in_open_interval(p, a, b) == 0 && p.eval(&mid).is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn basic_counts() {
        let (a, b) = (int(-1), int(1));
        assert_eq!(sturm_roots_in_open_interval(&p(&[0, 1]), &a, &b), 1);
        assert_eq!(sturm_roots_in_open_interval(&p(&[1, 0, 1]), &a, &b), 0);
        // roots at the endpoints are excluded
        assert_eq!(sturm_roots_in_open_interval(&p(&[1, 0, -1]), &a, &b), 0);
        // repeated roots count once
        let rep = p(&[0, 1]).pow(3) * p(&[-1, 2]).pow(2);
        assert_eq!(sturm_roots_in_open_interval(&rep, &a, &b), 2);
        assert_eq!(
            sturm_roots_in_open_interval(&Polynomial::constant(int(5)), &a, &b),
            0
        );
    }

    #[test]
    fn positivity_helpers() {
        let (a, b) = (int(-1), int(1));
        assert!(positive_on_closed(&p(&[2, 1]), &a, &b));
        assert!(!positive_on_closed(&p(&[1, 1]), &a, &b));
        assert!(positive_on_open(&p(&[1, 0, -1]), &a, &b));
        assert!(!positive_on_open(&p(&[-1, 0, 1]), &a, &b));
    }

    /// Brute-force sign-change scan on a rational grid.
    fn scan_roots(poly: &Polynomial, a: &BigRational, b: &BigRational, samples: i64) -> usize {
        let step = (b - a) / BigRational::from_integer(samples.into());
        let mut count = 0;
        let mut prev = poly.sign_at(a);
        for i in 1..samples {
            let x = a + &step * BigRational::from_integer(i.into());
            let s = poly.sign_at(&x);
            if s == 0 || (prev != 0 && s != prev) {
                count += 1;
            }
            if s != 0 {
                prev = s;
            }
        }
        count
    }

    // Roots are placed at odd multiples of 1/(2 * 997), never on the grid of
    // step 1/5000 used by the scan, and at least 1/997 apart.
    fn rooted_poly() -> impl Strategy<Value = (Polynomial, usize)> {
        prop::collection::btree_set(-498i64..498, 0..6)
            .prop_flat_map(|set| {
                let roots: Vec<i64> = set.into_iter().collect();
                let n = roots.len();
                (Just(roots), prop::collection::vec(1u32..3, n), 0usize..3)
            })
            .prop_map(|(roots, mults, extra)| {
                let mut poly = Polynomial::one();
                for (r, m) in roots.iter().zip(&mults) {
                    let root = rat(2 * r + 1, 2 * 997);
                    poly = poly * Polynomial::linear(-root, int(1)).pow(*m);
                }
                // factors with no real roots or roots outside (-1, 1)
                for j in 0..extra {
                    poly = poly * p(&[1 + j as i64, 0, 1]);
                }
                poly = poly * p(&[3, 1]);
                (poly, roots.len())
            })
            .prop_filter("degree bound", |(poly, _)| poly.degree().unwrap() <= 12)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sturm_agrees_with_sign_scan((poly, expected) in rooted_poly()) {
            let (a, b) = (int(-1), int(1));
            let sturm = sturm_roots_in_open_interval(&poly, &a, &b);
            prop_assert_eq!(sturm, expected);
            prop_assert_eq!(scan_roots(&poly.square_free_part(), &a, &b, 10_000), expected);
        }
    }
}
