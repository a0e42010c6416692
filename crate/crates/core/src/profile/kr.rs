//! Kähler-Ricci solitons: the exponential weight `u(x) = e^{τx}`.
//!
//! Integrals `∫ q(x) e^{τx} dx` of a polynomial `q` are taken in closed form,
//! `e^{τx} R(x)` with `R = Σ_j (-1)^j q^{(j)} / τ^{j+1}`, so the only
//! approximation is `e^{±τ}`. Its precision is chosen from the magnitude of
//! `R(±1)` so the absolute error of the integral stays below the requested
//! bound even when `τ` is small and `R` is huge.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::highprec::{exp_rational, Precision};
use super::sample_grid;
use crate::admissible::AdmissibleManifold;
use crate::classify::futaki_integrand;
use crate::error::{Error, Result};
use crate::exact::{int, log2_abs, parse_rational, round_to_bits, Polynomial};

/// `R` with `(e^{τx} R(x))' = q(x) e^{τx}`. Requires `τ ≠ 0`.
fn exp_primitive_factor(q: &Polynomial, tau: &BigRational) -> Polynomial {
    let inv = tau.recip();
    let mut r = Polynomial::zero();
    let mut deriv = q.clone();
    let mut factor = inv.clone();
    while !deriv.is_zero() {
        r = &r + &deriv.scale(&factor);
        deriv = deriv.derivative();
        factor = -(&factor * &inv);
    }
    r
}

fn bits_of(r: &BigRational) -> u64 {
    log2_abs(r).map_or(0, |l| l.max(0) as u64 + 1)
}

/// `∫_{-1}^{1} q(x) e^{τx} dx` to absolute accuracy about `2^-bits`.
pub fn exp_integral(q: &Polynomial, tau: &BigRational, bits: u64) -> BigRational {
    if tau.is_zero() {
        return q.definite_integral(&int(-1), &int(1));
    }
    let r = exp_primitive_factor(q, tau);
    let (at_hi, at_lo) = (r.eval(&int(1)), r.eval(&int(-1)));
    let magnitude = bits_of(&(at_hi.abs() + at_lo.abs()));
    // e^{|τ|} < 2^{1.4427 |τ|}
    let growth = (tau.abs() * BigRational::new(BigInt::from(14427), BigInt::from(10000)))
        .ceil()
        .to_integer();
    let growth = u64::try_from(growth).unwrap_or(u64::MAX / 4);
    let rel_bits = bits + magnitude + growth + 8;
    let e_pos = exp_rational(tau, rel_bits);
    let e_neg = e_pos.recip();
    round_to_bits(&(e_pos * at_hi - e_neg * at_lo), bits + 8)
}

/// `∫_{-1}^{1} (x - w) e^{τx} p(x) dx`. Exact at `τ = 0`.
pub fn exp_futaki(m: &AdmissibleManifold, tau: &BigRational, precision: Precision) -> BigRational {
    exp_integral(
        &futaki_integrand(m, &Polynomial::one()),
        tau,
        precision.bits() + 16,
    )
}

fn exp_futaki_derivative(m: &AdmissibleManifold, tau: &BigRational, bits: u64) -> BigRational {
    let q = futaki_integrand(m, &Polynomial::one()) * Polynomial::x();
    exp_integral(&q, tau, bits)
}

/// `∫ x e^{τx} p / ∫ e^{τx} p`, the mean of `x` under the tilted density.
pub fn barycenter(m: &AdmissibleManifold, tau: &BigRational, precision: Precision) -> BigRational {
    let p = m.characteristic_polynomial();
    let bits = precision.bits() + 16;
    exp_integral(&(&p * &Polynomial::x()), tau, bits) / exp_integral(&p, tau, bits)
}

#[derive(Clone, Debug)]
pub struct KrConfig {
    pub precision: Precision,
    /// Bound on `|exp_futaki(τ*)|`.
    pub tolerance: BigRational,
    /// Bisection stops once the bracket is narrower than this.
    pub bisection_width: BigRational,
    pub max_iterations: usize,
    /// Points at which the barycentre is sampled across the bracket.
    pub monotonicity_samples: usize,
}

impl Default for KrConfig {
    fn default() -> Self {
        KrConfig {
            precision: Precision::default(),
            tolerance: parse_rational("1/1000000000000000000000000000000").expect("1e-30"),
            bisection_width: BigRational::new(BigInt::one(), BigInt::from(1000)),
            max_iterations: 200,
            monotonicity_samples: 17,
        }
    }
}

impl KrConfig {
    pub fn with_precision(precision: Precision) -> Self {
        KrConfig {
            precision,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct KrSoliton {
    pub tau: BigRational,
    /// `|exp_futaki(τ*)|` at the working precision.
    pub residual: BigRational,
    /// The same residual recomputed at twice the precision.
    pub residual_doubled: BigRational,
    pub bracket: (BigRational, BigRational),
    pub newton_steps: usize,
    pub bisection_steps: usize,
    pub precision: Precision,
}

/// Solves `exp_futaki(m, τ) = 0` by bisection to a narrow bracket followed by
/// bracketed Newton steps.
pub fn solve_kr_soliton(m: &AdmissibleManifold, config: &KrConfig) -> Result<KrSoliton> {
    let precision = config.precision;
    let bits = precision.bits();
    let eval_bits = bits + 16;
    let tau_bits = bits + 32;
    let f = |t: &BigRational| exp_futaki(m, t, precision);

    if f(&BigRational::zero()).is_zero() {
        let zero = BigRational::zero();
        return Ok(KrSoliton {
            tau: zero.clone(),
            residual: zero.clone(),
            residual_doubled: zero.clone(),
            bracket: (zero.clone(), zero),
            newton_steps: 0,
            bisection_steps: 0,
            precision,
        });
    }

    let degree = m.characteristic_polynomial().degree().unwrap_or(0) as i64;
    let half_width = (int(degree + 2) + m.w().abs()) * int(4);
    let (mut lo, mut hi) = (-half_width.clone(), half_width);
    let mut widenings = 0;
    let (mut f_lo, mut f_hi) = (f(&lo), f(&hi));
    while !(f_lo.is_negative() && f_hi.is_positive()) {
        widenings += 1;
        if widenings > 6 {
            return Err(Error::BracketFailure {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        lo *= int(2);
        hi *= int(2);
        f_lo = f(&lo);
        f_hi = f(&hi);
    }

    check_barycenter_monotone(m, &lo, &hi, config)?;

    let mut bisection_steps = 0;
    while &hi - &lo > config.bisection_width {
        let mid = (&lo + &hi) / int(2);
        let f_mid = f(&mid);
        if f_mid.is_zero() {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if f_mid.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
        bisection_steps += 1;
    }

    let step_floor = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let mut tau = (&lo + &hi) / int(2);
    let mut newton_steps = 0;
    loop {
        if newton_steps >= config.max_iterations {
            return Err(Error::NoConvergence(format!(
                "no convergence after {newton_steps} Newton steps, tau = {tau}"
            )));
        }
        newton_steps += 1;
        let value = f(&tau);
        if value.is_zero() {
            break;
        }
        if value.is_negative() {
            lo = tau.clone();
        } else {
            hi = tau.clone();
        }
        let slope = exp_futaki_derivative(m, &tau, eval_bits);
        let newton = if slope.is_positive() {
            Some(round_to_bits(&(&tau - &value / &slope), tau_bits))
        } else {
            None
        };
        let next = match newton {
            Some(t) if t > lo && t < hi => t,
            _ => (&lo + &hi) / int(2),
        };
        let step = (&next - &tau).abs();
        tau = next;
        if step <= &step_floor * tau.abs().max(BigRational::one()) {
            break;
        }
    }

    let residual = f(&tau).abs();
    let residual_doubled = exp_futaki(m, &tau, precision.doubled()).abs();
    if residual >= config.tolerance {
        return Err(Error::NoConvergence(format!(
            "residual {} above tolerance at tau = {tau}",
            crate::exact::to_decimal(&residual, 40)
        )));
    }
    Ok(KrSoliton {
        tau,
        residual,
        residual_doubled,
        bracket: (lo, hi),
        newton_steps,
        bisection_steps,
        precision,
    })
}

/// Samples the barycentre across `[lo, hi]` and insists it increases.
fn check_barycenter_monotone(
    m: &AdmissibleManifold,
    lo: &BigRational,
    hi: &BigRational,
    config: &KrConfig,
) -> Result<()> {
    let n = config.monotonicity_samples.max(2);
    let mut prev: Option<BigRational> = None;
    for i in 0..n {
        let t = lo + (hi - lo) * BigRational::new(BigInt::from(i), BigInt::from(n - 1));
        let b = barycenter(m, &t, config.precision);
        if let Some(p) = &prev {
            if b <= *p {
                return Err(Error::InvariantViolation(format!(
                    "barycenter not increasing near tau = {t}"
                )));
            }
        }
        prev = Some(b);
    }
    Ok(())
}

/// Profile of the Kähler-Ricci soliton with weight `e^{τx}`:
///
/// `Θ(x) = -(d0 + d_inf + 2) (R(x) - e^{-τ(x+1)} R(-1)) / p(x)` with `R` the
/// exponential primitive factor of `(x - w) p`.
#[derive(Clone, Debug)]
pub struct KrProfile {
    tau: BigRational,
    charp: Polynomial,
    primitive: Polynomial,
    scale: BigRational,
    precision: Precision,
}

impl KrProfile {
    pub fn new(m: &AdmissibleManifold, tau: BigRational, precision: Precision) -> Self {
        let q = futaki_integrand(m, &Polynomial::one());
        let primitive = if tau.is_zero() {
            q.antiderivative(&int(-1))
        } else {
            exp_primitive_factor(&q, &tau)
        };
        KrProfile {
            tau,
            charp: m.characteristic_polynomial(),
            primitive,
            scale: -m.fiber_weight(),
            precision,
        }
    }

    pub fn tau(&self) -> &BigRational {
        &self.tau
    }

    /// `Θ(x)` for `x` in `[-1, 1]`; exactly zero at the endpoints.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        if x.abs() >= BigRational::one() {
            return BigRational::zero();
        }
        let px = self.charp.eval(x);
        if self.tau.is_zero() {
            return &self.scale * self.primitive.eval(x) / px;
        }
        let at_lo = self.primitive.eval(&int(-1));
        let target = self.precision.bits() + 16;
        // cancellation near -1 costs about log2(1/p(x)) bits
        let loss = log2_abs(&px).map_or(0, |l| (-l).max(0) as u64);
        let arg = -(&self.tau * (x + BigRational::one()));
        let rel_bits = target + loss + bits_of(&at_lo) + bits_of(&arg) + 8;
        let decay = exp_rational(&arg, rel_bits);
        let bracket = self.primitive.eval(x) - decay * at_lo;
        round_to_bits(&(&self.scale * bracket / px), target)
    }

    pub fn samples(&self, count: usize) -> Vec<(BigRational, BigRational)> {
        sample_grid(count)
            .into_iter()
            .map(|x| {
                let y = self.eval(&x);
                (x, y)
            })
            .collect()
    }
}
