//! Soliton profiles `Θ = F / p` built from a positive weight `u` on `[-1, 1]`.
//!
//! For a weight with vanishing pairing `∫ (x - w) u p dx = 0`, the function
//!
//! ```text
//! F(x) = -(d0 + d_inf + 2) / u(x) · ∫_{-1}^{x} (t - w) u(t) p(t) dt
//! ```
//!
//! solves `(uF)' / (u p) = -(d0 + d_inf + 2)(x - w)` with `F(±1) = 0`. For
//! polynomial weights `Θ` is an exact rational function: the primitive `G`
//! vanishes to order `d0 + 1` at `-1` and `d_inf + 1` at `+1`, so the
//! boundary part of `p` divides it exactly and
//!
//! ```text
//! Θ = -(d0 + d_inf + 2) G / ((1+x)^d0 (1-x)^d_inf)  /  (u · Π (λ_a + ε_a x)^d_a).
//! ```
//!
//! Exponential weights (Kähler-Ricci solitons) are handled numerically in
//! [`kr`].

mod highprec;
pub mod kr;

pub use highprec::{exp_rational, Precision};
pub use kr::{
    barycenter, exp_futaki, exp_integral, solve_kr_soliton, KrConfig, KrProfile, KrSoliton,
};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::admissible::AdmissibleManifold;
use crate::classify::{classify, futaki_integrand};
use crate::error::{Error, Result};
use crate::exact::sturm::{positive_on_closed, positive_on_open};
use crate::exact::{int, sturm_roots_in_open_interval, Polynomial};

/// Positive weight `u` on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    /// `u = 1`, Kähler-Einstein.
    One,
    /// `u(x) = 1 - αx - β`, Mabuchi solitons.
    Affine {
        alpha: BigRational,
        beta: BigRational,
    },
    Poly(Polynomial),
    /// `u(x) = e^{τx}`, Kähler-Ricci solitons.
    Exponential(BigRational),
}

impl Weight {
    /// Exact polynomial form, `None` for exponential weights.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        match self {
            Weight::One => Some(Polynomial::one()),
            Weight::Affine { alpha, beta } => Some(Polynomial::linear(
                BigRational::one() - beta,
                -alpha.clone(),
            )),
            Weight::Poly(p) => Some(p.clone()),
            Weight::Exponential(_) => None,
        }
    }

    /// Positivity on the closed interval. Affine weights are checked at the
    /// endpoints, polynomial ones by Sturm.
    pub fn is_positive(&self) -> bool {
        let (lo, hi) = (int(-1), int(1));
        match self {
            Weight::One | Weight::Exponential(_) => true,
            Weight::Affine { .. } => {
                let u = self.as_polynomial().unwrap_or_default();
                u.eval(&lo).is_positive() && u.eval(&hi).is_positive()
            }
            Weight::Poly(p) => positive_on_closed(p, &lo, &hi),
        }
    }

    /// Exact minimum over `[-1, 1]` for affine and constant weights.
    pub fn min_on_interval(&self) -> Option<BigRational> {
        match self {
            Weight::One => Some(BigRational::one()),
            Weight::Affine { alpha, beta } => Some(BigRational::one() - beta - alpha.abs()),
            _ => None,
        }
    }
}

/// The Mabuchi weight `1 - (αx + β)`; requires `M_X < 1`.
pub fn mabuchi_weight(m: &AdmissibleManifold) -> Result<Weight> {
    let report = classify(m)?;
    if report.mabuchi_constant >= BigRational::one() {
        return Err(Error::NotPositive {
            mabuchi_constant: report.mabuchi_constant.to_string(),
        });
    }
    let p = report.projection;
    if p.alpha.is_zero() && p.beta.is_zero() {
        return Ok(Weight::One);
    }
    Ok(Weight::Affine {
        alpha: p.alpha,
        beta: p.beta,
    })
}

/// Exact rational profile `Θ = numerator / denominator` on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub w: BigRational,
    pub d0: u32,
    pub d_inf: u32,
}

impl Profile {
    /// A bare profile with no manifold attached (`w = 0`, `d0 = d_inf = 0`).
    pub fn from_parts(numerator: Polynomial, denominator: Polynomial) -> Self {
        Profile {
            numerator,
            denominator,
            w: BigRational::zero(),
            d0: 0,
            d_inf: 0,
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.numerator.eval(x) / self.denominator.eval(x)
    }

    pub fn derivative_at(&self, x: &BigRational) -> BigRational {
        let (n, d) = (&self.numerator, &self.denominator);
        let dv = d.eval(x);
        (n.derivative().eval(x) * &dv - n.eval(x) * d.derivative().eval(x)) / (&dv * &dv)
    }

    /// `(x, Θ(x))` at `count` equally spaced points of `[-1, 1]`.
    pub fn samples(&self, count: usize) -> Vec<(BigRational, BigRational)> {
        sample_grid(count)
            .into_iter()
            .map(|x| {
                let y = self.eval(&x);
                (x, y)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let coeffs = |p: &Polynomial| -> Vec<String> {
            p.coeffs().iter().map(ToString::to_string).collect()
        };
        json!({
            "schema": "mabuchi-profile",
            "version": 1,
            "numerator": coeffs(&self.numerator),
            "denominator": coeffs(&self.denominator),
            "w": self.w.to_string(),
            "d0": self.d0,
            "d_inf": self.d_inf,
        })
    }
}

pub(crate) fn sample_grid(count: usize) -> Vec<BigRational> {
    match count {
        0 => vec![],
        1 => vec![BigRational::zero()],
        _ => (0..count)
            .map(|i| int(-1) + BigRational::new((2 * i).into(), (count - 1).into()))
            .collect(),
    }
}

/// `-(d0 + d_inf + 2) ∫_{-1}^{x} (t - w) u(t) p(t) dt` as a polynomial.
fn scaled_primitive(m: &AdmissibleManifold, u: &Polynomial) -> Polynomial {
    futaki_integrand(m, u)
        .antiderivative(&int(-1))
        .scale(&-m.fiber_weight())
}

/// Builds `Θ` for a polynomial weight whose Futaki pairing vanishes.
pub fn build_profile(m: &AdmissibleManifold, u: &Weight) -> Result<Profile> {
    let poly = u.as_polynomial().ok_or_else(|| {
        Error::UnsupportedWeight("exact profiles need a polynomial weight; see KrProfile".into())
    })?;
    if !u.is_positive() {
        return Err(Error::UnsupportedWeight(
            "weight is not positive on [-1, 1]".into(),
        ));
    }
    let primitive = futaki_integrand(m, &poly).antiderivative(&int(-1));
    let pairing = primitive.eval(&int(1));
    if !pairing.is_zero() {
        return Err(Error::FutakiNonzero {
            value: pairing.to_string(),
        });
    }
    let numerator = primitive
        .scale(&-m.fiber_weight())
        .div_exact(&m.boundary_factor())?;
    let denominator = &poly * &m.base_factor();
    Ok(Profile {
        numerator,
        denominator,
        w: m.w().clone(),
        d0: m.d0(),
        d_inf: m.d_inf(),
    })
}

/// Outcome of the exact boundary and positivity checks on a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileVerification {
    pub value_at_minus_one: BigRational,
    pub value_at_plus_one: BigRational,
    pub slope_at_minus_one: BigRational,
    pub slope_at_plus_one: BigRational,
    /// Distinct roots of the numerator in `(-1, 1)`.
    pub interior_roots: usize,
    pub positive_inside: bool,
    pub denominator_nonvanishing: bool,
}

impl ProfileVerification {
    pub fn boundary_values_ok(&self) -> bool {
        self.value_at_minus_one.is_zero() && self.value_at_plus_one.is_zero()
    }

    pub fn boundary_slopes_ok(&self) -> bool {
        self.slope_at_minus_one == int(2) && self.slope_at_plus_one == int(-2)
    }

    pub fn positivity_ok(&self) -> bool {
        self.interior_roots == 0 && self.positive_inside
    }

    pub fn all_passed(&self) -> bool {
        self.denominator_nonvanishing
            && self.boundary_values_ok()
            && self.boundary_slopes_ok()
            && self.positivity_ok()
    }

    pub fn lines(&self) -> Vec<(String, bool)> {
        vec![
            (
                "denominator nonvanishing on [-1, 1]".into(),
                self.denominator_nonvanishing,
            ),
            (
                format!(
                    "Θ(-1) = {}, Θ(1) = {}",
                    self.value_at_minus_one, self.value_at_plus_one
                ),
                self.boundary_values_ok(),
            ),
            (
                format!(
                    "Θ'(-1) = {}, Θ'(1) = {}",
                    self.slope_at_minus_one, self.slope_at_plus_one
                ),
                self.boundary_slopes_ok(),
            ),
            (
                format!("numerator roots in (-1, 1): {}", self.interior_roots),
                self.positivity_ok(),
            ),
        ]
    }
}

/// Exact check of `Θ(±1) = 0`, `Θ'(±1) = ∓2` and `Θ > 0` on `(-1, 1)`.
pub fn verify_profile(p: &Profile) -> ProfileVerification {
    let (lo, hi) = (int(-1), int(1));
    let denominator_nonvanishing = !p.denominator.is_zero()
        && !p.denominator.eval(&lo).is_zero()
        && !p.denominator.eval(&hi).is_zero()
        && sturm_roots_in_open_interval(&p.denominator, &lo, &hi) == 0;
    if !denominator_nonvanishing {
        return ProfileVerification {
            value_at_minus_one: BigRational::zero(),
            value_at_plus_one: BigRational::zero(),
            slope_at_minus_one: BigRational::zero(),
            slope_at_plus_one: BigRational::zero(),
            interior_roots: 0,
            positive_inside: false,
            denominator_nonvanishing,
        };
    }
    let interior_roots = if p.numerator.is_zero() {
        usize::MAX
    } else {
        sturm_roots_in_open_interval(&p.numerator, &lo, &hi)
    };
    // the denominator has constant sign on [-1, 1]
    let den_sign = p.denominator.eval(&BigRational::zero()).signum();
    let positive_inside = positive_on_open(&p.numerator.scale(&den_sign), &lo, &hi);
    ProfileVerification {
        value_at_minus_one: p.eval(&lo),
        value_at_plus_one: p.eval(&hi),
        slope_at_minus_one: p.derivative_at(&lo),
        slope_at_plus_one: p.derivative_at(&hi),
        interior_roots,
        positive_inside,
        denominator_nonvanishing,
    }
}

/// Checks `u p Θ = -(d0 + d_inf + 2) ∫_{-1}^{x} (t - w) u p dt` as a
/// polynomial identity after clearing the denominator of `Θ`.
pub fn primitive_identity_holds(m: &AdmissibleManifold, u: &Polynomial, p: &Profile) -> bool {
    let lhs = u * &m.characteristic_polynomial() * &p.numerator;
    let rhs = scaled_primitive(m, u) * &p.denominator;
    lhs == rhs
}

/// Checks the soliton ODE `(uF)' / (u p) = -(d0 + d_inf + 2)(x - w)` with
/// `F = p Θ`, as an identity of rational functions.
pub fn soliton_ode_holds(m: &AdmissibleManifold, u: &Polynomial, p: &Profile) -> bool {
    // uF = A / D with A = u p N
    let charp = m.characteristic_polynomial();
    let a = u * &charp * &p.numerator;
    let d = &p.denominator;
    // (uF)' = (A' D - A D') / D^2
    let lhs = &a.derivative() * d - &a * &d.derivative();
    let shift = Polynomial::linear(-m.w().clone(), BigRational::one());
    let rhs = shift.scale(&-m.fiber_weight()) * u * &charp * d * d;
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn pn(n: u32, k: u32, d0: u32, d_inf: u32) -> AdmissibleManifold {
        AdmissibleManifold::from_pn_bundle(n, k, d0, d_inf).unwrap()
    }

    fn p1() -> AdmissibleManifold {
        AdmissibleManifold::new(0, 0, vec![]).unwrap()
    }

    #[test]
    fn mabuchi_weight_examples() {
        let u = mabuchi_weight(&pn(1, 1, 0, 0)).unwrap();
        assert_eq!(
            u.as_polynomial().unwrap(),
            Polynomial::new(vec![rat(12, 11), rat(-6, 11)])
        );
        assert_eq!(u.min_on_interval().unwrap(), rat(6, 11));
        assert!(u.is_positive());
        assert_eq!(mabuchi_weight(&p1()).unwrap(), Weight::One);
        let err = mabuchi_weight(&pn(2, 1, 0, 1)).unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }));
    }

    #[test]
    fn projective_line_profile() {
        let prof = build_profile(&p1(), &Weight::One).unwrap();
        assert_eq!(prof.eval(&rat(1, 2)), rat(3, 4));
        assert_eq!(prof.numerator, Polynomial::from_ints(&[1, 0, -1]));
        assert_eq!(prof.denominator, Polynomial::one());
        assert!(verify_profile(&prof).all_passed());
    }

    #[test]
    fn blow_up_mabuchi_profile() {
        let m = pn(1, 1, 0, 0);
        let u = mabuchi_weight(&m).unwrap();
        let prof = build_profile(&m, &u).unwrap();
        let v = verify_profile(&prof);
        assert!(v.all_passed(), "{v:?}");
        let poly = u.as_polynomial().unwrap();
        assert!(primitive_identity_holds(&m, &poly, &prof));
        assert!(soliton_ode_holds(&m, &poly, &prof));
        // dense rational sampling agrees with the Sturm certificate
        for x in sample_grid(401).iter().skip(1).take(399) {
            assert!(prof.eval(x).is_positive());
        }
    }

    #[test]
    fn nonzero_futaki_is_rejected() {
        let err = build_profile(&pn(1, 1, 0, 1), &Weight::One).unwrap_err();
        assert_eq!(
            err,
            Error::FutakiNonzero {
                value: "4/9".into()
            }
        );
        let err = build_profile(&p1(), &Weight::Exponential(int(0))).unwrap_err();
        assert!(matches!(err, Error::UnsupportedWeight(_)));
    }

    #[test]
    fn verification_negative_control() {
        let theta = Polynomial::from_ints(&[1, 0, -1]).pow(2);
        let v = verify_profile(&Profile::from_parts(theta, Polynomial::one()));
        assert!(v.boundary_values_ok());
        assert!(!v.boundary_slopes_ok());
        assert_eq!(v.slope_at_minus_one, int(0));
        assert!(!v.all_passed());

        let v = verify_profile(&Profile::from_parts(
            Polynomial::from_ints(&[1, 0, -1]),
            Polynomial::one(),
        ));
        assert!(v.all_passed());

        // negative inside
        let v = verify_profile(&Profile::from_parts(
            Polynomial::from_ints(&[-1, 0, 1]),
            Polynomial::one(),
        ));
        assert!(!v.positivity_ok());

        // vanishing denominator
        let v = verify_profile(&Profile::from_parts(
            Polynomial::from_ints(&[1, 0, -1]),
            Polynomial::x(),
        ));
        assert!(!v.denominator_nonvanishing && !v.all_passed());
    }

    #[test]
    fn poly_weight_positivity_uses_sturm() {
        assert!(Weight::Poly(Polynomial::from_ints(&[2, 0, -1])).is_positive());
        assert!(!Weight::Poly(Polynomial::from_ints(&[1, 0, -2])).is_positive());
        let neg_affine = Weight::Affine {
            alpha: int(2),
            beta: int(0),
        };
        assert!(!neg_affine.is_positive());
    }

    #[test]
    fn profile_json_lists_coefficients() {
        let prof = build_profile(&p1(), &Weight::One).unwrap();
        let v = prof.to_json();
        assert_eq!(v["numerator"][0], "1");
        assert_eq!(v["numerator"][2], "-1");
        assert_eq!(v["denominator"][0], "1");
        assert_eq!(prof.samples(3)[1], (int(0), int(1)));
    }
}
