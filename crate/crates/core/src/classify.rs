//! Moments of the characteristic polynomial, the Mabuchi constant and the
//! existence verdicts derived from them.
//!
//! With `b_i = ∫_{-1}^{1} x^i p(x) dx` and `f = b1 - w b0` the Mabuchi
//! constant has two closed forms,
//!
//! ```text
//! M_X = (b0 |f| - b1 f) / (b0 b2 - b1²)
//!     = 1 + b0 (|f| - (b2 - w b1)) / (b0 b2 - b1²),
//! ```
//!
//! both of which are evaluated and compared on every call. A Kähler-Einstein
//! metric exists iff `f = 0`; a Mabuchi soliton exists iff `M_X < 1`. All
//! comparisons are exact.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::admissible::AdmissibleManifold;
use crate::error::{Error, Result};
use crate::exact::{int, to_decimal, Polynomial};
use crate::profile::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Moments {
    #[serde(with = "crate::rational_str")]
    pub b0: BigRational,
    #[serde(with = "crate::rational_str")]
    pub b1: BigRational,
    #[serde(with = "crate::rational_str")]
    pub b2: BigRational,
}

impl Moments {
    /// `b0 b2 - b1²`, positive by Cauchy-Schwarz.
    pub fn gram(&self) -> BigRational {
        &self.b0 * &self.b2 - &self.b1 * &self.b1
    }
}

/// `b0, b1, b2` of a density that is positive on `(-1, 1)`.
pub fn moments(p: &Polynomial) -> Result<Moments> {
    let (lo, hi) = (int(-1), int(1));
    let m = Moments {
        b0: p.definite_integral(&lo, &hi),
        b1: (p * &Polynomial::x()).definite_integral(&lo, &hi),
        b2: (p * &Polynomial::monomial(BigRational::one(), 2)).definite_integral(&lo, &hi),
    };
    if !m.b0.is_positive() || !m.b2.is_positive() {
        return Err(Error::InvariantViolation(format!(
            "moments b0 = {}, b2 = {} must be positive",
            m.b0, m.b2
        )));
    }
    if !m.gram().is_positive() {
        return Err(Error::InvariantViolation(format!(
            "b0 b2 - b1^2 = {} must be positive",
            m.gram()
        )));
    }
    Ok(m)
}

/// Coefficients of the projection `αx + β` of `1 - e^h` onto the affine
/// functions of the moment coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionCoefficients {
    #[serde(with = "crate::rational_str")]
    pub alpha: BigRational,
    #[serde(with = "crate::rational_str")]
    pub beta: BigRational,
}

impl ProjectionCoefficients {
    /// `max_{x ∈ [-1,1]} (αx + β) = |α| + β`.
    pub fn max_on_interval(&self) -> BigRational {
        self.alpha.abs() + &self.beta
    }
}

fn projection_from_moments(b: &Moments, w: &BigRational) -> ProjectionCoefficients {
    let gram = b.gram();
    ProjectionCoefficients {
        alpha: (&b.b0 * &b.b1 - w * &b.b0 * &b.b0) / &gram,
        beta: -(&b.b1 * &b.b1 - w * &b.b0 * &b.b1) / &gram,
    }
}

pub fn projection_coefficients(m: &AdmissibleManifold) -> Result<ProjectionCoefficients> {
    let b = moments(&m.characteristic_polynomial())?;
    Ok(projection_from_moments(&b, m.w()))
}

/// Both closed forms of the Mabuchi constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MabuchiForms {
    pub quotient: BigRational,
    pub one_plus: BigRational,
}

pub fn mabuchi_forms(b: &Moments, w: &BigRational) -> MabuchiForms {
    let gram = b.gram();
    let f = &b.b1 - w * &b.b0;
    let abs_f = f.abs();
    MabuchiForms {
        quotient: (&b.b0 * &abs_f - &b.b1 * &f) / &gram,
        one_plus: BigRational::one() + &b.b0 * (&abs_f - (&b.b2 - w * &b.b1)) / &gram,
    }
}

fn checked_mabuchi(b: &Moments, w: &BigRational) -> Result<BigRational> {
    let forms = mabuchi_forms(b, w);
    if forms.quotient != forms.one_plus {
        return Err(Error::InvariantViolation(format!(
            "Mabuchi constant closed forms disagree: {} vs {}",
            forms.quotient, forms.one_plus
        )));
    }
    Ok(forms.quotient)
}

/// Exact Mabuchi constant of the anticanonical class.
pub fn mabuchi_constant(m: &AdmissibleManifold) -> Result<BigRational> {
    let b = moments(&m.characteristic_polynomial())?;
    checked_mabuchi(&b, m.w())
}

/// `∫_{-1}^{1} (x - w) u(x) p(x) dx` for a polynomial weight `u`.
pub fn futaki_pairing(m: &AdmissibleManifold, u: &Weight) -> Result<BigRational> {
    let u = u.as_polynomial().ok_or_else(|| {
        Error::UnsupportedWeight(
            "exponential weights leave the rational world; use exp_futaki".into(),
        )
    })?;
    Ok(futaki_integrand(m, &u).definite_integral(&int(-1), &int(1)))
}

/// `(x - w) u(x) p(x)` as an exact polynomial.
pub(crate) fn futaki_integrand(m: &AdmissibleManifold, u: &Polynomial) -> Polynomial {
    let shift = Polynomial::linear(-m.w().clone(), BigRational::one());
    shift * u * m.characteristic_polynomial()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub manifold: String,
    pub moments: Moments,
    pub w: BigRational,
    /// `b1 - w b0`
    pub futaki: BigRational,
    pub mabuchi_constant: BigRational,
    pub projection: ProjectionCoefficients,
    pub ke_exists: bool,
    pub mabuchi_soliton_exists: bool,
    /// Every Fano admissible manifold carries a Kähler-Ricci soliton.
    pub kr_soliton_exists: bool,
    pub notes: Vec<String>,
}

/// Version tag of the JSON report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

impl ClassificationReport {
    /// JSON view with rationals as `"p/q"` strings. With `decimals`, a
    /// `"decimal"` block repeats the key values rounded to that many places.
    pub fn to_json(&self, decimals: Option<usize>) -> Value {
        let mut v = json!({
            "schema": "mabuchi-classification",
            "version": REPORT_SCHEMA_VERSION,
            "manifold": self.manifold,
            "b0": self.moments.b0.to_string(),
            "b1": self.moments.b1.to_string(),
            "b2": self.moments.b2.to_string(),
            "w": self.w.to_string(),
            "futaki": self.futaki.to_string(),
            "M_X": self.mabuchi_constant.to_string(),
            "alpha": self.projection.alpha.to_string(),
            "beta": self.projection.beta.to_string(),
            "ke": self.ke_exists,
            "mabuchi_soliton": self.mabuchi_soliton_exists,
            "kr_soliton": self.kr_soliton_exists,
            "notes": self.notes,
        });
        if let Some(digits) = decimals {
            v["decimal"] = json!({
                "precision": digits,
                "presentation_only": true,
                "M_X": to_decimal(&self.mabuchi_constant, digits),
                "futaki": to_decimal(&self.futaki, digits),
                "alpha": to_decimal(&self.projection.alpha, digits),
                "beta": to_decimal(&self.projection.beta, digits),
            });
        }
        v
    }
}

/// Full exact classification of a Fano admissible manifold.
pub fn classify(m: &AdmissibleManifold) -> Result<ClassificationReport> {
    let b = moments(&m.characteristic_polynomial())?;
    let w = m.w().clone();
    let futaki = &b.b1 - &w * &b.b0;
    let mabuchi = checked_mabuchi(&b, &w)?;
    let projection = projection_from_moments(&b, &w);
    if projection.max_on_interval() != mabuchi {
        return Err(Error::InvariantViolation(format!(
            "|alpha| + beta = {} differs from M_X = {mabuchi}",
            projection.max_on_interval()
        )));
    }
    let ke_exists = futaki.is_zero();
    let mabuchi_soliton_exists = mabuchi < BigRational::one();
    let mut notes = vec![
        "M_X: quotient and 1+ closed forms agree exactly".to_string(),
        if ke_exists {
            "KE: b1 - w b0 = 0".to_string()
        } else {
            format!("KE: b1 - w b0 = {futaki} != 0, no Kähler-Einstein metric")
        },
        if mabuchi_soliton_exists {
            format!("Mabuchi soliton: M_X = {mabuchi} < 1")
        } else {
            format!("Mabuchi soliton: M_X = {mabuchi} >= 1, none exists")
        },
        "Kähler-Ricci soliton: exists on every Fano admissible manifold".to_string(),
    ];
    if mabuchi == BigRational::one() {
        notes.push("M_X = 1 exactly: boundary case".to_string());
    }
    Ok(ClassificationReport {
        manifold: m.describe(),
        moments: b,
        w,
        futaki,
        mabuchi_constant: mabuchi,
        projection,
        ke_exists,
        mabuchi_soliton_exists,
        kr_soliton_exists: true,
        notes,
    })
}
