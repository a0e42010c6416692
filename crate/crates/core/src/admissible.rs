//! Combinatorial data of a Fano admissible manifold.
//!
//! An admissible manifold is the projectivisation of
//! `O^(d0+1) ⊕ (L ⊗ O^(d_inf+1))` over a product of Kähler-Einstein factors
//! `Y_a` with `Ric(ω_a) = ε_a s_a ω_a`. Everything the existence criteria need
//! is the characteristic polynomial
//!
//! ```text
//! p(x) = (1 + x)^d0 (1 - x)^d_inf  Π_a (λ_a + ε_a x)^d_a
//! ```
//!
//! of the anticanonical class on the moment interval `[-1, 1]`. The overall
//! normalisation `2π c^d Π vol(Y_a)` of the Duistermaat-Heckman measure is
//! dropped: every criterion downstream is a ratio or a sign, so only the
//! density `p(x) dx` is modelled.
//!
//! Einstein constants are stored positive with the sign carried by `ε_a`.
//! The Fano condition then reads `s_a > d0 + 1` for `ε_a = +1` and
//! `s_a > d_inf + 1` for `ε_a = -1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, rat, Polynomial};

/// The sign `ε_a` of a base factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i64(e: i64) -> Result<Self> {
        match e {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("epsilon must be +1 or -1, got {e}"))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_rational(self) -> BigRational {
        int(self.as_i64())
    }
}

/// A Kähler-Einstein base factor `Y_a` of complex dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseFactor {
    dim: u32,
    epsilon: Sign,
    s: BigRational,
}

impl BaseFactor {
    pub fn new(dim: u32, epsilon: Sign, s: BigRational) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse(
                "base factor dimension must be at least 1".into(),
            ));
        }
        if !s.is_positive() {
            return Err(Error::Parse(format!(
                "Einstein constant s must be positive (sign goes in epsilon), got {s}"
            )));
        }
        Ok(BaseFactor { dim, epsilon, s })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    /// The signed Einstein constant `ε_a s_a`.
    pub fn signed_s(&self) -> BigRational {
        &self.s * self.epsilon.as_rational()
    }
}

/// Per-factor outcome of the Fano test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorDiagnostic {
    pub index: usize,
    pub factor: BaseFactor,
    /// `s_a` must exceed this value.
    pub lower_bound: BigRational,
    pub satisfied: bool,
}

impl fmt::Display for FactorDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.satisfied { ">" } else { "<=" };
        write!(
            f,
            "factor {} (d={}, epsilon={}, s={}): s {} {}",
            self.index,
            self.factor.dim,
            self.factor.epsilon.as_i64(),
            self.factor.s,
            rel,
            self.lower_bound
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoCheck {
    pub is_fano: bool,
    pub diagnostics: Vec<FactorDiagnostic>,
}

impl FanoCheck {
    pub fn failing(&self) -> impl Iterator<Item = &FactorDiagnostic> {
        self.diagnostics.iter().filter(|d| !d.satisfied)
    }
}

/// Fano test for admissible data: `s_a > d0 + 1` when `ε_a = +1` and
/// `s_a > d_inf + 1` when `ε_a = -1`, for every factor.
pub fn fano_check(d0: u32, d_inf: u32, factors: &[BaseFactor]) -> FanoCheck {
    let diagnostics: Vec<_> = factors
        .iter()
        .enumerate()
        .map(|(index, factor)| {
            let lower_bound = match factor.epsilon {
                Sign::Plus => int(d0 as i64 + 1),
                Sign::Minus => int(d_inf as i64 + 1),
            };
            FactorDiagnostic {
                index,
                satisfied: factor.s > lower_bound,
                factor: factor.clone(),
                lower_bound,
            }
        })
        .collect();
    FanoCheck {
        is_fano: diagnostics.iter().all(|d| d.satisfied),
        diagnostics,
    }
}

/// A Fano admissible manifold with its anticanonical class parameters.
#[derive(Clone, Debug)]
pub struct AdmissibleManifold {
    d0: u32,
    d_inf: u32,
    factors: Vec<BaseFactor>,
    c: BigRational,
    w: BigRational,
    x: Vec<BigRational>,
    lambda: Vec<BigRational>,
    pn_bundle: Option<[u32; 4]>,
}

impl AdmissibleManifold {
    /// Validates the Fano condition and derives `c`, `w`, `x_a`, `λ_a`.
    pub fn new(d0: u32, d_inf: u32, factors: Vec<BaseFactor>) -> Result<Self> {
        let check = fano_check(d0, d_inf, &factors);
        if !check.is_fano {
            let reasons: Vec<String> = check.failing().map(ToString::to_string).collect();
            return Err(Error::NotFano(reasons.join("; ")));
        }
        let total = int(d0 as i64 + d_inf as i64 + 2);
        let c = &total / int(2);
        let w = int(d0 as i64 - d_inf as i64) / &total;
        let mut x = Vec::with_capacity(factors.len());
        let mut lambda = Vec::with_capacity(factors.len());
        for f in &factors {
            let denom = int(2) * f.signed_s() + int(d_inf as i64 - d0 as i64);
            let xa = &total / denom;
            let eps_x = &xa * f.epsilon.as_rational();
            if !(eps_x.is_positive() && eps_x < BigRational::one()) {
                return Err(Error::InvariantViolation(format!(
                    "epsilon_a x_a = {eps_x} outside (0, 1) for a Fano factor"
                )));
            }
            lambda.push(f.epsilon.as_rational() / &xa);
            x.push(xa);
        }
        Ok(AdmissibleManifold {
            d0,
            d_inf,
            factors,
            c,
            w,
            x,
            lambda,
            pn_bundle: None,
        })
    }

    /// `P_{P^n}(O^(d0+1) ⊕ O(k)^(d_inf+1))`: one factor `P^n` with `ε = +1`
    /// and `s = (n+1)/k`, Fano iff `k(d0+1) < n+1`.
    pub fn from_pn_bundle(n: u32, k: u32, d0: u32, d_inf: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Parse(format!(
                "P^n bundle needs n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        if k as u64 * (d0 as u64 + 1) > n as u64 {
            return Err(Error::NotFano(format!(
                "k(d0+1) ≥ n+1 for (n,k,d0,d_inf) = ({n},{k},{d0},{d_inf})"
            )));
        }
        let factor = BaseFactor::new(n, Sign::Plus, rat(n as i64 + 1, k as i64))?;
        let mut m = Self::new(d0, d_inf, vec![factor])?;
        m.pn_bundle = Some([n, k, d0, d_inf]);
        Ok(m)
    }

    pub fn d0(&self) -> u32 {
        self.d0
    }

    pub fn d_inf(&self) -> u32 {
        self.d_inf
    }

    pub fn factors(&self) -> &[BaseFactor] {
        &self.factors
    }

    /// `c = (d0 + d_inf + 2) / 2`
    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// Barycentre offset `w = (d0 - d_inf)/(d0 + d_inf + 2)`, in `(-1, 1)`.
    pub fn w(&self) -> &BigRational {
        &self.w
    }

    pub fn x(&self) -> &[BigRational] {
        &self.x
    }

    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }

    /// `(n, k, d0, d_inf)` when built by [`Self::from_pn_bundle`].
    pub fn pn_bundle(&self) -> Option<[u32; 4]> {
        self.pn_bundle
    }

    /// `d0 + d_inf + 2`, the constant in front of the soliton equation.
    pub fn fiber_weight(&self) -> BigRational {
        int(self.d0 as i64 + self.d_inf as i64 + 2)
    }

    /// Complex dimension `d0 + d_inf + 1 + Σ d_a`.
    pub fn total_dim(&self) -> u32 {
        self.d0 + self.d_inf + 1 + self.factors.iter().map(|f| f.dim).sum::<u32>()
    }

    /// `(1 + x)^d0 (1 - x)^d_inf`
    pub fn boundary_factor(&self) -> Polynomial {
        Polynomial::from_ints(&[1, 1]).pow(self.d0)
            * Polynomial::from_ints(&[1, -1]).pow(self.d_inf)
    }

    /// `Π_a (λ_a + ε_a x)^d_a`, positive on `[-1, 1]`.
    pub fn base_factor(&self) -> Polynomial {
        self.factors
            .iter()
            .zip(&self.lambda)
            .fold(Polynomial::one(), |acc, (f, l)| {
                acc * Polynomial::linear(l.clone(), f.epsilon.as_rational()).pow(f.dim)
            })
    }

    /// The characteristic polynomial of the anticanonical class.
    pub fn characteristic_polynomial(&self) -> Polynomial {
        self.boundary_factor() * self.base_factor()
    }

    fn sorted_factors(&self) -> Vec<&BaseFactor> {
        let mut v: Vec<_> = self.factors.iter().collect();
        v.sort();
        v
    }

    pub fn describe(&self) -> String {
        if let Some([n, k, d0, d_inf]) = self.pn_bundle {
            return format!("P^n bundle (n,k,d0,d_inf) = ({n},{k},{d0},{d_inf})");
        }
        let factors: Vec<String> = self
            .factors
            .iter()
            .map(|f| format!("(d={}, eps={}, s={})", f.dim, f.epsilon.as_i64(), f.s))
            .collect();
        format!(
            "admissible d0={}, d_inf={}, factors=[{}]",
            self.d0,
            self.d_inf,
            factors.join(", ")
        )
    }
}

/// Factor order is irrelevant: manifolds compare as multisets of factors.
impl PartialEq for AdmissibleManifold {
    fn eq(&self, other: &Self) -> bool {
        self.d0 == other.d0
            && self.d_inf == other.d_inf
            && self.sorted_factors() == other.sorted_factors()
    }
}

impl Eq for AdmissibleManifold {}

/// JSON manifest accepted by the CLI.
///
/// ```json
/// {"d0": 0, "d_inf": 1, "factors": [{"d": 1, "epsilon": 1, "s": "2"}]}
/// {"pn_bundle": {"n": 1, "k": 1, "d0": 0, "d_inf": 1}}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Manifest {
    PnBundle {
        pn_bundle: PnBundleSpec,
    },
    General {
        d0: u32,
        d_inf: u32,
        factors: Vec<FactorSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PnBundleSpec {
    pub n: u32,
    pub k: u32,
    pub d0: u32,
    pub d_inf: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub d: u32,
    pub epsilon: i64,
    #[serde(with = "crate::rational_str")]
    pub s: BigRational,
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serialisation")
    }

    pub fn build(&self) -> Result<AdmissibleManifold> {
        match self {
            Manifest::PnBundle { pn_bundle: p } => {
                AdmissibleManifold::from_pn_bundle(p.n, p.k, p.d0, p.d_inf)
            }
            Manifest::General { d0, d_inf, factors } => {
                let factors = factors
                    .iter()
                    .map(|f| BaseFactor::new(f.d, Sign::from_i64(f.epsilon)?, f.s.clone()))
                    .collect::<Result<Vec<_>>>()?;
                AdmissibleManifold::new(*d0, *d_inf, factors)
            }
        }
    }
}

impl From<&AdmissibleManifold> for Manifest {
    fn from(m: &AdmissibleManifold) -> Self {
        match m.pn_bundle {
            Some([n, k, d0, d_inf]) => Manifest::PnBundle {
                pn_bundle: PnBundleSpec { n, k, d0, d_inf },
            },
            None => Manifest::General {
                d0: m.d0,
                d_inf: m.d_inf,
                factors: m
                    .factors
                    .iter()
                    .map(|f| FactorSpec {
                        d: f.dim,
                        epsilon: f.epsilon.as_i64(),
                        s: f.s.clone(),
                    })
                    .collect(),
            },
        }
    }
}

/// `λ = (2(n+1) + k(d_inf - d0)) / (k(d0 + d_inf + 2))`
pub fn pn_lambda(n: u32, k: u32, d0: u32, d_inf: u32) -> BigRational {
    let (n, k, d0, d_inf) = (n as i64, k as i64, d0 as i64, d_inf as i64);
    BigRational::new(
        BigInt::from(2 * (n + 1) + k * (d_inf - d0)),
        BigInt::from(k * (d0 + d_inf + 2)),
    )
}
