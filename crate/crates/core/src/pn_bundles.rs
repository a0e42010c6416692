//! Projective bundles `P(O^{d0+1} ⊕ O(k)^{d_inf+1})` over `P^n`.
//!
//! Every quantity here is computed at least twice: once from the moments of
//! the characteristic polynomial and once from a closed-form expansion over
//! `[0, 1]` (substitution `x = 2u - 1`, binomial expansion, beta integrals).
//! The routes must agree exactly or the call fails with `OracleMismatch`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::admissible::{pn_lambda, AdmissibleManifold};
use crate::classify::{mabuchi_constant, moments, Moments};
use crate::error::{Error, Result};
use crate::exact::{beta_int, binomial, int, rpow, to_decimal, two_pow, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnBundleParams {
    pub n: u32,
    pub k: u32,
    pub d0: u32,
    pub d_inf: u32,
    pub lambda: BigRational,
    /// `(λ - 1) / 2`
    pub a: BigRational,
    /// `(1 + w) / 2`
    pub b: BigRational,
    pub w: BigRational,
    /// `a (d0 + 1) / (n - d0 - 1)`, only when `n > d0 + 1`.
    pub c_const: Option<BigRational>,
}

impl PnBundleParams {
    pub fn new(n: u32, k: u32, d0: u32, d_inf: u32) -> Result<Self> {
        if n == 0 || k == 0 || k * (d0 + 1) > n {
            return Err(Error::NotFano(format!(
                "k(d0+1) ≥ n+1 for (n,k,d0,d_inf) = ({n},{k},{d0},{d_inf})"
            )));
        }
        let fiber = int((d0 + d_inf + 2) as i64);
        let lambda = pn_lambda(n, k, d0, d_inf);
        let a = int(n as i64 + 1 - (k * (d0 + 1)) as i64) / (int(k as i64) * &fiber);
        let b = int(d0 as i64 + 1) / &fiber;
        let w = int(d0 as i64 - d_inf as i64) / &fiber;
        let c_const = (n > d0 + 1).then(|| &a * int(d0 as i64 + 1) / int((n - d0 - 1) as i64));
        Ok(PnBundleParams {
            n,
            k,
            d0,
            d_inf,
            lambda,
            a,
            b,
            w,
            c_const,
        })
    }

    pub fn tuple(&self) -> [u32; 4] {
        [self.n, self.k, self.d0, self.d_inf]
    }

    pub fn manifold(&self) -> Result<AdmissibleManifold> {
        AdmissibleManifold::from_pn_bundle(self.n, self.k, self.d0, self.d_inf)
    }

    fn fiber(&self) -> BigRational {
        int((self.d0 + self.d_inf + 2) as i64)
    }

    fn label(&self) -> String {
        format!("({},{},{},{})", self.n, self.k, self.d0, self.d_inf)
    }
}

/// `(a + u)^n u^{d0} (1 - u)^{e}` as a polynomial in `u`.
fn unit_weight(a: &BigRational, n: u32, d0: u32, e: u32) -> Polynomial {
    Polynomial::linear(a.clone(), BigRational::one()).pow(n)
        * Polynomial::monomial(BigRational::one(), d0 as usize)
        * Polynomial::linear(BigRational::one(), -BigRational::one()).pow(e)
}

fn unit_integral(q: &Polynomial) -> BigRational {
    q.definite_integral(&BigRational::zero(), &BigRational::one())
}

fn agree(what: &str, p: &PnBundleParams, left: &BigRational, right: &BigRational) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::mismatch(
            format!("{what} at {}", p.label()),
            left,
            right,
        ))
    }
}

fn pn_moments(p: &PnBundleParams) -> Result<Moments> {
    moments(&p.manifold()?.characteristic_polynomial())
}

/// `I = b1 - w b0 + w b1 - b2`, checked against the direct integral over
/// `[-1, 1]` and the substituted integral over `[0, 1]`.
pub fn i_integral(p: &PnBundleParams) -> Result<BigRational> {
    let m = pn_moments(p)?;
    i_integral_with(p, &m)
}

fn i_integral_with(p: &PnBundleParams, m: &Moments) -> Result<BigRational> {
    let from_moments = &m.b1 - &p.w * &m.b0 + &p.w * &m.b1 - &m.b2;

    let direct = Polynomial::linear(p.lambda.clone(), BigRational::one()).pow(p.n)
        * Polynomial::linear(BigRational::one(), BigRational::one()).pow(p.d0)
        * Polynomial::linear(BigRational::one(), -BigRational::one()).pow(p.d_inf + 1)
        * Polynomial::linear(-p.w.clone(), BigRational::one());
    let direct = direct.definite_integral(&int(-1), &int(1));
    agree("I: moments vs direct integral", p, &from_moments, &direct)?;

    let shifted = unit_weight(&p.a, p.n, p.d0, p.d_inf + 1)
        * Polynomial::linear(-p.b.clone(), BigRational::one());
    let substituted = two_pow((p.d0 + p.d_inf + p.n + 3) as u64) * unit_integral(&shifted);
    agree("I: moments vs substitution", p, &from_moments, &substituted)?;
    Ok(from_moments)
}

/// Sufficient condition for `M_X > 1`, evaluated as the ratio inequality and
/// as the equivalent linear form in `n`. Fails if the two disagree.
pub fn eq1_check(p: &PnBundleParams) -> Result<bool> {
    let (n, k) = (int(p.n as i64), int(p.k as i64));
    let (d0, d_inf) = (int(p.d0 as i64), int(p.d_inf as i64));
    let four = &d0 + &d_inf + int(4);
    let lhs = (&n * (&d_inf + int(1)) - (&d0 + int(1))) / &four;
    let rhs = (&n + int(1) - &k * (&d0 + int(1))) / (&k * p.fiber());
    let ratio_form = lhs >= rhs;

    let slope = (&d_inf + int(1)) * p.fiber() - &four / &k;
    let linear = slope * &n - &four / &k + int(2) * (&d0 + int(1));
    let linear_form = !linear.is_negative();
    if ratio_form != linear_form {
        return Err(Error::mismatch(
            format!("eq1 forms at {}", p.label()),
            ratio_form,
            linear_form,
        ));
    }
    Ok(ratio_form)
}

/// The closed-form existence set: `(k, d_inf) = (1, 0)` or the single tuple
/// `(1, 1, 0, 1)`.
pub fn classify_closed_form(p: &PnBundleParams) -> bool {
    (p.k == 1 && p.d_inf == 0) || p.tuple() == [1, 1, 0, 1]
}

/// `b1 - w b0` by moments, by the beta-sum expansion and by the change of
/// variables to `[0, 1]`. All three must agree and be positive.
pub fn futaki_positivity(p: &PnBundleParams) -> Result<BigRational> {
    let m = pn_moments(p)?;
    futaki_positivity_with(p, &m)
}

fn futaki_positivity_with(p: &PnBundleParams, m: &Moments) -> Result<BigRational> {
    let direct = &m.b1 - &p.w * &m.b0;

    let mut sum = BigRational::zero();
    for j in 0..p.n {
        sum += BigRational::from_integer(binomial((p.n - 1) as u64, j as u64))
            * rpow(&p.a, (p.n - 1 - j) as u64)
            * beta_int((j + p.d0 + 2) as u64, (p.d_inf + 2) as u64);
    }
    let expansion = int(p.n as i64) * two_pow((p.d0 + p.d_inf + p.n + 2) as u64) / p.fiber() * sum;
    agree(
        "b1 - w b0: moments vs beta expansion",
        p,
        &direct,
        &expansion,
    )?;

    let shifted = unit_weight(&p.a, p.n, p.d0, p.d_inf)
        * Polynomial::linear(-p.b.clone(), BigRational::one());
    let substituted = two_pow((p.d0 + p.d_inf + p.n + 2) as u64) * unit_integral(&shifted);
    agree(
        "b1 - w b0: moments vs change of variables",
        p,
        &direct,
        &substituted,
    )?;

    if !direct.is_positive() {
        return Err(Error::InvariantViolation(format!(
            "b1 - w b0 = {direct} is not positive at {}",
            p.label()
        )));
    }
    Ok(direct)
}

/// Beta-sum quantities behind the `M_X > 1` argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSums {
    pub s0: BigRational,
    pub s1: BigRational,
    /// `∫_0^1 t^{d0+1} (1-t)^{d_inf+2} (a+t)^{n-1} dt`
    pub k: BigRational,
    /// `∫_0^1 t^{d0} (1-t)^{d_inf+2} (a+t)^{n-1} dt`
    pub l: BigRational,
    /// `B(d0+1, d_inf+3) K - B(d0+2, d_inf+3) L`: zero for `n = 1`, positive otherwise.
    pub chebyshev_gap: BigRational,
}

/// `S0 = Σ C(n,j) a^{n-j} B(d0+1+j, d_inf+3)` and `S1` (the same with a
/// factor `j`), cross-checked against `K` and `L` by exact integration:
/// `S0 = aL + K`, `S1 = nK`, and `I` recovered from `S0, S1`.
pub fn s0_s1_ratio(p: &PnBundleParams) -> Result<BetaSums> {
    let (mut s0, mut s1) = (BigRational::zero(), BigRational::zero());
    for j in 0..=p.n {
        let term = BigRational::from_integer(binomial(p.n as u64, j as u64))
            * rpow(&p.a, (p.n - j) as u64)
            * beta_int((p.d0 + 1 + j) as u64, (p.d_inf + 3) as u64);
        s1 += &term * int(j as i64);
        s0 += term;
    }
    let k = unit_integral(&unit_weight(&p.a, p.n - 1, p.d0 + 1, p.d_inf + 2));
    let l = unit_integral(&unit_weight(&p.a, p.n - 1, p.d0, p.d_inf + 2));
    let n = int(p.n as i64);

    agree("S0 vs aL + K", p, &s0, &(&p.a * &l + &k))?;
    agree("S1 vs nK", p, &s1, &(&n * &k))?;
    agree(
        "S1/S0 vs nK/(aL + K)",
        p,
        &(&s1 / &s0),
        &(&n * &k / (&p.a * &l + &k)),
    )?;

    let m = pn_moments(p)?;
    let i = i_integral_with(p, &m)?;
    let prefactor =
        two_pow((p.d0 + p.d_inf + p.n + 3) as u64) / (int(p.d_inf as i64 + 2) * p.fiber());
    let from_sums = prefactor * (int(p.d_inf as i64 + 1) * &s1 - int(p.d0 as i64 + 1) * &s0);
    agree("I vs S0, S1 expansion", p, &i, &from_sums)?;

    let (d0, d_inf) = (p.d0 as u64, p.d_inf as u64);
    let gap = beta_int(d0 + 1, d_inf + 3) * &k - beta_int(d0 + 2, d_inf + 3) * &l;
    let expected_sign = if p.n == 1 { 0 } else { 1 };
    let sign = if gap.is_zero() {
        0
    } else if gap.is_positive() {
        1
    } else {
        -1
    };
    if sign != expected_sign {
        return Err(Error::mismatch(
            format!("Chebyshev gap sign at {}", p.label()),
            sign,
            expected_sign,
        ));
    }
    Ok(BetaSums {
        s0,
        s1,
        k,
        l,
        chebyshev_gap: gap,
    })
}

/// For `k = 1, d_inf = 0`: the integration-by-parts form
/// `I = 2^{d0+n+2}/(d0+2) ∫_0^1 (a+u)^{n-1} u^{d0} (1-u)^2 [(n-d0-1)u - a(d0+1)] du`
/// and, when `n > d0 + 1`, `I = 2^{d0+n+2}(n-d0-1)/(d0+2) (J - cK)`.
/// Returns `None` outside that family.
pub fn final_identity(p: &PnBundleParams) -> Result<Option<BigRational>> {
    if p.k != 1 || p.d_inf != 0 {
        return Ok(None);
    }
    let i = i_integral(p)?;
    let base = unit_weight(&p.a, p.n - 1, p.d0, 2);
    let bracket = Polynomial::linear(
        -(&p.a * int(p.d0 as i64 + 1)),
        int(p.n as i64 - p.d0 as i64 - 1),
    );
    let scale = two_pow((p.d0 + p.n + 2) as u64) / int(p.d0 as i64 + 2);
    let by_parts = &scale * unit_integral(&(&base * &bracket));
    agree("I vs integration by parts", p, &i, &by_parts)?;

    if let Some(c) = &p.c_const {
        let j = unit_integral(&(&base * &Polynomial::x()));
        let k = unit_integral(&base);
        let via_jk = &scale * int((p.n - p.d0 - 1) as i64) * (j - c * k);
        agree("I vs J - cK", p, &i, &via_jk)?;
    }
    Ok(Some(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PnVerdict {
    pub n: u32,
    pub k: u32,
    pub d0: u32,
    pub d_inf: u32,
    pub i: BigRational,
    pub futaki: BigRational,
    pub mabuchi_constant: BigRational,
    pub eq1_holds: bool,
    pub closed_form_exists: bool,
    pub computed_exists: bool,
}

impl PnVerdict {
    pub fn tuple(&self) -> [u32; 4] {
        [self.n, self.k, self.d0, self.d_inf]
    }

    /// KE metrics need `b1 - w b0 = 0`.
    pub fn ke_exists(&self) -> bool {
        self.futaki.is_zero()
    }
}

/// Full exact verdict for one tuple, with every consistency check applied.
pub fn pn_verdict(p: &PnBundleParams) -> Result<PnVerdict> {
    let manifold = p.manifold()?;
    let m = moments(&manifold.characteristic_polynomial())?;
    let i = i_integral_with(p, &m)?;
    let futaki = futaki_positivity_with(p, &m)?;
    let mabuchi = mabuchi_constant(&manifold)?;
    let label = p.label();

    // M_X = 1 + b0 I / (b0 b2 - b1^2)
    let via_i = BigRational::one() + &m.b0 * &i / m.gram();
    agree("M_X vs 1 + b0 I / G", p, &mabuchi, &via_i)?;

    let one = BigRational::one();
    if mabuchi == one {
        return Err(Error::VerdictMismatch(format!(
            "M_X = 1 exactly at {label}"
        )));
    }
    let computed_exists = mabuchi < one;
    if computed_exists != i.is_negative() {
        return Err(Error::VerdictMismatch(format!(
            "sign of I = {i} disagrees with M_X = {mabuchi} at {label}"
        )));
    }
    let closed_form_exists = classify_closed_form(p);
    if closed_form_exists != computed_exists {
        return Err(Error::VerdictMismatch(format!(
            "closed form says {closed_form_exists}, M_X = {mabuchi} at {label}"
        )));
    }
    let eq1_holds = eq1_check(p)?;
    if eq1_holds && mabuchi <= one {
        return Err(Error::VerdictMismatch(format!(
            "eq1 holds but M_X = {mabuchi} <= 1 at {label}"
        )));
    }
    Ok(PnVerdict {
        n: p.n,
        k: p.k,
        d0: p.d0,
        d_inf: p.d_inf,
        i,
        futaki,
        mabuchi_constant: mabuchi,
        eq1_holds,
        closed_form_exists,
        computed_exists,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanBounds {
    pub n_max: u32,
    pub k_max: u32,
    pub d0_max: u32,
    pub d_inf_max: u32,
}

impl Default for ScanBounds {
    fn default() -> Self {
        ScanBounds {
            n_max: 6,
            k_max: 6,
            d0_max: 4,
            d_inf_max: 4,
        }
    }
}

impl ScanBounds {
    /// All tuples with `1 <= n, k` and `0 <= d0, d_inf`, lexicographic.
    pub fn tuples(&self) -> Vec<[u32; 4]> {
        let mut out = Vec::new();
        for n in 1..=self.n_max {
            for k in 1..=self.k_max {
                for d0 in 0..=self.d0_max {
                    for d_inf in 0..=self.d_inf_max {
                        out.push([n, k, d0, d_inf]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedTuple {
    pub tuple: [u32; 4],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub bounds: ScanBounds,
    pub verdicts: Vec<PnVerdict>,
    pub skipped: Vec<SkippedTuple>,
}

pub const SCAN_SCHEMA_VERSION: u32 = 1;

/// Decimal places used for the `M_X_decimal` column.
pub const SCAN_DECIMALS: usize = 20;

pub const CSV_HEADER: [&str; 8] = ["n", "k", "d0", "d_inf", "I", "M_X", "M_X_decimal", "exists"];

impl ScanReport {
    pub fn mismatches(&self) -> usize {
        self.verdicts
            .iter()
            .filter(|v| v.closed_form_exists != v.computed_exists)
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for v in &self.verdicts {
            w.write_record([
                v.n.to_string(),
                v.k.to_string(),
                v.d0.to_string(),
                v.d_inf.to_string(),
                v.i.to_string(),
                v.mabuchi_constant.to_string(),
                to_decimal(&v.mabuchi_constant, SCAN_DECIMALS),
                v.computed_exists.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                json!({
                    "n": v.n,
                    "k": v.k,
                    "d0": v.d0,
                    "d_inf": v.d_inf,
                    "I": v.i.to_string(),
                    "futaki": v.futaki.to_string(),
                    "M_X": v.mabuchi_constant.to_string(),
                    "M_X_decimal": to_decimal(&v.mabuchi_constant, SCAN_DECIMALS),
                    "eq1": v.eq1_holds,
                    "closed_form": v.closed_form_exists,
                    "exists": v.computed_exists,
                })
            })
            .collect();
        json!({
            "schema": "mabuchi-scan",
            "version": SCAN_SCHEMA_VERSION,
            "bounds": {
                "n_max": self.bounds.n_max,
                "k_max": self.bounds.k_max,
                "d0_max": self.bounds.d0_max,
                "d_inf_max": self.bounds.d_inf_max,
            },
            "fano_tuples": self.verdicts.len(),
            "mismatches": self.mismatches(),
            "rows": rows,
        })
    }
}

enum Outcome {
    Verdict(PnVerdict),
    Skipped(SkippedTuple),
}

fn evaluate(t: [u32; 4]) -> Result<Outcome> {
    match PnBundleParams::new(t[0], t[1], t[2], t[3]) {
        Ok(p) => pn_verdict(&p).map(Outcome::Verdict),
        Err(Error::NotFano(reason)) => Ok(Outcome::Skipped(SkippedTuple { tuple: t, reason })),
        Err(e) => Err(e),
    }
}

fn assemble(bounds: ScanBounds, outcomes: Vec<Result<Outcome>>) -> Result<ScanReport> {
    let mut verdicts = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o? {
            Outcome::Verdict(v) => verdicts.push(v),
            Outcome::Skipped(s) => skipped.push(s),
        }
    }
    Ok(ScanReport {
        bounds,
        verdicts,
        skipped,
    })
}

fn check_bounds(b: &ScanBounds) -> Result<()> {
    if b.n_max == 0 || b.k_max == 0 {
        return Err(Error::Parse(
            "scan bounds n-max and k-max must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Exhaustive exact scan, evaluated in parallel. Output order is
/// lexicographic in `(n, k, d0, d_inf)` regardless of scheduling.
pub fn grid_scan(bounds: ScanBounds) -> Result<ScanReport> {
    check_bounds(&bounds)?;
    let outcomes = bounds.tuples().into_par_iter().map(evaluate).collect();
    assemble(bounds, outcomes)
}

/// Same as [`grid_scan`] on the calling thread only.
pub fn grid_scan_serial(bounds: ScanBounds) -> Result<ScanReport> {
    check_bounds(&bounds)?;
    let outcomes = bounds.tuples().into_iter().map(evaluate).collect();
    assemble(bounds, outcomes)
}
