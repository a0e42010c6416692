use std::fmt::Write as _;

use mabuchi_core::classify::{mabuchi_forms, moments};
use mabuchi_core::pn_bundles::SCAN_DECIMALS;
use mabuchi_core::profile::{primitive_identity_holds, soliton_ode_holds};
use mabuchi_core::{
    build_profile, classify as classify_manifold, grid_scan, mabuchi_weight, solve_kr_soliton,
    to_decimal, to_scientific, verify_profile, BigRational, Error, KrConfig, KrProfile, Precision,
    ScanBounds, Weight,
};
use serde_json::{json, Value};

use crate::{
    load_manifold, Failure, Format, InputArgs, KrsArgs, ProfileArgs, ScanArgs, WeightKind,
};

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn csv_lines<I, R>(rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Two aligned columns.
fn table(rows: &[(String, String)]) -> String {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        let _ = writeln!(out, "{k}{}  {v}", " ".repeat(pad));
    }
    out
}

fn rational_row(key: &str, r: &BigRational, digits: usize) -> (String, String) {
    (
        key.to_string(),
        format!("{r}  (≈ {})", to_decimal(r, digits)),
    )
}

/// Decimal places shown in tables; full precision goes to JSON.
const TABLE_DIGITS: usize = 12;

pub fn classify(a: &InputArgs) -> Result<String, Failure> {
    let m = load_manifold(&a.source)?;
    let r = classify_manifold(&m)?;
    Ok(match a.common.format {
        Format::Json => pretty(&r.to_json(Some(a.common.precision as usize))),
        Format::Csv => csv_lines([
            vec![
                "manifold",
                "b0",
                "b1",
                "b2",
                "w",
                "futaki",
                "M_X",
                "alpha",
                "beta",
                "ke",
                "mabuchi_soliton",
                "kr_soliton",
            ]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>(),
            vec![
                r.manifold.clone(),
                r.moments.b0.to_string(),
                r.moments.b1.to_string(),
                r.moments.b2.to_string(),
                r.w.to_string(),
                r.futaki.to_string(),
                r.mabuchi_constant.to_string(),
                r.projection.alpha.to_string(),
                r.projection.beta.to_string(),
                r.ke_exists.to_string(),
                r.mabuchi_soliton_exists.to_string(),
                r.kr_soliton_exists.to_string(),
            ],
        ]),
        Format::Table => {
            let mut rows = vec![("manifold".to_string(), r.manifold.clone())];
            rows.push(rational_row("b0", &r.moments.b0, TABLE_DIGITS));
            rows.push(rational_row("b1", &r.moments.b1, TABLE_DIGITS));
            rows.push(rational_row("b2", &r.moments.b2, TABLE_DIGITS));
            rows.push(rational_row("w", &r.w, TABLE_DIGITS));
            rows.push(rational_row("futaki (b1 - w b0)", &r.futaki, TABLE_DIGITS));
            rows.push(rational_row("M_X", &r.mabuchi_constant, TABLE_DIGITS));
            rows.push(rational_row("alpha", &r.projection.alpha, TABLE_DIGITS));
            rows.push(rational_row("beta", &r.projection.beta, TABLE_DIGITS));
            rows.push(("Kähler-Einstein".into(), r.ke_exists.to_string()));
            rows.push((
                "Mabuchi soliton".into(),
                r.mabuchi_soliton_exists.to_string(),
            ));
            rows.push((
                "Kähler-Ricci soliton".into(),
                r.kr_soliton_exists.to_string(),
            ));
            let mut out = table(&rows);
            for n in &r.notes {
                let _ = writeln!(out, "note: {n}");
            }
            out
        }
    })
}

pub fn mconst(a: &InputArgs) -> Result<String, Failure> {
    let m = load_manifold(&a.source)?;
    let b = moments(&m.characteristic_polynomial())?;
    let forms = mabuchi_forms(&b, m.w());
    if forms.quotient != forms.one_plus {
        return Err(Error::OracleMismatch {
            what: "M_X closed forms".into(),
            left: forms.quotient.to_string(),
            right: forms.one_plus.to_string(),
        }
        .into());
    }
    let r = classify_manifold(&m)?;
    let mx = &r.mabuchi_constant;
    let digits = a.common.precision as usize;
    Ok(match a.common.format {
        Format::Json => pretty(&json!({
            "schema": "mabuchi-constant",
            "version": 1,
            "manifold": r.manifold,
            "M_X": mx.to_string(),
            "M_X_quotient_form": forms.quotient.to_string(),
            "M_X_one_plus_form": forms.one_plus.to_string(),
            "forms_agree": true,
            "alpha": r.projection.alpha.to_string(),
            "beta": r.projection.beta.to_string(),
            "mabuchi_soliton": r.mabuchi_soliton_exists,
            "decimal": {
                "precision": digits,
                "presentation_only": true,
                "M_X": to_decimal(mx, digits),
            },
        })),
        Format::Csv => csv_lines([
            vec![
                "manifold",
                "M_X",
                "M_X_decimal",
                "alpha",
                "beta",
                "mabuchi_soliton",
            ]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>(),
            vec![
                r.manifold.clone(),
                mx.to_string(),
                to_decimal(mx, digits),
                r.projection.alpha.to_string(),
                r.projection.beta.to_string(),
                r.mabuchi_soliton_exists.to_string(),
            ],
        ]),
        Format::Table => table(&[
            ("manifold".into(), r.manifold.clone()),
            rational_row("M_X", mx, TABLE_DIGITS),
            ("quotient form".into(), forms.quotient.to_string()),
            ("1 + ... form".into(), forms.one_plus.to_string()),
            rational_row("alpha", &r.projection.alpha, TABLE_DIGITS),
            rational_row("beta", &r.projection.beta, TABLE_DIGITS),
            (
                "Mabuchi soliton".into(),
                r.mabuchi_soliton_exists.to_string(),
            ),
        ]),
    })
}

pub fn scan(a: &ScanArgs) -> Result<String, Failure> {
    let bounds = ScanBounds {
        n_max: a.n_max,
        k_max: a.k_max,
        d0_max: a.d0_max,
        d_inf_max: a.dinf_max,
    };
    if bounds.n_max == 0 || bounds.k_max == 0 {
        return Err(Failure::Input(
            "Parse: --n-max and --k-max must be at least 1".into(),
        ));
    }
    let report = grid_scan(bounds)?;
    if a.verbose {
        for s in &report.skipped {
            let [n, k, d0, d_inf] = s.tuple;
            eprintln!("skipped ({n},{k},{d0},{d_inf}): NotFano: {}", s.reason);
        }
    }
    Ok(match a.common.format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => report.to_csv(),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>2} {:>2} {:>2} {:>5}  {:>24}  {:>24}  {:>6}",
                "n", "k", "d0", "d_inf", "I", "M_X", "exists"
            );
            for v in &report.verdicts {
                let _ = writeln!(
                    out,
                    "{:>2} {:>2} {:>2} {:>5}  {:>24}  {:>24}  {:>6}",
                    v.n,
                    v.k,
                    v.d0,
                    v.d_inf,
                    v.i.to_string(),
                    to_decimal(&v.mabuchi_constant, SCAN_DECIMALS),
                    v.computed_exists
                );
            }
            let existing = report.verdicts.iter().filter(|v| v.computed_exists).count();
            let _ = writeln!(
                out,
                "{} Fano tuples, {} with a Mabuchi soliton, {} mismatches with the closed form",
                report.verdicts.len(),
                existing,
                report.mismatches()
            );
            out
        }
    })
}

fn samples_csv(samples: &[(BigRational, BigRational)], digits: usize) -> String {
    let mut rows = vec![vec![
        "x".to_string(),
        "theta".to_string(),
        "theta_decimal".to_string(),
    ]];
    for (x, y) in samples {
        rows.push(vec![x.to_string(), y.to_string(), to_decimal(y, digits)]);
    }
    csv_lines(rows)
}

pub fn profile(a: &ProfileArgs) -> Result<String, Failure> {
    let m = load_manifold(&a.source)?;
    let weight = match a.weight {
        WeightKind::Ke => Weight::One,
        WeightKind::Mabuchi => mabuchi_weight(&m)?,
    };
    let prof = build_profile(&m, &weight)?;
    let ver = verify_profile(&prof);
    let u = weight.as_polynomial().expect("polynomial weight");
    let primitive = primitive_identity_holds(&m, &u, &prof);
    let ode = soliton_ode_holds(&m, &u, &prof);
    if !(ver.all_passed() && primitive && ode) {
        let failed: Vec<String> = ver
            .lines()
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(l, _)| l)
            .collect();
        return Err(Error::InvariantViolation(format!(
            "profile certification failed: {failed:?}, primitive identity {primitive}, ODE {ode}"
        ))
        .into());
    }
    let digits = a.common.precision as usize;
    let weight_poly: Vec<String> = u.coeffs().iter().map(ToString::to_string).collect();
    Ok(match a.common.format {
        Format::Json => {
            let mut v = prof.to_json();
            v["manifold"] = json!(m.describe());
            v["weight"] = json!(weight_poly);
            v["certified"] = json!({
                "boundary_values": ver.boundary_values_ok(),
                "boundary_slopes": ver.boundary_slopes_ok(),
                "numerator_roots_in_open_interval": ver.interior_roots,
                "positive_inside": ver.positive_inside,
                "primitive_identity": primitive,
                "soliton_ode": ode,
            });
            if let Some(n) = a.samples {
                v["samples"] = prof
                    .samples(n as usize)
                    .iter()
                    .map(|(x, y)| json!({"x": x.to_string(), "theta": y.to_string()}))
                    .collect();
            }
            pretty(&v)
        }
        Format::Csv => samples_csv(&prof.samples(a.samples.unwrap_or(21) as usize), digits),
        Format::Table => {
            let mut out = table(&[
                ("manifold".into(), m.describe()),
                ("weight u".into(), u.to_string()),
                ("Θ numerator".into(), prof.numerator.to_string()),
                ("Θ denominator".into(), prof.denominator.to_string()),
            ]);
            for (line, ok) in ver.lines() {
                let _ = writeln!(out, "[{}] {line}", if ok { "ok" } else { "FAIL" });
            }
            let _ = writeln!(out, "[ok] u p Θ = -(d0+d_inf+2) ∫_{{-1}}^x (t-w) u p dt");
            let _ = writeln!(out, "[ok] (uF)' / (u p) = -(d0+d_inf+2)(x - w)");
            if let Some(n) = a.samples {
                out.push('\n');
                out.push_str(&samples_csv(&prof.samples(n as usize), TABLE_DIGITS));
            }
            out
        }
    })
}

pub fn krs(a: &KrsArgs) -> Result<String, Failure> {
    let m = load_manifold(&a.source)?;
    let precision = Precision::new(a.common.precision);
    let sol = solve_kr_soliton(&m, &KrConfig::with_precision(precision))?;
    let digits = a.common.precision as usize;
    let small = |r: &BigRational| to_scientific(r, 6);
    let samples = a
        .samples
        .map(|n| KrProfile::new(&m, sol.tau.clone(), precision).samples(n as usize));
    Ok(match a.common.format {
        Format::Json => {
            let mut v = json!({
                "schema": "mabuchi-kr-soliton",
                "version": 1,
                "manifold": m.describe(),
                "precision_digits": digits,
                "tau": to_decimal(&sol.tau, digits),
                "residual": small(&sol.residual),
                "residual_doubled_precision": small(&sol.residual_doubled),
                "bracket": [to_decimal(&sol.bracket.0, digits), to_decimal(&sol.bracket.1, digits)],
                "bisection_steps": sol.bisection_steps,
                "newton_steps": sol.newton_steps,
            });
            if let Some(s) = &samples {
                v["samples"] = s
                    .iter()
                    .map(|(x, y)| json!({"x": x.to_string(), "theta": to_decimal(y, digits)}))
                    .collect();
            }
            pretty(&v)
        }
        Format::Csv => match &samples {
            Some(s) => {
                let mut rows = vec![vec!["x".to_string(), "theta_decimal".to_string()]];
                for (x, y) in s {
                    rows.push(vec![x.to_string(), to_decimal(y, digits)]);
                }
                csv_lines(rows)
            }
            None => csv_lines([
                vec!["manifold", "precision", "tau", "residual"]
                    .into_iter()
                    .map(String::from)
                    .collect::<Vec<_>>(),
                vec![
                    m.describe(),
                    digits.to_string(),
                    to_decimal(&sol.tau, digits),
                    small(&sol.residual),
                ],
            ]),
        },
        Format::Table => {
            let mut out = table(&[
                ("manifold".into(), m.describe()),
                ("precision (digits)".into(), digits.to_string()),
                ("tau".into(), to_decimal(&sol.tau, digits)),
                ("|Fut(tau)|".into(), small(&sol.residual)),
                (
                    "|Fut(tau)| at 2x precision".into(),
                    small(&sol.residual_doubled),
                ),
                (
                    "steps (bisection, Newton)".into(),
                    format!("{}, {}", sol.bisection_steps, sol.newton_steps),
                ),
            ]);
            if let Some(s) = &samples {
                out.push('\n');
                let mut rows = vec![vec!["x".to_string(), "theta_decimal".to_string()]];
                for (x, y) in s {
                    rows.push(vec![x.to_string(), to_decimal(y, TABLE_DIGITS)]);
                }
                out.push_str(&csv_lines(rows));
            }
            out
        }
    })
}
