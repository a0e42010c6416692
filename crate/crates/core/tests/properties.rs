mod common;

use common::{general_manifold, pn_tuple};
use mabuchi_core::exact::{int, parse_rational, rat, sturm_roots_in_open_interval};
use mabuchi_core::pn_bundles::{pn_verdict, ScanBounds};
use mabuchi_core::profile::{barycenter, primitive_identity_holds, soliton_ode_holds};
use mabuchi_core::{
    build_profile, classify, exp_futaki, futaki_pairing, grid_scan, mabuchi_forms, mabuchi_weight,
    moments, projection_coefficients, verify_profile, AdmissibleManifold, BigRational, Manifest,
    PnBundleParams, Precision, Weight,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn i_value(m: &AdmissibleManifold) -> BigRational {
    let b = moments(&m.characteristic_polynomial()).unwrap();
    let w = m.w();
    &b.b1 - w * &b.b0 + w * &b.b1 - &b.b2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_closed_forms_agree(m in general_manifold()) {
        let b = moments(&m.characteristic_polynomial()).unwrap();
        let f = mabuchi_forms(&b, m.w());
        prop_assert_eq!(f.quotient, f.one_plus);
    }

    #[test]
    fn projection_solves_both_relations(m in general_manifold()) {
        let b = moments(&m.characteristic_polynomial()).unwrap();
        let pc = projection_coefficients(&m).unwrap();
        prop_assert!((&pc.alpha * &b.b1 + &pc.beta * &b.b0).is_zero());
        prop_assert_eq!(&pc.alpha * &b.b2 + &pc.beta * &b.b1, &b.b1 - m.w() * &b.b0);
        let at_ends = std::cmp::max(&pc.beta - &pc.alpha, &pc.beta + &pc.alpha);
        prop_assert_eq!(&at_ends, &(pc.alpha.abs() + &pc.beta));
        prop_assert_eq!(at_ends, classify(&m).unwrap().mabuchi_constant);
    }

    #[test]
    fn moments_satisfy_cauchy_schwarz(m in general_manifold()) {
        let b = moments(&m.characteristic_polynomial()).unwrap();
        prop_assert!(b.b0.is_positive() && b.b2.is_positive());
        prop_assert!(b.gram().is_positive());
    }

    #[test]
    fn sign_of_i_tracks_mabuchi_constant(m in general_manifold()) {
        let r = classify(&m).unwrap();
        if r.futaki.is_positive() {
            let i = i_value(&m);
            let diff = &r.mabuchi_constant - BigRational::one();
            prop_assert_eq!(i.signum(), diff.signum());
        }
    }

    #[test]
    fn verdicts_follow_exact_comparisons(m in general_manifold()) {
        let r = classify(&m).unwrap();
        prop_assert_eq!(r.ke_exists, r.futaki.is_zero());
        prop_assert_eq!(r.mabuchi_soliton_exists, r.mabuchi_constant < BigRational::one());
        if r.ke_exists {
            prop_assert!(r.mabuchi_constant.is_zero());
            prop_assert!(r.mabuchi_soliton_exists);
        }
    }

    #[test]
    fn characteristic_polynomial_shape(m in general_manifold()) {
        let p = m.characteristic_polynomial();
        prop_assert_eq!(sturm_roots_in_open_interval(&p, &int(-1), &int(1)), 0);
        prop_assert!(p.eval(&int(0)).is_positive());
        prop_assert_eq!(p.root_multiplicity(&int(-1)), m.d0() as usize);
        prop_assert_eq!(p.root_multiplicity(&int(1)), m.d_inf() as usize);
        let expected: u32 = m.d0() + m.d_inf() + m.factors().iter().map(|f| f.dim()).sum::<u32>();
        prop_assert_eq!(p.degree(), Some(expected as usize));
    }

    #[test]
    fn manifest_round_trip(m in general_manifold()) {
        let text = Manifest::from(&m).to_json();
        prop_assert_eq!(Manifest::from_json(&text).unwrap().build().unwrap(), m);
    }

    #[test]
    fn mabuchi_weight_kills_futaki_and_certifies(m in general_manifold()) {
        match mabuchi_weight(&m) {
            Ok(u) => {
                prop_assert!(u.is_positive());
                let min = u.min_on_interval().unwrap();
                prop_assert_eq!(min, BigRational::one() - classify(&m).unwrap().mabuchi_constant);
                prop_assert!(futaki_pairing(&m, &u).unwrap().is_zero());
                let prof = build_profile(&m, &u).unwrap();
                prop_assert!(verify_profile(&prof).all_passed());
                let poly = u.as_polynomial().unwrap();
                prop_assert!(primitive_identity_holds(&m, &poly, &prof));
                prop_assert!(soliton_ode_holds(&m, &poly, &prof));
            }
            Err(e) => {
                let not_positive = matches!(e, mabuchi_core::Error::NotPositive { .. });
                prop_assert!(not_positive);
                prop_assert!(!classify(&m).unwrap().mabuchi_soliton_exists);
            }
        }
    }

    #[test]
    fn exp_futaki_at_zero_is_the_exact_pairing(m in general_manifold()) {
        let exact = futaki_pairing(&m, &Weight::One).unwrap();
        prop_assert_eq!(exp_futaki(&m, &BigRational::zero(), Precision::default()), exact);
    }

    #[test]
    fn pn_verdicts_hold_beyond_the_default_grid((n, k, d0, d_inf) in pn_tuple(9)) {
        let v = pn_verdict(&PnBundleParams::new(n, k, d0, d_inf).unwrap()).unwrap();
        prop_assert_eq!(v.closed_form_exists, v.computed_exists);
        prop_assert!(v.futaki.is_positive());
        prop_assert!(v.mabuchi_constant != BigRational::one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn barycenter_strictly_increasing(m in general_manifold()) {
        let p = Precision::new(20);
        let taus: Vec<BigRational> = (-8..=8).map(|i| rat(i, 2)).collect();
        let values: Vec<BigRational> = taus.iter().map(|t| barycenter(&m, t, p)).collect();
        for w in values.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
    }
}

#[test]
fn scan_csv_round_trips_rationals() {
    let report = grid_scan(ScanBounds {
        n_max: 4,
        k_max: 2,
        d0_max: 2,
        d_inf_max: 2,
    })
    .unwrap();
    let csv = report.to_csv();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), report.verdicts.len());
    for (row, v) in rows.iter().zip(&report.verdicts) {
        assert_eq!(parse_rational(&row[4]).unwrap(), v.i);
        assert_eq!(parse_rational(&row[5]).unwrap(), v.mabuchi_constant);
        assert_eq!(&row[7] == "true", v.computed_exists);
    }
}

#[test]
fn report_json_round_trips_rationals() {
    for m in common::random_general_manifolds(10, 7) {
        let r = classify(&m).unwrap();
        let v = r.to_json(None);
        assert_eq!(
            parse_rational(v["M_X"].as_str().unwrap()).unwrap(),
            r.mabuchi_constant
        );
        assert_eq!(
            parse_rational(v["futaki"].as_str().unwrap()).unwrap(),
            r.futaki
        );
        assert_eq!(
            parse_rational(v["alpha"].as_str().unwrap()).unwrap(),
            r.projection.alpha
        );
    }
}
