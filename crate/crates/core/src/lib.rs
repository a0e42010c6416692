//! Exact existence criteria for Kähler-Einstein metrics, Mabuchi solitons
//! and other weighted solitons on Fano admissible manifolds.
//!
//! Everything reduces to polynomial integrals over the fibre interval
//! `[-1, 1]`, evaluated in exact rational arithmetic. Only the Kähler-Ricci
//! soliton parameter, which involves `e^{τx}`, is computed numerically.

pub mod admissible;
pub mod classify;
pub mod error;
pub mod exact;
pub mod pn_bundles;
pub mod profile;
pub mod rational_str;

pub use admissible::{fano_check, AdmissibleManifold, BaseFactor, FanoCheck, Manifest, Sign};
pub use classify::{
    classify, futaki_pairing, mabuchi_constant, mabuchi_forms, moments, projection_coefficients,
    ClassificationReport, MabuchiForms, Moments, ProjectionCoefficients,
};
pub use error::{Error, Result};
pub use exact::{parse_rational, to_decimal, to_scientific, BigRational, Polynomial};
pub use pn_bundles::{
    grid_scan, grid_scan_serial, PnBundleParams, PnVerdict, ScanBounds, ScanReport,
};
pub use profile::{
    build_profile, exp_futaki, mabuchi_weight, solve_kr_soliton, verify_profile, KrConfig,
    KrProfile, KrSoliton, Precision, Profile, ProfileVerification, Weight,
};
