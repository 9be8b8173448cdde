//! Exact-arithmetic invariants of lens spaces: Heegaard Floer correction
//! terms, Casson-Walker invariants, and the lens-space surgery obstruction,
//! plus the censuses built on top of them.
//!
//! Everything is computed over exact rationals ([`Rational`], backed by
//! arbitrary-precision integers); there is no floating point anywhere.

pub mod casson_walker;
pub mod census;
pub mod d_invariant;
pub mod error;
pub mod exact_arith;
pub mod lens_space;
pub mod obstruction;

pub use casson_walker::{
    dcw_check, dcw_check_with, delta, lambda, lambda_cf, lambda_rec, LambdaMethod, LambdaValue,
};
pub use census::{
    dbound_scan, dbound_scan_p, sharpness_case, sharpness_family, square_census_q2,
    square_census_q3, table1, torus_census, verify_dbound, verify_dcw, verify_dcw_p,
    CensusRecord, SharpnessRecord, Table1Row, TorusSlopeRecord,
};
pub use d_invariant::{
    d, d_closed, d_multiset, e_invariant, slot_range, DCalc, DRow, DTable, EVector,
};
pub use error::{Error, Result};
pub use exact_arith::{
    exact_sqrt, gcd, hj_eval, hj_expand, hj_expand_rle, mod_inverse, CFExpansion, Rational,
};
pub use lens_space::{enumerate_classes, LensSpace, SpincLabel};
pub use obstruction::{
    d_borromean, feasible_genera, froyshov_cap, square_obstruction_q2, square_obstruction_q3,
    theorem1_check, FeasibilityReport, HVector, SquareVerdict, Theorem1Verdict, Witness,
};
