//! Helicity and the 3-forms on divergence-free fields of `T^3`, checks on
//! `S^3` as a Lie group, and asymptotic cycles of isotopies.
//!
//! `T^3` stands in for a rational homology sphere: a divergence-free field
//! `X` has exact `X _| nu` precisely when every component has zero mean, and
//! [`helicity`] reports a harmonic obstruction otherwise.
//!
//! In `int_M nu(X(p), Y(p), Z(p)) d nu(p)` the scalar `nu(X, Y, Z)` is
//! integrated against the volume measure.

mod cycles;
mod forms;
mod s3;

pub use cycles::{
    asymptotic_cycle, asymptotic_cycle_at, default_cycle_side, schwartzman_pairing,
    schwartzman_pairing_at, HomologyVector,
};
pub use forms::{
    cartan_omega, evaluation_3form, evaluation_3form_spectral, helicity, helicity_pair,
    lemma65_check, Lemma65, BRACKET_SIGN,
};
pub use s3::{s3_checks, s3_checks_with, s3_volume_period, S3Point, S3Report};
