//! Group cocycles on volume-preserving and symplectic diffeomorphisms of tori
//! built from simplices in the fibers of metrics and complex structures.
//!
//! The main object is the bounded area cocycle [`delta2`]: for a field `J0` of
//! compatible complex structures on `T^2` it integrates the signed hyperbolic
//! area of the triangle `(J0, f1_* J0, (f1 f2)_* J0)` over the torus. On linear
//! maps with a constant `J0` it reduces to [`sl2z_delta`].
//!
//! The formal boundary of a chain `sum a_j (h_j, k_j)` is
//! `sum a_j ([h_j k_j] - [h_j] - [k_j])`.

mod chain;
mod delta;
mod simplex;

pub use chain::{
    chain_pairing, l1_certificate, realize, reduce_word, sensitivity_probe, Boundary, Certificate,
    ChainTerm, L1Chain, TermValue, Verdict,
};
pub use delta::{
    cocycle_defect, delta2, sl2z_delta, CocycleReport, DefectReport, Resolution, ROUNDOFF_FLOOR,
};
pub use simplex::{simplex_integrate, FormKind, Join, SimplexBase, SimplexSpec};
