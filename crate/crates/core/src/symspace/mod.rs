//! Geometry of the model fibers: unit-determinant positive symmetric
//! matrices `SL_N(R)/SO(N)`, compatible complex structures
//! `Sp(2n,R)/U(n)`, and the hyperbolic plane chart of the `n = 1` fiber.
//!
//! Normalisations fixed here and used throughout the crate:
//!
//! * the odd invariant forms are `Alt Tr prod(g^-1 h_j)` divided by `degree!`;
//!   any other normalisation differs by one positive constant per degree;
//! * the symplectic form on `R^{2n}` is `w(u, v) = u^T Omega v` with `Omega`
//!   block diagonal `[[0, 1], [-1, 0]]`;
//! * a compatible `J` corresponds to the positive symmetric symplectic matrix
//!   `G = J^T Omega`, and back through `J = Omega G`;
//! * for `n = 1` the half-plane chart sends `G = (1/v) [[1, -u], [-u, u^2 + v^2]]`
//!   to `u + iv`, so that pushing `J` forward by `A` in `SL(2,R)` acts on the
//!   chart by the standard Mobius map `(a z + b) / (c z + d)`;
//! * in this chart `Tr(J A B) = 2 dA_hyp(A, B)`, twice the hyperbolic area form
//!   `du dv / v^2` with the orientation `du ^ dv`.

mod forms;
mod halfplane;
mod siegel;
mod spd;

pub(crate) use forms::vanishing_warning;
pub use forms::{alternating_trace, alternating_trace_prefixed, borel_odd_form, FormEval};
pub use halfplane::{
    halfplane_to_j, hyp_area_signed, hyperbolic_distance, j_to_halfplane, mobius, HalfPlanePoint,
    AREA_CONVENTION,
};
pub use siegel::{
    geodesic_siegel, kaehler_form, standard_omega, JTangent, SiegelJ, KAEHLER_PER_AREA,
};
pub use spd::{
    geodesic_spd, straight_segment, GeodesicKernel, SpdPoint, StraightPoint, SymTangent,
};
