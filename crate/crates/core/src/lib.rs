//! Desk-scale computation of cohomological invariants of the groups of
//! volume-preserving and symplectic diffeomorphisms of flat tori.
//!
//! The crate is organised bottom-up:
//!
//! * [`symspace`]: the model fibers `SL_N(R)/SO(N)` and `Sp(2n,R)/U(n)`,
//!   their geodesics, invariant forms and hyperbolic triangle areas.
//! * [`torusfield`]: band-limited Fourier fields on `T^N`, grid sampling,
//!   spectral calculus, quadrature and refinement error estimates.
//! * [`diffeo`]: volume-preserving maps of `T^N` as words in exactly
//!   invertible primitives, with pushforwards of metrics and complex structures.
//! * [`groupcoc`]: group cocycles built from geodesic simplices, the bounded
//!   area cocycle, and the l1-cycle pairing used for non-amenability certificates.
//! * [`liecoc`]: Lie-algebra cocycles on divergence-free and symplectic fields
//!   and the conformal-surface curvature identity.
//! * [`helix`]: helicity, the Cartan and evaluation 3-forms, `S^3` checks and
//!   asymptotic cycles.

pub mod diffeo;
pub mod error;
pub mod groupcoc;
pub mod helix;
pub mod liecoc;
pub mod numerics;
pub mod symspace;
pub mod torusfield;

pub use error::{Error, Result};
