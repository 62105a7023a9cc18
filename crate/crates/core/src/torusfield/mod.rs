//! Band-limited periodic fields on `T^N = R^N / Z^N` with the volume form
//! `dx_1 ... dx_N` of total volume 1.
//!
//! [`FourierField`] is the exact representation; [`GridField`] holds samples
//! on a uniform power-of-two grid. Nonlinear operations evaluate on a grid
//! with at least `2 (sum of bandlimits) + 1` points per axis and transform
//! back, which makes them exact for band-limited inputs. All grid reductions
//! use a fixed pairwise order.

mod conformal;
mod fft;
mod fourier;
mod grid;
mod ops;
mod refine;
mod serial;

pub use conformal::{Christoffels, ConformalGeometry, ConformalMetric};
pub use fourier::{FourierField, Rank};
pub use grid::{resolving_side, GridField};
pub use ops::{
    bracket, combine, curl, curl_inverse, divergence, divergence_defect, gradient,
    hamiltonian_field, inner_product, jacobian, linear_pushforward, product, random_div_free,
    random_hamiltonian, DIV_TOL,
};
pub use refine::{refine, refine_estimate, Estimate};
