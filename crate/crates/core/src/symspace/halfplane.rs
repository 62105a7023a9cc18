use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::siegel::{standard_omega, SiegelJ};
use crate::error::{Error, Result};

/// Orientation recorded with every signed area: counterclockwise triangles in
/// the `(u, v)` chart are positive.
pub const AREA_CONVENTION: &str = "halfplane-ccw-positive/v1";

/// Points closer than this (in the invariant `|z - w|^2 / (v_z v_w)`) count as
/// coincident.
const COINCIDENT: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub u: f64,
    pub v: f64,
}

impl HalfPlanePoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !u.is_finite() || !v.is_finite() {
            return Err(Error::domain(format!(
                "half-plane point needs v > 0, got ({u}, {v})"
            )));
        }
        Ok(HalfPlanePoint { u, v })
    }

    pub fn i() -> Self {
        HalfPlanePoint { u: 0.0, v: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// Chart of the `n = 1` fiber: `G = J^T Omega = (1/v) [[1, -u], [-u, u^2 + v^2]]`.
pub fn j_to_halfplane(j: &SiegelJ) -> Result<HalfPlanePoint> {
    if j.half_dim() != 1 {
        return Err(Error::domain("half-plane chart needs a 2x2 structure"));
    }
    let g = j.metric();
    let g11 = g[(0, 0)];
    HalfPlanePoint::new(-g[(0, 1)] / g11, 1.0 / g11)
}

pub fn halfplane_to_j(z: HalfPlanePoint) -> Result<SiegelJ> {
    let HalfPlanePoint { u, v } = HalfPlanePoint::new(z.u, z.v)?;
    let g = DMatrix::from_row_slice(2, 2, &[1.0 / v, -u / v, -u / v, (u * u + v * v) / v]);
    Ok(SiegelJ::from_trusted(standard_omega(1) * g))
}

/// `(a z + b) / (c z + d)` for `m = [[a, b], [c, d]]` with positive determinant.
/// This is the action induced on the chart by `J -> m J m^-1`.
pub fn mobius(m: &DMatrix<f64>, z: HalfPlanePoint) -> Result<HalfPlanePoint> {
    if m.shape() != (2, 2) || m.determinant() <= 0.0 {
        return Err(Error::domain(
            "Mobius action needs a 2x2 matrix with positive determinant",
        ));
    }
    let z = z.to_complex();
    let w = (z * m[(0, 0)] + m[(0, 1)]) / (z * m[(1, 0)] + m[(1, 1)]);
    HalfPlanePoint::new(w.re, w.im)
}

fn closeness(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm_sqr() / (a.im * b.im)
}

/// Signed interior angle at `a` from the geodesic towards `b` to the geodesic
/// towards `c`, read off in the disk model centred at `a`.
fn signed_angle(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let phi = |z: Complex64| (z - a) / (z - a.conj());
    (phi(c) / phi(b)).arg()
}

/// Signed hyperbolic area of the geodesic triangle `(z1, z2, z3)`, positive for
/// counterclockwise vertices. Degenerate triangles give 0.
pub fn hyp_area_signed(z1: HalfPlanePoint, z2: HalfPlanePoint, z3: HalfPlanePoint) -> f64 {
    let (a, b, c) = (z1.to_complex(), z2.to_complex(), z3.to_complex());
    if closeness(a, b) < COINCIDENT || closeness(b, c) < COINCIDENT || closeness(a, c) < COINCIDENT
    {
        return 0.0;
    }
    let sum = signed_angle(a, b, c) + signed_angle(b, c, a) + signed_angle(c, a, b);
    let s = if sum >= 0.0 { 1.0 } else { -1.0 };
    let area = s * PI - sum;
    // collinear configurations come out as +-(pi - pi) up to roundoff
    if area.abs() < 4.0 * f64::EPSILON * PI {
        0.0
    } else {
        area
    }
}

pub fn hyperbolic_distance(z: HalfPlanePoint, w: HalfPlanePoint) -> f64 {
    let d2 = (z.u - w.u).powi(2) + (z.v - w.v).powi(2);
    (1.0 + d2 / (2.0 * z.v * w.v)).acosh()
}
