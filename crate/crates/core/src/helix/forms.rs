use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::liecoc::DivFreeField;
use crate::torusfield::{
    bracket, combine, curl_inverse, inner_product, resolving_side, FourierField, Rank,
};

/// `Omega(X, Y, Z) = BRACKET_SIGN * omega(X, Y, Z)` for the usual
/// vector-field bracket `[X, Y] = (X.grad) Y - (Y.grad) X`. Measured by
/// `lemma65_check` and fixed here; `[X, Y] = -curl(X x Y)` for
/// divergence-free fields explains the value.
pub const BRACKET_SIGN: f64 = -1.0;

/// Values below this are treated as zero when forming ratios.
const RATIO_FLOOR: f64 = 1e-12;
/// Relative roundoff allowed in the mean of a bracket.
const MEAN_TOL: f64 = 1e-12;

fn check_t3(x: &FourierField) -> Result<()> {
    if x.dim() != 3 || x.rank() != Rank::Vector(3) {
        return Err(Error::domain("expected a vector field on T^3"));
    }
    Ok(())
}

fn check_zero_mean(x: &FourierField) -> Result<()> {
    for (component, mean) in x.mean().into_iter().enumerate() {
        if mean != 0.0 {
            return Err(Error::HarmonicObstruction { component, mean });
        }
    }
    Ok(())
}

/// `[X, Y]` with its mean checked against roundoff and then removed; the
/// mean vanishes exactly for zero-mean divergence-free fields.
fn zero_mean_bracket(x: &DivFreeField, y: &DivFreeField) -> Result<DivFreeField> {
    let mut b = bracket(x.field(), y.field())?;
    let scale = 2.0
        * PI
        * (1 + x.bandlimit() + y.bandlimit()).pow(3) as f64
        * x.field().max_coeff()
        * y.field().max_coeff();
    for (component, mean) in b.mean().into_iter().enumerate() {
        if mean.abs() > MEAN_TOL * scale {
            return Err(Error::HarmonicObstruction { component, mean });
        }
        b.set_coeff(component, &[0, 0, 0], Complex64::new(0.0, 0.0))?;
    }
    DivFreeField::new(b)
}

/// `<X, Y> = int A_X . Y dV` with `curl A_X = X`.
pub fn helicity_pair(x: &DivFreeField, y: &DivFreeField) -> Result<f64> {
    check_t3(x.field())?;
    check_t3(y.field())?;
    check_zero_mean(y.field())?;
    inner_product(&curl_inverse(x.field())?, y.field())
}

/// `<X, X>`, the asymptotic self-linking of `X`.
pub fn helicity(x: &DivFreeField) -> Result<f64> {
    helicity_pair(x, x)
}

/// `Omega(X, Y, Z) = <[X, Y], Z>`.
pub fn cartan_omega(x: &DivFreeField, y: &DivFreeField, z: &DivFreeField) -> Result<f64> {
    for f in [x, y, z] {
        check_t3(f.field())?;
        check_zero_mean(f.field())?;
    }
    helicity_pair(&zero_mean_bracket(x, y)?, z)
}

/// `omega(X, Y, Z) = int det(X | Y | Z) dV`, sampled on a grid that
/// integrates the band-limited determinant exactly.
pub fn evaluation_3form(x: &FourierField, y: &FourierField, z: &FourierField) -> Result<f64> {
    for f in [x, y, z] {
        check_t3(f)?;
    }
    let side = resolving_side(x.bandlimit() + y.bandlimit() + z.bandlimit());
    let (gx, gy, gz) = (x.sample(side)?, y.sample(side)?, z.sample(side)?);
    let det = crate::torusfield::GridField::from_fn(3, &[side; 3], Rank::Scalar, |p, _| {
        let (a, b, c) = (gx.values(p), gy.values(p), gz.values(p));
        vec![
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]),
        ]
    })?;
    det.integrate()
}

/// [`evaluation_3form`] as `int (X x Y) . Z` with the cross product formed
/// in coefficient space and the pairing by Parseval.
pub fn evaluation_3form_spectral(
    x: &FourierField,
    y: &FourierField,
    z: &FourierField,
) -> Result<f64> {
    for f in [x, y, z] {
        check_t3(f)?;
    }
    let cross = combine(
        &[x, y],
        Rank::Vector(3),
        x.bandlimit() + y.bandlimit(),
        |v| {
            let (a, b) = (&v[0], &v[1]);
            vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        },
    )?;
    inner_product(&cross, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma65 {
    pub omega_eval: f64,
    pub cartan_eval: f64,
    /// `cartan_eval / omega_eval`, absent when both vanish.
    pub ratio: Option<f64>,
}

impl Lemma65 {
    /// `|cartan_eval - BRACKET_SIGN * omega_eval|`.
    pub fn residual(&self) -> f64 {
        (self.cartan_eval - BRACKET_SIGN * self.omega_eval).abs()
    }
}

/// Both 3-forms on one triple of zero-mean divergence-free fields.
pub fn lemma65_check(x: &DivFreeField, y: &DivFreeField, z: &DivFreeField) -> Result<Lemma65> {
    let cartan_eval = cartan_omega(x, y, z)?;
    let omega_eval = evaluation_3form_spectral(x.field(), y.field(), z.field())?;
    let ratio = if omega_eval.abs() > RATIO_FLOOR {
        Some(cartan_eval / omega_eval)
    } else {
        None
    };
    Ok(Lemma65 {
        omega_eval,
        cartan_eval,
        ratio,
    })
}
