use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::torusfield::{ConformalGeometry, ConformalMetric, FourierField, GridField, Rank};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Identity54 {
    /// `int Tr J [H_f, J] [H_h, J] d area`.
    pub lhs: f64,
    /// `-int K {f, h} d area`.
    pub rhs: f64,
    pub residual: f64,
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// Both sides of the curvature identity for `g = exp(A) (dx^2 + dy^2)` on a
/// grid with `side` points per axis. `J` is the rotation by +90 degrees and
/// `H_f` the Hessian `(1,1)` tensor of the metric.
pub fn identity54_check(
    m: &ConformalMetric,
    f: &FourierField,
    h: &FourierField,
    side: usize,
) -> Result<Identity54> {
    if f.dim() != 2 || h.dim() != 2 || f.rank() != Rank::Scalar || h.rank() != Rank::Scalar {
        return Err(Error::domain(
            "the identity takes two scalar functions on T^2",
        ));
    }
    let geo = ConformalGeometry::new(m, side)?;
    let j = ConformalGeometry::complex_structure();
    let (hf, hh) = (geo.hessian(f)?, geo.hessian(h)?);
    let shape = [side, side];
    let left = GridField::from_fn(2, &shape, Rank::Scalar, |p, _| {
        let (a, b) = (hf.matrix_at(p), hh.matrix_at(p));
        vec![(&j * commutator(&a, &j) * commutator(&b, &j)).trace()]
    })?;
    let (k, pb) = (geo.curvature(), geo.poisson(f, h)?);
    let right = GridField::from_fn(2, &shape, Rank::Scalar, |p, _| {
        vec![-k.value(p, 0) * pb.value(p, 0)]
    })?;
    let lhs = geo.integrate_area(&left)?;
    let rhs = geo.integrate_area(&right)?;
    Ok(Identity54 {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}
