use nalgebra::DMatrix;
use serde::Serialize;

use super::fields::DivFreeField;
use crate::error::{Error, Result};
use crate::numerics::{factorial, pairwise_sum};
use crate::symspace::{alternating_trace, alternating_trace_prefixed, SiegelJ};
use crate::torusfield::{
    bracket, combine, jacobian, resolving_side, ConformalGeometry, ConformalMetric, FourierField,
    GridField, Rank,
};

/// Compatibility tolerance for sampled structure fields.
const J_TOL: f64 = 1e-8;
/// Relative roundoff allowance added to two-resolution estimates.
const ROUNDOFF: f64 = 1e-14;
const MAX_SIDE: usize = 1024;

/// Reference metric for the odd cocycles.
#[derive(Debug, Clone, PartialEq)]
pub enum LieMetric {
    Flat,
    /// `exp(A) (dx^2 + dy^2)` on `T^2`.
    Conformal(ConformalMetric),
}

impl LieMetric {
    fn bandlimit(&self) -> usize {
        match self {
            LieMetric::Flat => 0,
            LieMetric::Conformal(m) => m.exponent().bandlimit(),
        }
    }
}

fn check_fields(fields: &[DivFreeField]) -> Result<usize> {
    let dim = fields
        .first()
        .map(|f| f.dim())
        .ok_or_else(|| Error::domain("no fields given"))?;
    if fields.iter().any(|f| f.dim() != dim) {
        return Err(Error::domain("fields live on different tori"));
    }
    Ok(dim)
}

/// `nabla X + (nabla X)^*` sampled at `side`. For a conformal metric the
/// adjoint `g^-1 M^T g` is the plain transpose.
fn symmetrized(metric: &LieMetric, x: &DivFreeField, side: usize) -> Result<Vec<DMatrix<f64>>> {
    let grid = match metric {
        LieMetric::Flat => jacobian(x.field())?.sample(side)?,
        LieMetric::Conformal(m) => {
            if x.dim() != 2 {
                return Err(Error::domain("conformal metrics live on T^2"));
            }
            ConformalGeometry::new(m, side)?.covariant_derivative(x.field())?
        }
    };
    Ok(grid
        .matrices()
        .into_iter()
        .map(|m| &m + m.transpose())
        .collect())
}

fn mean_over_grid(dim: usize, side: usize, f: impl Fn(usize) -> f64 + Sync) -> Result<f64> {
    GridField::from_fn(dim, &vec![side; dim], Rank::Scalar, |p, _| vec![f(p)])?.integrate()
}

/// Smallest admissible grid side on which [`psi_odd_at`] is exact.
pub fn psi_grid_side(metric: &LieMetric, fields: &[DivFreeField]) -> Result<usize> {
    let band = fields
        .iter()
        .map(|x| x.bandlimit() + metric.bandlimit())
        .sum();
    let mut side = resolving_side(band);
    if let LieMetric::Conformal(m) = metric {
        while ConformalGeometry::new(m, side).is_err() {
            side *= 2;
            if side > MAX_SIDE {
                return Err(Error::numeric(
                    "conformal factor is not resolved on any admissible grid",
                ));
            }
        }
    }
    Ok(side)
}

fn check_psi_degree(d: usize) -> Result<()> {
    if d < 5 || d % 2 == 0 {
        return Err(Error::domain(format!(
            "odd cocycle needs an odd number >= 5 of fields, got {d}"
        )));
    }
    Ok(())
}

/// `psi(X_1, ..., X_d) = int_M (1/d!) Alt Tr prod_j (nabla X_j + (nabla X_j)^*) nu`
/// on the grid with `side` points per axis.
pub fn psi_odd_at(metric: &LieMetric, fields: &[DivFreeField], side: usize) -> Result<f64> {
    check_psi_degree(fields.len())?;
    let dim = check_fields(fields)?;
    let sym = fields
        .iter()
        .map(|x| symmetrized(metric, x, side))
        .collect::<Result<Vec<_>>>()?;
    mean_over_grid(dim, side, |p| {
        let mats: Vec<DMatrix<f64>> = sym.iter().map(|s| s[p].clone()).collect();
        alternating_trace(&mats)
    })
}

/// [`psi_odd_at`] on a grid that integrates the band-limited integrand exactly.
pub fn psi_odd(metric: &LieMetric, fields: &[DivFreeField]) -> Result<f64> {
    psi_odd_at(metric, fields, psi_grid_side(metric, fields)?)
}

/// `(L_X J)^a_b = X^c d_c J^a_b - (d_c X^a) J^c_b + J^a_c d_b X^c`.
pub fn lie_derivative_j(x: &DivFreeField, j: &FourierField) -> Result<FourierField> {
    let n = x.dim();
    if j.dim() != n || j.rank() != Rank::Matrix(n, n) {
        return Err(Error::domain(
            "structure field must be an N x N matrix field on T^N",
        ));
    }
    let dx = jacobian(x.field())?;
    let dj: Vec<FourierField> = (0..n).map(|c| j.derivative(c)).collect();
    let mut inputs: Vec<&FourierField> = vec![x.field(), &dx, j];
    inputs.extend(dj.iter());
    combine(
        &inputs,
        Rank::Matrix(n, n),
        x.bandlimit() + j.bandlimit(),
        |v| {
            let (xv, dxv, jv) = (&v[0], &v[1], &v[2]);
            let mut out = vec![0.0; n * n];
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for c in 0..n {
                        s += xv[c] * v[3 + c][a * n + b];
                        s -= dxv[a * n + c] * jv[c * n + b];
                        s += jv[a * n + c] * dxv[c * n + b];
                    }
                    out[a * n + b] = s;
                }
            }
            out
        },
    )
}

fn check_structure(j: &FourierField, side: usize) -> Result<Vec<DMatrix<f64>>> {
    let mats = j.sample(side)?.matrices();
    for m in &mats {
        SiegelJ::with_tolerance(m.clone(), J_TOL)?;
    }
    Ok(mats)
}

/// Smallest grid side on which [`phi_even_at`] is exact.
pub fn phi_grid_side(j: &FourierField, fields: &[DivFreeField]) -> usize {
    let band = j.bandlimit()
        + fields
            .iter()
            .map(|x| x.bandlimit() + j.bandlimit())
            .sum::<usize>();
    resolving_side(band)
}

/// `phi(X_1, ..., X_d) = int_M (1/d!) Alt Tr J prod_j L_{X_j} J w^n` with
/// `w^n = n! dx` on `T^{2n}`. `J` must be compatible in the sense
/// `J^T Omega > 0` at every sample and the fields must preserve `w`.
pub fn phi_even_at(j: &FourierField, fields: &[DivFreeField], side: usize) -> Result<f64> {
    let d = fields.len();
    if d == 0 || d % 2 == 1 {
        return Err(Error::domain(format!(
            "even cocycle needs an even number of fields, got {d}"
        )));
    }
    let dim = check_fields(fields)?;
    if dim % 2 == 1 || j.dim() != dim {
        return Err(Error::domain(
            "even cocycles need a structure field on an even torus",
        ));
    }
    for x in fields {
        if !x.is_symplectic()? {
            return Err(Error::domain("field does not preserve the symplectic form"));
        }
    }
    let js = check_structure(j, side)?;
    let ls = fields
        .iter()
        .map(|x| Ok(lie_derivative_j(x, j)?.sample(side)?.matrices()))
        .collect::<Result<Vec<_>>>()?;
    let volume = factorial(dim / 2);
    mean_over_grid(dim, side, |p| {
        let mats: Vec<DMatrix<f64>> = ls.iter().map(|l| l[p].clone()).collect();
        volume * alternating_trace_prefixed(Some(&js[p]), &mats)
    })
}

pub fn phi_even(j: &FourierField, fields: &[DivFreeField]) -> Result<f64> {
    phi_even_at(j, fields, phi_grid_side(j, fields))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LieCocycle {
    Psi(LieMetric),
    /// `phi` for the given structure field.
    Phi(FourierField),
}

impl LieCocycle {
    fn side(&self, fields: &[DivFreeField]) -> Result<usize> {
        match self {
            LieCocycle::Psi(m) => psi_grid_side(m, fields),
            LieCocycle::Phi(j) => Ok(phi_grid_side(j, fields)),
        }
    }

    fn eval_at(&self, fields: &[DivFreeField], side: usize) -> Result<f64> {
        match self {
            LieCocycle::Psi(m) => psi_odd_at(m, fields, side),
            LieCocycle::Phi(j) => phi_even_at(j, fields, side),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeDefect {
    pub value: f64,
    pub coarse_value: f64,
    /// `|value - coarse_value| + 1e-14 sum |terms|`.
    pub error_estimate: f64,
    /// Sum of the absolute values of the bracket terms.
    pub scale: f64,
}

/// Chevalley-Eilenberg differential with trivial coefficients,
/// `sum_{i<j} (-1)^{i+j} c([X_i, X_j], X_0, ..., X_i^, ..., X_j^, ...)`,
/// evaluated at each term's exact grid and at twice that grid.
pub fn ce_defect(cocycle: &LieCocycle, fields: &[DivFreeField]) -> Result<CeDefect> {
    check_fields(fields)?;
    let m = fields.len();
    let (mut coarse, mut fine, mut scale) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..m {
        for k in i + 1..m {
            let b = DivFreeField::new(bracket(fields[i].field(), fields[k].field())?)?;
            let mut args = vec![b];
            args.extend(
                fields
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != i && *t != k)
                    .map(|(_, x)| x.clone()),
            );
            let sign = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
            let side = cocycle.side(&args)?;
            let c = cocycle.eval_at(&args, side)?;
            let f = cocycle.eval_at(&args, 2 * side)?;
            coarse.push(sign * c);
            fine.push(sign * f);
            scale.push(f.abs());
        }
    }
    let (c, f, s) = (
        pairwise_sum(&coarse),
        pairwise_sum(&fine),
        pairwise_sum(&scale),
    );
    Ok(CeDefect {
        value: f,
        coarse_value: c,
        error_estimate: (f - c).abs() + ROUNDOFF * s,
        scale: s,
    })
}
