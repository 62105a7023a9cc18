use nalgebra::DMatrix;
use serde::Serialize;

use super::simplex::{simplex_integrate, FormKind, Join, SimplexBase, SimplexSpec};
use crate::diffeo::{BaseJ, DiffeoWord, PushedJ};
use crate::error::{Error, Result};
use crate::symspace::{hyp_area_signed, j_to_halfplane, mobius, HalfPlanePoint, AREA_CONVENTION};
use crate::torusfield::{refine_estimate, GridField, Rank};

/// Absolute roundoff allowance added to every refinement estimate of an area
/// integral; the integrand is bounded by `pi`.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;

/// Coarse and fine grid sides used for the two-resolution error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub coarse: usize,
    pub fine: usize,
}

impl Resolution {
    pub fn new(coarse: usize, fine: usize) -> Result<Self> {
        if coarse < 4 || fine <= coarse || !coarse.is_power_of_two() || !fine.is_power_of_two() {
            return Err(Error::domain(format!(
                "grid sides must be powers of two >= 4 with coarse < fine, got {coarse},{fine}"
            )));
        }
        Ok(Resolution { coarse, fine })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    pub value: f64,
    pub error_estimate: f64,
    pub coarse_value: f64,
    /// Grid shapes of the coarse and fine evaluations.
    pub resolution: Vec<Vec<usize>>,
    pub convention_tag: String,
    /// Monte Carlo standard error, already included in `error_estimate`.
    pub statistical_error: Option<f64>,
    pub warning: Option<String>,
}

impl CocycleReport {
    pub(crate) fn from_values(coarse: f64, fine: f64, dim: usize, res: Resolution) -> Self {
        let est = refine_estimate(coarse, fine);
        CocycleReport {
            value: est.value,
            error_estimate: est.error_estimate + ROUNDOFF_FLOOR * (1.0 + fine.abs()),
            coarse_value: coarse,
            resolution: vec![vec![res.coarse; dim], vec![res.fine; dim]],
            convention_tag: AREA_CONVENTION.to_string(),
            statistical_error: None,
            warning: None,
        }
    }
}

fn area_mean(f1: &DiffeoWord, f12: &DiffeoWord, j0: &BaseJ, side: usize) -> Result<f64> {
    let p1 = PushedJ::new(f1, j0)?;
    let p2 = PushedJ::new(f12, j0)?;
    let g = GridField::try_from_fn(2, &[side, side], Rank::Scalar, |_, x| {
        let a = j_to_halfplane(&j0.at(x))?;
        let b = j_to_halfplane(&p1.at(x)?)?;
        let c = j_to_halfplane(&p2.at(x)?)?;
        Ok(vec![hyp_area_signed(a, b, c)])
    })?;
    g.integrate()
}

/// The bounded area cocycle
/// `delta(f1, f2) = int_M area(J0(x), (f1_* J0)(x), ((f1 f2)_* J0)(x)) dx`.
///
/// On `T^2` the fiber is the hyperbolic plane and the pointwise area is exact;
/// on `T^{2n}` the Kahler form is integrated over the geodesic triangle.
pub fn delta2(
    f1: &DiffeoWord,
    f2: &DiffeoWord,
    j0: &BaseJ,
    res: Resolution,
) -> Result<CocycleReport> {
    let dim = j0.torus_dim();
    if f1.dim() != dim || f2.dim() != dim {
        return Err(Error::domain(
            "words and base structure live on different tori",
        ));
    }
    if dim != 2 {
        let spec = SimplexSpec {
            join: Join::Geodesic,
            form: FormKind::Kaehler,
            ..SimplexSpec::default()
        };
        return simplex_integrate(
            &SimplexBase::Structure(j0),
            &[f1.clone(), f2.clone()],
            &spec,
            res,
        );
    }
    let f12 = f1.compose(f2)?;
    let coarse = area_mean(f1, &f12, j0, res.coarse)?;
    let fine = area_mean(f1, &f12, j0, res.fine)?;
    Ok(CocycleReport::from_values(coarse, fine, dim, res))
}

fn sl2z(m: &[Vec<i64>]) -> Result<DMatrix<f64>> {
    if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
        return Err(Error::domain("expected a 2x2 integer matrix"));
    }
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1 {
        return Err(Error::domain("matrix is not in SL(2,Z)"));
    }
    Ok(DMatrix::from_fn(2, 2, |i, j| m[i][j] as f64))
}

/// `area(i, A.i, AB.i)` for the Mobius action of `SL(2,Z)` on the half-plane.
pub fn sl2z_delta(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<f64> {
    let (ma, mb) = (sl2z(a)?, sl2z(b)?);
    let p = HalfPlanePoint::i();
    Ok(hyp_area_signed(
        p,
        mobius(&ma, p)?,
        mobius(&(&ma * &mb), p)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    /// `delta(f2,f3) - delta(f1 f2, f3) + delta(f1, f2 f3) - delta(f1, f2)`.
    pub defect: f64,
    /// Sum of the four error estimates.
    pub error_estimate: f64,
    pub terms: [f64; 4],
}

pub fn cocycle_defect(
    f1: &DiffeoWord,
    f2: &DiffeoWord,
    f3: &DiffeoWord,
    j0: &BaseJ,
    res: Resolution,
) -> Result<DefectReport> {
    let reports = [
        delta2(f2, f3, j0, res)?,
        delta2(&f1.compose(f2)?, f3, j0, res)?,
        delta2(f1, &f2.compose(f3)?, j0, res)?,
        delta2(f1, f2, j0, res)?,
    ];
    let terms = [
        reports[0].value,
        reports[1].value,
        reports[2].value,
        reports[3].value,
    ];
    Ok(DefectReport {
        defect: terms[0] - terms[1] + terms[2] - terms[3],
        error_estimate: reports.iter().map(|r| r.error_estimate).sum(),
        terms,
    })
}
