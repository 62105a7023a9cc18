use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numerics::{asymmetry, spd_function, sym_eigen, sym_function_derivative, symmetrize};

const SYMMETRY_TOL: f64 = 1e-12;
const DET_TOL: f64 = 1e-10;
const TANGENCY_TOL: f64 = 1e-10;

/// A point of `SL_N(R)/SO(N)`: a symmetric positive-definite matrix of unit
/// determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdPoint {
    mat: DMatrix<f64>,
}

impl SpdPoint {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        check_spd(&mat)?;
        let det = mat.determinant();
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::domain(format!("determinant {det} is not 1")));
        }
        Ok(SpdPoint {
            mat: symmetrize(&mat),
        })
    }

    /// Rescales a positive-definite matrix to unit determinant.
    pub fn normalized(mat: DMatrix<f64>) -> Result<Self> {
        check_spd(&mat)?;
        let n = mat.nrows() as f64;
        let det = mat.determinant();
        SpdPoint::new(mat * det.powf(-1.0 / n))
    }

    pub fn identity(n: usize) -> Self {
        SpdPoint {
            mat: DMatrix::identity(n, n),
        }
    }

    /// Internal constructor for results of operations that preserve the
    /// invariants up to roundoff.
    pub(crate) fn from_trusted(mat: DMatrix<f64>) -> Self {
        SpdPoint {
            mat: symmetrize(&mat),
        }
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_mat(self) -> DMatrix<f64> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Congruence action `g -> a^T g a`.
    pub fn congruence(&self, a: &DMatrix<f64>) -> Result<Self> {
        SpdPoint::new(a.transpose() * &self.mat * a)
    }
}

fn check_spd(mat: &DMatrix<f64>) -> Result<()> {
    if !mat.is_square() || mat.nrows() == 0 {
        return Err(Error::domain("metric must be a nonempty square matrix"));
    }
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("metric has non-finite entries"));
    }
    let asym = asymmetry(mat);
    if asym > SYMMETRY_TOL {
        return Err(Error::domain(format!(
            "matrix not symmetric (relative asymmetry {asym:e})"
        )));
    }
    let eig = sym_eigen(mat);
    if let Some(l) = eig.eigenvalues.iter().find(|&&l| l <= 0.0) {
        return Err(Error::domain(format!(
            "matrix not positive definite (eigenvalue {l:e})"
        )));
    }
    Ok(())
}

/// A tangent vector `h` at a point `g` of the unit-determinant slice:
/// symmetric with `tr(g^-1 h) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTangent {
    mat: DMatrix<f64>,
}

impl SymTangent {
    pub fn new(base: &SpdPoint, mat: DMatrix<f64>) -> Result<Self> {
        if mat.shape() != base.mat.shape() {
            return Err(Error::domain("tangent and base differ in size"));
        }
        if mat.norm() > 0.0 && asymmetry(&mat) > SYMMETRY_TOL {
            return Err(Error::domain("tangent vector is not symmetric"));
        }
        let ginv = base
            .mat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::numeric("base point not invertible"))?;
        let x = &ginv * &mat;
        let tr = x.trace();
        if tr.abs() > TANGENCY_TOL * x.norm().max(1.0) {
            return Err(Error::domain(format!(
                "tr(g^-1 h) = {tr:e}, not tangent to det = 1"
            )));
        }
        Ok(SymTangent {
            mat: symmetrize(&mat),
        })
    }

    /// Projects an arbitrary symmetric matrix onto the tangent space at `base`.
    pub fn project(base: &SpdPoint, mat: &DMatrix<f64>) -> Self {
        let n = base.dim() as f64;
        let sym = symmetrize(mat);
        let ginv = base
            .mat
            .clone()
            .try_inverse()
            .expect("SPD matrices are invertible");
        let tr = (&ginv * &sym).trace();
        SymTangent {
            mat: sym - &base.mat * (tr / n),
        }
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }
}

/// A point of the straight segment between two metrics. It lies in the
/// positive cone but in general not on the unit-determinant slice.
#[derive(Debug, Clone, PartialEq)]
pub struct StraightPoint {
    pub mat: DMatrix<f64>,
    pub det: f64,
}

impl StraightPoint {
    pub fn is_unimodular(&self) -> bool {
        (self.det - 1.0).abs() <= DET_TOL
    }
}

/// `t g1 + (1 - t) g2`: equal to `g1` at `t = 1` and to `g2` at `t = 0`.
pub fn straight_segment(g1: &SpdPoint, g2: &SpdPoint, t: f64) -> Result<StraightPoint> {
    if g1.dim() != g2.dim() {
        return Err(Error::domain("segment endpoints differ in size"));
    }
    let mat = &g1.mat * t + &g2.mat * (1.0 - t);
    let det = mat.determinant();
    Ok(StraightPoint { mat, det })
}

/// The affine-invariant geodesic `g1^{1/2} (g1^{-1/2} g2 g1^{-1/2})^t g1^{1/2}`.
pub fn geodesic_spd(g1: &SpdPoint, g2: &SpdPoint, t: f64) -> Result<SpdPoint> {
    if g1.dim() != g2.dim() {
        return Err(Error::domain("geodesic endpoints differ in size"));
    }
    if t == 0.0 {
        return Ok(g1.clone());
    }
    if t == 1.0 {
        return Ok(g2.clone());
    }
    let kernel = GeodesicKernel::new(&g1.mat, &g2.mat)?;
    Ok(SpdPoint::from_trusted(kernel.point(t)))
}

/// Precomputed data for the geodesic from `p` to `q` in the cone of positive
/// matrices, with derivatives in the time parameter and in the endpoint `q`.
/// Works for any positive-definite pair, unimodular or not.
pub struct GeodesicKernel {
    sqrt_p: DMatrix<f64>,
    inv_sqrt_p: DMatrix<f64>,
    m: DMatrix<f64>,
}

impl GeodesicKernel {
    pub fn new(p: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<Self> {
        let sqrt_p = spd_function(p, f64::sqrt)?;
        let inv_sqrt_p = spd_function(p, |x| 1.0 / x.sqrt())?;
        let m = symmetrize(&(&inv_sqrt_p * q * &inv_sqrt_p));
        // Positivity of the endpoint is checked once here.
        spd_function(&m, |x| x)?;
        Ok(GeodesicKernel {
            sqrt_p,
            inv_sqrt_p,
            m,
        })
    }

    pub fn point(&self, t: f64) -> DMatrix<f64> {
        let mt = spd_function(&self.m, |x| x.powf(t)).expect("checked at construction");
        symmetrize(&(&self.sqrt_p * mt * &self.sqrt_p))
    }

    /// Velocity `dc/dt`.
    pub fn velocity(&self, t: f64) -> DMatrix<f64> {
        let d = spd_function(&self.m, |x| x.ln() * x.powf(t)).expect("checked at construction");
        symmetrize(&(&self.sqrt_p * d * &self.sqrt_p))
    }

    /// Derivative of `c(t)` when the far endpoint `q` moves in direction `e`.
    pub fn endpoint_derivative(&self, t: f64, e: &DMatrix<f64>) -> DMatrix<f64> {
        let inner = symmetrize(&(&self.inv_sqrt_p * e * &self.inv_sqrt_p));
        let d = sym_function_derivative(&self.m, &inner, |x| x.powf(t), |x| t * x.powf(t - 1.0));
        symmetrize(&(&self.sqrt_p * d * &self.sqrt_p))
    }
}
