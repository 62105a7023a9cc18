use nalgebra::DMatrix;

use super::spd::GeodesicKernel;
use crate::error::{Error, Result};
use crate::numerics::{asymmetry, sym_eigen};

const STRUCTURE_TOL: f64 = 1e-10;

/// `Tr(J A B)` divided by the hyperbolic area form, measured in the
/// half-plane chart of the `n = 1` fiber.
pub const KAEHLER_PER_AREA: f64 = 2.0;

/// Standard symplectic matrix on `R^{2n}`: blocks `[[0, 1], [-1, 0]]`.
pub fn standard_omega(n: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n, 2 * n);
    for b in 0..n {
        om[(2 * b, 2 * b + 1)] = 1.0;
        om[(2 * b + 1, 2 * b)] = -1.0;
    }
    om
}

/// A complex structure on `R^{2n}` compatible with the standard symplectic
/// form: `J^2 = -I`, `J^T Omega J = Omega`, and `w(J., .)` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelJ {
    mat: DMatrix<f64>,
}

impl SiegelJ {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        check_compatible(&mat, STRUCTURE_TOL)?;
        Ok(SiegelJ { mat })
    }

    /// Validation with a caller-chosen tolerance, for fields produced by
    /// pushforward where resolution limits accuracy.
    pub fn with_tolerance(mat: DMatrix<f64>, tol: f64) -> Result<Self> {
        check_compatible(&mat, tol)?;
        Ok(SiegelJ { mat })
    }

    pub(crate) fn from_trusted(mat: DMatrix<f64>) -> Self {
        SiegelJ { mat }
    }

    /// The structure with `w(J0 ., .)` equal to the identity metric; `J0 = Omega`.
    pub fn standard(n: usize) -> Self {
        SiegelJ {
            mat: standard_omega(n),
        }
    }

    /// `G = J^T Omega`, the compatible metric as a symmetric symplectic matrix.
    pub fn metric(&self) -> DMatrix<f64> {
        let om = standard_omega(self.half_dim());
        let g = self.mat.transpose() * om;
        (&g + g.transpose()) * 0.5
    }

    /// Inverse of [`SiegelJ::metric`]: `J = Omega G`.
    pub fn from_metric(g: &DMatrix<f64>) -> Result<Self> {
        if g.nrows() % 2 != 0 {
            return Err(Error::domain("compatible metric must have even size"));
        }
        let om = standard_omega(g.nrows() / 2);
        SiegelJ::new(om * g)
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn half_dim(&self) -> usize {
        self.mat.nrows() / 2
    }

    /// `a J a^-1`, the linear pushforward.
    pub fn conjugate(&self, a: &DMatrix<f64>) -> Result<Self> {
        let ainv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::domain("map not invertible"))?;
        SiegelJ::new(a * &self.mat * ainv)
    }
}

pub(crate) fn check_compatible(j: &DMatrix<f64>, tol: f64) -> Result<()> {
    if !j.is_square() || j.nrows() % 2 != 0 || j.nrows() == 0 {
        return Err(Error::domain(
            "complex structure must be square of even size",
        ));
    }
    if j.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("complex structure has non-finite entries"));
    }
    let m = j.nrows();
    let scale = j.norm_squared().max(1.0);
    let id = DMatrix::<f64>::identity(m, m);
    let sq = (j * j + &id).norm();
    if sq > tol * scale {
        return Err(Error::domain(format!("J^2 + I has norm {sq:e}")));
    }
    let om = standard_omega(m / 2);
    let sympl = (j.transpose() * &om * j - &om).norm();
    if sympl > tol * scale {
        return Err(Error::domain(format!(
            "J is not symplectic (defect {sympl:e})"
        )));
    }
    let g = j.transpose() * &om;
    if asymmetry(&g) > tol * scale {
        return Err(Error::domain("w(J., .) is not symmetric"));
    }
    let eig = sym_eigen(&g);
    if let Some(l) = eig.eigenvalues.iter().find(|&&l| l <= 0.0) {
        return Err(Error::domain(format!(
            "w(J., .) not positive definite (eigenvalue {l:e})"
        )));
    }
    Ok(())
}

/// A tangent vector at a compatible `J`: `AJ = -JA` and `A` self-adjoint for
/// the symplectic pairing, i.e. `A^T Omega + Omega A = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct JTangent {
    mat: DMatrix<f64>,
}

impl JTangent {
    pub fn new(base: &SiegelJ, mat: DMatrix<f64>) -> Result<Self> {
        check_tangent(base, &mat)?;
        Ok(JTangent { mat })
    }

    /// Projection of an arbitrary matrix onto the tangent space at `base`.
    pub fn project(base: &SiegelJ, mat: &DMatrix<f64>) -> Self {
        let j = base.mat();
        let om = standard_omega(base.half_dim());
        let om_inv = om.transpose();
        // Hamiltonian part, then the part anticommuting with J.
        let ham = (mat - &om_inv * mat.transpose() * &om) * 0.5;
        let anti = (&ham + j * &ham * j) * 0.5;
        JTangent { mat: anti }
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }
}

fn check_tangent(base: &SiegelJ, a: &DMatrix<f64>) -> Result<()> {
    if a.shape() != base.mat.shape() {
        return Err(Error::domain("tangent and base differ in size"));
    }
    let j = base.mat();
    let scale = a.norm().max(1.0) * j.norm().max(1.0);
    let anti = (a * j + j * a).norm();
    if anti > STRUCTURE_TOL * scale {
        return Err(Error::domain(format!("AJ + JA has norm {anti:e}")));
    }
    let om = standard_omega(base.half_dim());
    let ham = (a.transpose() * &om + &om * a).norm();
    if ham > STRUCTURE_TOL * scale {
        return Err(Error::domain(format!(
            "A is not self-adjoint for w (defect {ham:e})"
        )));
    }
    Ok(())
}

/// Geodesic in `Sp(2n,R)/U(n)` through the totally geodesic embedding
/// `J -> J^T Omega` into the positive cone.
pub fn geodesic_siegel(j1: &SiegelJ, j2: &SiegelJ, t: f64) -> Result<SiegelJ> {
    if j1.mat.shape() != j2.mat.shape() {
        return Err(Error::domain("geodesic endpoints differ in size"));
    }
    if t == 0.0 {
        return Ok(j1.clone());
    }
    if t == 1.0 {
        return Ok(j2.clone());
    }
    let kernel = GeodesicKernel::new(&j1.metric(), &j2.metric())?;
    let g = kernel.point(t);
    let om = standard_omega(j1.half_dim());
    Ok(SiegelJ::from_trusted(om * g))
}

/// The Kahler form `Tr(J A B)` on `T_J Sp(2n,R)/U(n)`.
pub fn kaehler_form(j: &SiegelJ, a: &JTangent, b: &JTangent) -> Result<f64> {
    check_tangent(j, a.mat())?;
    check_tangent(j, b.mat())?;
    Ok((j.mat() * a.mat() * b.mat()).trace())
}
