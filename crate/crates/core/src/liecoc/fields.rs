use crate::error::{Error, Result};
use crate::torusfield::{divergence_defect, hamiltonian_field, FourierField, Rank};

/// Relative spectral divergence accepted for a divergence-free field.
pub const DIV_FREE_TOL: f64 = 1e-12;

/// A band-limited vector field on `T^N` with vanishing divergence, optionally
/// tagged with a Hamiltonian generating function.
#[derive(Debug, Clone, PartialEq)]
pub struct DivFreeField {
    field: FourierField,
    generator: Option<FourierField>,
}

impl DivFreeField {
    pub fn new(field: FourierField) -> Result<Self> {
        if field.rank() != Rank::Vector(field.dim()) {
            return Err(Error::domain(
                "expected a vector field with one component per axis",
            ));
        }
        let defect = divergence_defect(&field)?;
        if defect > DIV_FREE_TOL {
            return Err(Error::domain(format!(
                "field is not divergence-free (relative defect {defect:e})"
            )));
        }
        Ok(DivFreeField {
            field,
            generator: None,
        })
    }

    /// `X_f = J0 grad f = (f_y, -f_x)` on `T^2` for the standard structure `J0 = Omega`.
    pub fn hamiltonian(f: FourierField) -> Result<Self> {
        let field = hamiltonian_field(&f)?;
        Ok(DivFreeField {
            field,
            generator: Some(f),
        })
    }

    pub fn constant(values: &[f64]) -> Self {
        DivFreeField {
            field: FourierField::constant_vector(values.len(), values),
            generator: None,
        }
    }

    pub fn field(&self) -> &FourierField {
        &self.field
    }

    pub fn generator(&self) -> Option<&FourierField> {
        self.generator.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn bandlimit(&self) -> usize {
        self.field.bandlimit()
    }

    pub fn scale(&self, s: f64) -> DivFreeField {
        DivFreeField {
            field: self.field.scale(s),
            generator: self.generator.as_ref().map(|f| f.scale(s)),
        }
    }

    /// `L_X w = d(i_X w) = 0` for the standard symplectic form on `T^{2n}`,
    /// checked on Fourier coefficients.
    pub fn is_symplectic(&self) -> Result<bool> {
        let n = self.dim();
        if n % 2 != 0 {
            return Ok(false);
        }
        // (i_X w)_b = X^a Omega_ab with Omega = diag([[0, 1], [-1, 0]])
        let alpha: Vec<FourierField> = (0..n)
            .map(|b| {
                let partner = b ^ 1;
                let sign = if b % 2 == 1 { 1.0 } else { -1.0 };
                self.field.component(partner).scale(sign)
            })
            .collect();
        let scale = self.field.max_coeff().max(f64::MIN_POSITIVE) * (1 + self.bandlimit()) as f64;
        for b in 0..n {
            for c in 0..b {
                let curl = alpha[b].derivative(c).sub(&alpha[c].derivative(b))?;
                if curl.max_coeff() > DIV_FREE_TOL * 2.0 * std::f64::consts::PI * scale {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
