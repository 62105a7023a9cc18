use nalgebra::DMatrix;

use super::fourier::{FourierField, Rank};
use super::grid::GridField;
use crate::error::{Error, Result};

/// Relative size of the upper half of the resolved spectrum of `exp(-A)`
/// above which a grid is declared too coarse for the metric.
const ALIAS_TOL: f64 = 1e-8;

/// The metric `exp(A) (dx^2 + dy^2)` on `T^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMetric {
    a: FourierField,
}

impl ConformalMetric {
    pub fn new(a: FourierField) -> Result<Self> {
        if a.dim() != 2 || a.rank() != Rank::Scalar {
            return Err(Error::domain("conformal exponent must be a scalar on T^2"));
        }
        Ok(ConformalMetric { a })
    }

    pub fn flat() -> Self {
        ConformalMetric {
            a: FourierField::zeros(2, Rank::Scalar, 0),
        }
    }

    pub fn exponent(&self) -> &FourierField {
        &self.a
    }
}

/// `Gamma^a_{bc}` for the conformal metric, one grid field per symbol.
#[derive(Debug, Clone)]
pub struct Christoffels {
    pub x_xx: GridField,
    pub x_xy: GridField,
    pub x_yy: GridField,
    pub y_xx: GridField,
    pub y_xy: GridField,
    pub y_yy: GridField,
}

/// Pointwise geometric quantities of a conformal metric on a fixed grid.
#[derive(Debug, Clone)]
pub struct ConformalGeometry {
    side: usize,
    a: Vec<f64>,
    ax: Vec<f64>,
    ay: Vec<f64>,
    lap_a: Vec<f64>,
}

fn scalar_values(f: &FourierField, side: usize) -> Result<Vec<f64>> {
    Ok(f.sample(side)?.component(0).to_vec())
}

impl ConformalGeometry {
    pub fn new(metric: &ConformalMetric, side: usize) -> Result<Self> {
        let a = metric.exponent();
        let geo = ConformalGeometry {
            side,
            a: scalar_values(a, side)?,
            ax: scalar_values(&a.derivative(0), side)?,
            ay: scalar_values(&a.derivative(1), side)?,
            lap_a: scalar_values(
                &a.derivative(0)
                    .derivative(0)
                    .add(&a.derivative(1).derivative(1))?,
                side,
            )?,
        };
        geo.check_resolution()?;
        Ok(geo)
    }

    /// `exp(-A)` is not band-limited; its spectrum must have decayed well
    /// inside the grid band.
    fn check_resolution(&self) -> Result<()> {
        let shape = [self.side, self.side];
        let e = GridField::new(
            2,
            shape.to_vec(),
            Rank::Scalar,
            self.a.iter().map(|v| (-v).exp()).collect(),
        )?;
        let band = self.side / 2 - 1;
        let coeffs = e.analyze(band)?;
        let mean = coeffs.mean()[0].abs();
        let tail = coeffs
            .terms()
            .iter()
            .filter(|(_, k, _)| k.iter().any(|v| v.unsigned_abs() as usize > band / 2))
            .map(|(_, _, c)| c.norm())
            .fold(0.0, f64::max);
        if tail > ALIAS_TOL * mean {
            return Err(Error::numeric(format!(
                "grid {} under-resolves the conformal factor (spectral tail {:e})",
                self.side,
                tail / mean
            )));
        }
        Ok(())
    }

    pub fn side(&self) -> usize {
        self.side
    }

    fn grid(&self, f: impl Fn(usize) -> f64) -> GridField {
        let n = self.side * self.side;
        GridField::new(2, vec![self.side; 2], Rank::Scalar, (0..n).map(f).collect())
            .expect("grid shape validated at construction")
    }

    pub fn christoffels(&self) -> Christoffels {
        let half = |v: &Vec<f64>, s: f64| self.grid(|p| 0.5 * s * v[p]);
        Christoffels {
            x_xx: half(&self.ax, 1.0),
            x_xy: half(&self.ay, 1.0),
            x_yy: half(&self.ax, -1.0),
            y_xx: half(&self.ay, -1.0),
            y_xy: half(&self.ax, 1.0),
            y_yy: half(&self.ay, 1.0),
        }
    }

    /// Gauss curvature `K = -1/2 exp(-A) (A_xx + A_yy)`.
    pub fn curvature(&self) -> GridField {
        self.grid(|p| -0.5 * (-self.a[p]).exp() * self.lap_a[p])
    }

    /// Area density `exp(A)` relative to `dx dy`.
    pub fn area_density(&self) -> GridField {
        self.grid(|p| self.a[p].exp())
    }

    /// `int F exp(A) dx dy`.
    pub fn integrate_area(&self, f: &GridField) -> Result<f64> {
        if f.shape() != [self.side, self.side] || f.rank() != Rank::Scalar {
            return Err(Error::domain(
                "integrand grid differs from the geometry grid",
            ));
        }
        let weighted = self.grid(|p| f.value(p, 0) * self.a[p].exp());
        weighted.integrate()
    }

    fn derivatives(&self, f: &FourierField) -> Result<[Vec<f64>; 5]> {
        if f.dim() != 2 || f.rank() != Rank::Scalar {
            return Err(Error::domain("expected a scalar on T^2"));
        }
        let (fx, fy) = (f.derivative(0), f.derivative(1));
        Ok([
            scalar_values(&fx, self.side)?,
            scalar_values(&fy, self.side)?,
            scalar_values(&fx.derivative(0), self.side)?,
            scalar_values(&fx.derivative(1), self.side)?,
            scalar_values(&fy.derivative(1), self.side)?,
        ])
    }

    /// The Hessian `H_f = grad(grad f)` as a `(1,1)` tensor, row-major 2x2:
    ///
    /// ```text
    /// [ e^-A f_xx + 1/2 e^-A (A_y f_y - A_x f_x)   e^-A f_xy - 1/2 e^-A (A_y f_x + A_x f_y) ]
    /// [ e^-A f_xy - 1/2 e^-A (A_y f_x + A_x f_y)   e^-A f_yy + 1/2 e^-A (A_x f_x - A_y f_y) ]
    /// ```
    pub fn hessian(&self, f: &FourierField) -> Result<GridField> {
        let [fx, fy, fxx, fxy, fyy] = self.derivatives(f)?;
        GridField::from_fn(2, &[self.side, self.side], Rank::Matrix(2, 2), |p, _| {
            let e = (-self.a[p]).exp();
            let (ax, ay) = (self.ax[p], self.ay[p]);
            let off = e * fxy[p] - 0.5 * e * (ay * fx[p] + ax * fy[p]);
            vec![
                e * fxx[p] + 0.5 * e * (ay * fy[p] - ax * fx[p]),
                off,
                off,
                e * fyy[p] + 0.5 * e * (ax * fx[p] - ay * fy[p]),
            ]
        })
    }

    /// `{f, h} = (f_x h_y - f_y h_x) exp(-A)`, the bracket of the area form
    /// `exp(A) dx ^ dy`.
    pub fn poisson(&self, f: &FourierField, h: &FourierField) -> Result<GridField> {
        let [fx, fy, ..] = self.derivatives(f)?;
        let [hx, hy, ..] = self.derivatives(h)?;
        Ok(self.grid(|p| (fx[p] * hy[p] - fy[p] * hx[p]) * (-self.a[p]).exp()))
    }

    /// `exp(-A) (f_xx + f_yy)`.
    pub fn laplace_beltrami(&self, f: &FourierField) -> Result<GridField> {
        let [_, _, fxx, _, fyy] = self.derivatives(f)?;
        Ok(self.grid(|p| (-self.a[p]).exp() * (fxx[p] + fyy[p])))
    }

    /// `(nabla X)^a_b = d_b X^a + Gamma^a_{bc} X^c`, row-major 2x2.
    pub fn covariant_derivative(&self, x: &FourierField) -> Result<GridField> {
        if x.dim() != 2 || x.rank() != Rank::Vector(2) {
            return Err(Error::domain("expected a vector field on T^2"));
        }
        let xs = x.sample(self.side)?;
        let dx = super::ops::jacobian(x)?.sample(self.side)?;
        GridField::from_fn(2, &[self.side, self.side], Rank::Matrix(2, 2), |p, _| {
            let (ax, ay) = (self.ax[p], self.ay[p]);
            let (u, v) = (xs.value(p, 0), xs.value(p, 1));
            // Gamma^x_{b c} X^c and Gamma^y_{b c} X^c for b = x, y
            let gx_x = 0.5 * (ax * u + ay * v);
            let gx_y = 0.5 * (ay * u - ax * v);
            let gy_x = 0.5 * (-ay * u + ax * v);
            let gy_y = 0.5 * (ax * u + ay * v);
            vec![
                dx.value(p, 0) + gx_x,
                dx.value(p, 1) + gx_y,
                dx.value(p, 2) + gy_x,
                dx.value(p, 3) + gy_y,
            ]
        })
    }

    /// Rotation by +90 degrees in an oriented orthonormal frame; for a
    /// conformal metric this is the same matrix in coordinates.
    pub fn complex_structure() -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
    }
}
