use nalgebra::DMatrix;

use super::primitive::Scalar;
use super::word::DiffeoWord;
use crate::error::{Error, Result};
use crate::numerics::sym_function;
use crate::symspace::{halfplane_to_j, HalfPlanePoint, SiegelJ, SpdPoint};
use crate::torusfield::{FourierField, GridField, Rank};

/// Compatibility tolerance for pushed-forward structures; larger defects mean
/// the word is not symplectic to working accuracy.
pub const PUSH_TOL: f64 = 1e-8;

/// A field of compatible complex structures that can be evaluated anywhere.
#[derive(Debug, Clone)]
pub enum BaseJ {
    /// `J0 = Omega` at every point of `T^{2n}`.
    Standard(usize),
    Constant(SiegelJ),
    /// `n = 1`: the structure with half-plane coordinate `u(x) + i exp(logv(x))`.
    HalfPlane {
        u: Scalar,
        logv: Scalar,
    },
}

impl BaseJ {
    pub fn half_plane(u: FourierField, logv: FourierField) -> Result<Self> {
        if u.dim() != 2 || logv.dim() != 2 {
            return Err(Error::domain("half-plane base structures live on T^2"));
        }
        Ok(BaseJ::HalfPlane {
            u: Scalar::new(u)?,
            logv: Scalar::new(logv)?,
        })
    }

    pub fn torus_dim(&self) -> usize {
        match self {
            BaseJ::Standard(n) => 2 * n,
            BaseJ::Constant(j) => 2 * j.half_dim(),
            BaseJ::HalfPlane { .. } => 2,
        }
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, BaseJ::HalfPlane { .. })
    }

    pub fn at(&self, x: &[f64]) -> SiegelJ {
        match self {
            BaseJ::Standard(n) => SiegelJ::standard(*n),
            BaseJ::Constant(j) => j.clone(),
            BaseJ::HalfPlane { u, logv } => {
                let z = HalfPlanePoint {
                    u: u.value(x),
                    v: logv.value(x).exp(),
                };
                halfplane_to_j(z).expect("exp keeps v positive")
            }
        }
    }
}

/// A field of unit-determinant metrics that can be evaluated anywhere.
#[derive(Debug, Clone)]
pub enum BaseMetric {
    Flat(usize),
    Constant(SpdPoint),
    /// `exp(S(x))` for a symmetric traceless matrix field `S`.
    Exp {
        n: usize,
        entries: Vec<Scalar>,
    },
}

impl BaseMetric {
    pub fn exp(s: &FourierField) -> Result<Self> {
        let n = match s.rank() {
            Rank::Matrix(r, c) if r == c && r == s.dim() => r,
            _ => {
                return Err(Error::domain(
                    "metric exponent must be an N x N matrix field on T^N",
                ))
            }
        };
        let mut trace = s.component(0);
        for i in 1..n {
            trace = trace.add(&s.component(i * n + i))?;
        }
        if trace.max_coeff() > 1e-12 * s.max_coeff().max(1.0) {
            return Err(Error::domain("metric exponent must be traceless"));
        }
        for i in 0..n {
            for j in 0..i {
                if s.component(i * n + j)
                    .sub(&s.component(j * n + i))?
                    .max_coeff()
                    > 0.0
                {
                    return Err(Error::domain("metric exponent must be symmetric"));
                }
            }
        }
        let entries = (0..n * n)
            .map(|c| Scalar::new(s.component(c)))
            .collect::<Result<_>>()?;
        Ok(BaseMetric::Exp { n, entries })
    }

    pub fn torus_dim(&self) -> usize {
        match self {
            BaseMetric::Flat(n) => *n,
            BaseMetric::Constant(g) => g.dim(),
            BaseMetric::Exp { n, .. } => *n,
        }
    }

    pub fn at(&self, x: &[f64]) -> SpdPoint {
        match self {
            BaseMetric::Flat(n) => SpdPoint::identity(*n),
            BaseMetric::Constant(g) => g.clone(),
            BaseMetric::Exp { n, entries } => {
                let s = DMatrix::from_fn(*n, *n, |i, j| entries[i * n + j].value(x));
                SpdPoint::from_trusted(sym_function(&s, f64::exp))
            }
        }
    }
}

/// `(w_* J)(x) = Df(y) J(y) Df(y)^-1` with `y = w^-1(x)`, evaluable at any point.
#[derive(Debug, Clone)]
pub struct PushedJ<'a> {
    base: &'a BaseJ,
    inv: DiffeoWord,
}

impl<'a> PushedJ<'a> {
    pub fn new(w: &DiffeoWord, base: &'a BaseJ) -> Result<Self> {
        if w.dim() != base.torus_dim() {
            return Err(Error::domain(
                "word and base structure live on different tori",
            ));
        }
        Ok(PushedJ {
            base,
            inv: w.inverse(),
        })
    }

    pub fn at(&self, x: &[f64]) -> Result<SiegelJ> {
        let j = self.base.at(x);
        if self.inv.is_identity() {
            return Ok(j);
        }
        // M = D(w^-1)(x) = Df(y)^-1
        let (y, m) = self.inv.apply_with_jacobian(x);
        let j_y = if self.base.is_constant() {
            j
        } else {
            self.base.at(&y)
        };
        let m_inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::numeric("singular Jacobian"))?;
        let pushed = m_inv * j_y.mat() * m;
        SiegelJ::with_tolerance(pushed, PUSH_TOL)
            .map_err(|e| Error::numeric(format!("pushforward lost compatibility at {x:?}: {e}")))
    }
}

/// `(w_* g)(x) = Df(y)^-T g(y) Df(y)^-1` with `y = w^-1(x)`.
#[derive(Debug, Clone)]
pub struct PushedMetric<'a> {
    base: &'a BaseMetric,
    inv: DiffeoWord,
}

impl<'a> PushedMetric<'a> {
    pub fn new(w: &DiffeoWord, base: &'a BaseMetric) -> Result<Self> {
        if w.dim() != base.torus_dim() {
            return Err(Error::domain("word and base metric live on different tori"));
        }
        Ok(PushedMetric {
            base,
            inv: w.inverse(),
        })
    }

    pub fn at(&self, x: &[f64]) -> Result<SpdPoint> {
        if self.inv.is_identity() {
            return Ok(self.base.at(x));
        }
        let (y, m) = self.inv.apply_with_jacobian(x);
        let g = self.base.at(&y);
        let pushed = m.transpose() * g.mat() * &m;
        SpdPoint::new(pushed).map_err(|e| {
            Error::numeric(format!("pushforward left the unit-determinant slice: {e}"))
        })
    }
}

fn matrix_values(m: &DMatrix<f64>) -> Vec<f64> {
    let (r, c) = m.shape();
    (0..r * c).map(|k| m[(k / c, k % c)]).collect()
}

/// `w_* J` sampled on the uniform grid with `side` points per axis.
pub fn pushforward_j(w: &DiffeoWord, base: &BaseJ, side: usize) -> Result<GridField> {
    let pushed = PushedJ::new(w, base)?;
    let n = base.torus_dim();
    GridField::try_from_fn(n, &vec![side; n], Rank::Matrix(n, n), |_, x| {
        Ok(matrix_values(pushed.at(x)?.mat()))
    })
}

/// `w_* g` sampled on the uniform grid with `side` points per axis.
pub fn pushforward_metric(w: &DiffeoWord, base: &BaseMetric, side: usize) -> Result<GridField> {
    let pushed = PushedMetric::new(w, base)?;
    let n = base.torus_dim();
    GridField::try_from_fn(n, &vec![side; n], Rank::Matrix(n, n), |_, x| {
        Ok(matrix_values(pushed.at(x)?.mat()))
    })
}
