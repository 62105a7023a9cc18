use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::torusfield::{FourierField, Rank};

/// A scalar field prepared for fast pointwise evaluation:
/// `f(x) = mean + sum_k 2 Re(c_k exp(2 pi i k.x))` over half of the spectrum.
#[derive(Debug, Clone)]
pub struct Scalar {
    field: FourierField,
    mean: f64,
    terms: Vec<([f64; 4], Complex64)>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
    }
}

impl Scalar {
    pub fn new(field: FourierField) -> Result<Self> {
        if field.rank() != Rank::Scalar {
            return Err(Error::domain("expected a scalar field"));
        }
        if field.dim() > 4 {
            return Err(Error::domain(
                "diffeomorphism words support tori of dimension <= 4",
            ));
        }
        let mut terms = Vec::new();
        for (_, k, c) in field.terms() {
            // keep the lexicographically positive half
            if let Some(first) = k.iter().find(|&&v| v != 0) {
                if *first > 0 {
                    let mut kk = [0.0; 4];
                    for (a, v) in k.iter().enumerate() {
                        kk[a] = 2.0 * PI * *v as f64;
                    }
                    terms.push((kk, c * 2.0));
                }
            }
        }
        let mean = field.mean()[0];
        Ok(Scalar { field, mean, terms })
    }

    pub fn field(&self) -> &FourierField {
        &self.field
    }

    pub fn scaled(&self, s: f64) -> Scalar {
        Scalar::new(self.field.scale(s)).expect("scaling keeps the rank")
    }

    fn phase(k: &[f64; 4], x: &[f64]) -> f64 {
        x.iter().zip(k).map(|(a, b)| a * b).sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut acc = self.mean;
        for (k, c) in &self.terms {
            let (s, co) = Scalar::phase(k, x).sin_cos();
            acc += c.re * co - c.im * s;
        }
        acc
    }

    /// Partial derivative along `axis`.
    pub fn d(&self, x: &[f64], axis: usize) -> f64 {
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let (s, co) = Scalar::phase(k, x).sin_cos();
            // d/dx Re(c e^{i t}) = -k (c.re sin + c.im cos)
            acc -= k[axis] * (c.re * s + c.im * co);
        }
        acc
    }

    /// Second partial derivative along `a`, `b`.
    pub fn dd(&self, x: &[f64], a: usize, b: usize) -> f64 {
        let mut acc = 0.0;
        for (k, c) in &self.terms {
            let (s, co) = Scalar::phase(k, x).sin_cos();
            acc -= k[a] * k[b] * (c.re * co - c.im * s);
        }
        acc
    }

    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (k, c) in &self.terms {
            let (s, co) = Scalar::phase(k, x).sin_cos();
            let w = c.re * s + c.im * co;
            for (o, ka) in out.iter_mut().zip(k) {
                *o -= ka * w;
            }
        }
    }
}

/// An exactly invertible volume-preserving map of `T^N`.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// `x -> A x` for an integer matrix with determinant 1.
    LinearTorus {
        a: Vec<Vec<i64>>,
        inv: Vec<Vec<i64>>,
    },
    Translation(Vec<f64>),
    /// `x_axis -> x_axis + phi(x)`, `phi` independent of `x_axis`.
    Shear {
        axis: usize,
        phi: Scalar,
    },
    /// Strang splitting of the time-1 flow of `H = F(x) + G(y)` on `T^2`
    /// with `dx/dt = H_y`, `dy/dt = -H_x`: per step a half drift in `x`, a kick
    /// in `y`, and another half drift.
    HamSplit {
        f: Scalar,
        g: Scalar,
        steps: usize,
    },
}

pub(crate) fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] as i128 * int_det(&minor);
    }
    total
}

/// Inverse of a determinant-1 integer matrix through its adjugate.
fn int_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[i][j] = (sign * int_det(&minor)) as i64;
        }
    }
    inv
}

impl Primitive {
    pub fn linear(a: Vec<Vec<i64>>) -> Result<Self> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) {
            return Err(Error::domain(
                "linear torus map must be a square integer matrix",
            ));
        }
        let det = int_det(&a);
        if det != 1 {
            return Err(Error::domain(format!(
                "linear torus map has determinant {det}, expected 1"
            )));
        }
        let inv = int_inverse(&a);
        Ok(Primitive::LinearTorus { a, inv })
    }

    pub fn translation(v: Vec<f64>) -> Result<Self> {
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain(
                "translation vector must be finite and nonempty",
            ));
        }
        Ok(Primitive::Translation(v))
    }

    pub fn shear(axis: usize, phi: FourierField) -> Result<Self> {
        if axis >= phi.dim() {
            return Err(Error::domain("shear axis out of range"));
        }
        if phi.depends_on_axis(axis) {
            return Err(Error::domain(format!(
                "shear profile depends on its own axis {axis}"
            )));
        }
        Ok(Primitive::Shear {
            axis,
            phi: Scalar::new(phi)?,
        })
    }

    pub fn ham_split(f: FourierField, g: FourierField, steps: usize) -> Result<Self> {
        if f.dim() != 2 || g.dim() != 2 {
            return Err(Error::domain("split Hamiltonian maps live on T^2"));
        }
        if f.depends_on_axis(1) {
            return Err(Error::domain("F must depend on x only"));
        }
        if g.depends_on_axis(0) {
            return Err(Error::domain("G must depend on y only"));
        }
        if steps == 0 {
            return Err(Error::domain(
                "split Hamiltonian map needs at least one step",
            ));
        }
        Ok(Primitive::HamSplit {
            f: Scalar::new(f)?,
            g: Scalar::new(g)?,
            steps,
        })
    }

    /// Torus dimension, when the primitive fixes it.
    pub fn dim(&self) -> usize {
        match self {
            Primitive::LinearTorus { a, .. } => a.len(),
            Primitive::Translation(v) => v.len(),
            Primitive::Shear { phi, .. } => phi.field.dim(),
            Primitive::HamSplit { .. } => 2,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Primitive::LinearTorus { .. })
    }

    /// The primitive with its parameter multiplied by `t`; linear maps only
    /// admit the identity path.
    pub fn scaled(&self, t: f64) -> Result<Primitive> {
        Ok(match self {
            Primitive::LinearTorus { a, .. } => {
                let n = a.len();
                let is_id = (0..n).all(|i| (0..n).all(|j| a[i][j] == (i == j) as i64));
                if !is_id {
                    return Err(Error::domain(
                        "a non-identity linear torus map has no isotopy to the identity",
                    ));
                }
                self.clone()
            }
            Primitive::Translation(v) => Primitive::Translation(v.iter().map(|x| x * t).collect()),
            Primitive::Shear { axis, phi } => Primitive::Shear {
                axis: *axis,
                phi: phi.scaled(t),
            },
            Primitive::HamSplit { f, g, steps } => Primitive::HamSplit {
                f: f.scaled(t),
                g: g.scaled(t),
                steps: *steps,
            },
        })
    }

    /// Applies the map (or its inverse) to a lifted point in `R^N`; when `jac`
    /// is given it is replaced by `D * jac`.
    pub(crate) fn apply(&self, x: &mut [f64], inverse: bool, mut jac: Option<&mut DMatrix<f64>>) {
        let sign = if inverse { -1.0 } else { 1.0 };
        match self {
            Primitive::LinearTorus { a, inv } => {
                let m = if inverse { inv } else { a };
                let old = x.to_vec();
                for (i, row) in m.iter().enumerate() {
                    x[i] = row.iter().zip(&old).map(|(r, v)| *r as f64 * v).sum();
                }
                if let Some(j) = jac.as_deref_mut() {
                    let mf = DMatrix::from_fn(m.len(), m.len(), |r, c| m[r][c] as f64);
                    *j = &mf * &*j;
                }
            }
            Primitive::Translation(v) => {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += sign * vi;
                }
            }
            Primitive::Shear { axis, phi } => {
                let n = x.len();
                if let Some(j) = jac.as_deref_mut() {
                    let mut grad = vec![0.0; n];
                    phi.gradient(x, &mut grad);
                    for b in 0..n {
                        if b != *axis && grad[b] != 0.0 {
                            add_row(j, *axis, b, sign * grad[b]);
                        }
                    }
                }
                x[*axis] += sign * phi.value(x);
            }
            Primitive::HamSplit { f, g, steps } => {
                let h = sign / *steps as f64;
                for _ in 0..*steps {
                    drift(g, x, 0.5 * h, jac.as_deref_mut());
                    // kick: y -= h F'(x)
                    if let Some(j) = jac.as_deref_mut() {
                        add_row(j, 1, 0, -h * f.dd(x, 0, 0));
                    }
                    x[1] -= h * f.d(x, 0);
                    drift(g, x, 0.5 * h, jac.as_deref_mut());
                }
            }
        }
    }
}

/// `row dst += c * row src`, i.e. left multiplication by an elementary shear.
fn add_row(j: &mut DMatrix<f64>, dst: usize, src: usize, c: f64) {
    for col in 0..j.ncols() {
        let v = j[(src, col)];
        j[(dst, col)] += c * v;
    }
}

/// `x += tau G'(y)` and its Jacobian.
fn drift(g: &Scalar, x: &mut [f64], tau: f64, jac: Option<&mut DMatrix<f64>>) {
    if let Some(j) = jac {
        add_row(j, 0, 1, tau * g.dd(x, 1, 1));
    }
    x[0] += tau * g.d(x, 1);
}
