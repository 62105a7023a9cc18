use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;

use super::fft::fft_nd;
use super::fourier::{mode_count, mode_of, FourierField, Rank};
use crate::error::{Error, Result};
use crate::numerics::pairwise_mean;

/// Samples of a field at the points `x_a = i_a / shape[a]`, stored
/// component-major; points are row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dim: usize,
    shape: Vec<usize>,
    rank: Rank,
    data: Vec<f64>,
}

impl GridField {
    pub(crate) fn check_shape(dim: usize, shape: &[usize]) -> Result<()> {
        if shape.len() != dim {
            return Err(Error::domain(
                "grid shape length differs from torus dimension",
            ));
        }
        if let Some(s) = shape.iter().find(|&&s| s < 4 || !s.is_power_of_two()) {
            return Err(Error::domain(format!(
                "grid size {s} must be a power of two >= 4"
            )));
        }
        Ok(())
    }

    pub fn new(dim: usize, shape: Vec<usize>, rank: Rank, data: Vec<f64>) -> Result<Self> {
        GridField::check_shape(dim, &shape)?;
        let npts: usize = shape.iter().product();
        if data.len() != npts * rank.components() {
            return Err(Error::domain(
                "grid data length does not match shape and rank",
            ));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric("grid field has non-finite values"));
        }
        Ok(GridField {
            dim,
            shape,
            rank,
            data,
        })
    }

    /// Evaluates `f` at every grid point in parallel; `f` returns all
    /// components at one point.
    pub fn from_fn<F>(dim: usize, shape: &[usize], rank: Rank, f: F) -> Result<Self>
    where
        F: Fn(usize, &[f64]) -> Vec<f64> + Sync,
    {
        GridField::check_shape(dim, shape)?;
        let npts: usize = shape.iter().product();
        let per_point: Vec<Vec<f64>> = (0..npts)
            .into_par_iter()
            .map(|p| {
                let x = point_of(shape, p);
                f(p, &x)
            })
            .collect();
        GridField::from_points(dim, shape.to_vec(), rank, per_point)
    }

    /// Like [`GridField::from_fn`] for fallible point functions; the first
    /// failing point (in grid order) decides the error.
    pub fn try_from_fn<F>(dim: usize, shape: &[usize], rank: Rank, f: F) -> Result<Self>
    where
        F: Fn(usize, &[f64]) -> Result<Vec<f64>> + Sync,
    {
        GridField::check_shape(dim, shape)?;
        let npts: usize = shape.iter().product();
        let per_point: Vec<Result<Vec<f64>>> = (0..npts)
            .into_par_iter()
            .map(|p| {
                let x = point_of(shape, p);
                f(p, &x)
            })
            .collect();
        let per_point = per_point.into_iter().collect::<Result<Vec<_>>>()?;
        GridField::from_points(dim, shape.to_vec(), rank, per_point)
    }

    fn from_points(
        dim: usize,
        shape: Vec<usize>,
        rank: Rank,
        per_point: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let nc = rank.components();
        let npts = per_point.len();
        let mut data = vec![0.0; npts * nc];
        for (p, vals) in per_point.iter().enumerate() {
            if vals.len() != nc {
                return Err(Error::domain(
                    "point function returned wrong component count",
                ));
            }
            for (c, v) in vals.iter().enumerate() {
                data[c * npts + p] = *v;
            }
        }
        GridField::new(dim, shape, rank, data)
    }

    pub fn from_matrices(dim: usize, shape: &[usize], mats: Vec<DMatrix<f64>>) -> Result<Self> {
        let (r, c) = mats
            .first()
            .map(|m| m.shape())
            .ok_or_else(|| Error::domain("no matrices"))?;
        let per_point = mats
            .iter()
            .map(|m| {
                // row-major component order
                let mut v = Vec::with_capacity(r * c);
                for i in 0..r {
                    for j in 0..c {
                        v.push(m[(i, j)]);
                    }
                }
                v
            })
            .collect();
        GridField::check_shape(dim, shape)?;
        GridField::from_points(dim, shape.to_vec(), Rank::Matrix(r, c), per_point)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn npoints(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn point(&self, p: usize) -> Vec<f64> {
        point_of(&self.shape, p)
    }

    pub fn value(&self, p: usize, c: usize) -> f64 {
        self.data[c * self.npoints() + p]
    }

    pub fn values(&self, p: usize) -> Vec<f64> {
        (0..self.rank.components())
            .map(|c| self.value(p, c))
            .collect()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.npoints();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn matrix_at(&self, p: usize) -> DMatrix<f64> {
        let (r, c) = match self.rank {
            Rank::Matrix(r, c) => (r, c),
            Rank::Vector(n) => (n, 1),
            Rank::Scalar => (1, 1),
        };
        DMatrix::from_fn(r, c, |i, j| self.value(p, i * c + j))
    }

    pub fn matrices(&self) -> Vec<DMatrix<f64>> {
        (0..self.npoints()).map(|p| self.matrix_at(p)).collect()
    }

    /// Mean of each component over the grid (pairwise summation).
    pub fn integrate_components(&self) -> Vec<f64> {
        (0..self.rank.components())
            .map(|c| pairwise_mean(self.component(c)))
            .collect()
    }

    /// Trapezoidal rule, exact for integrands resolved by the grid.
    pub fn integrate(&self) -> Result<f64> {
        if self.rank != Rank::Scalar {
            return Err(Error::domain("integrate needs a scalar field"));
        }
        Ok(pairwise_mean(&self.data))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Fourier coefficients up to `band`; requires `shape >= 2 band + 1` on
    /// every axis so that no retained mode is aliased.
    pub fn analyze(&self, band: usize) -> Result<FourierField> {
        if let Some(s) = self.shape.iter().find(|&&s| s < 2 * band + 1) {
            return Err(Error::numeric(format!(
                "grid size {s} cannot resolve bandlimit {band}"
            )));
        }
        let npts = self.npoints();
        let n = mode_count(self.dim, band);
        let mut coeffs = Vec::with_capacity(self.rank.components());
        for c in 0..self.rank.components() {
            let mut buf: Vec<Complex64> = self
                .component(c)
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect();
            fft_nd(&mut buf, &self.shape, FftDirection::Forward);
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for (idx, slot) in row.iter_mut().enumerate() {
                let k = mode_of(idx, self.dim, band);
                let mut pos = 0usize;
                for (a, &ka) in k.iter().enumerate() {
                    pos = pos * self.shape[a] + ka.rem_euclid(self.shape[a] as i64) as usize;
                }
                *slot = buf[pos] / npts as f64;
            }
            // symmetrise away roundoff so the result is exactly Hermitian
            let snapshot = row.clone();
            for idx in 0..n {
                row[idx] = (snapshot[idx] + snapshot[n - 1 - idx].conj()) * 0.5;
            }
            coeffs.push(row);
        }
        Ok(FourierField::from_raw(self.dim, self.rank, band, coeffs))
    }
}

pub(crate) fn point_of(shape: &[usize], mut p: usize) -> Vec<f64> {
    let mut x = vec![0.0; shape.len()];
    for a in (0..shape.len()).rev() {
        x[a] = (p % shape[a]) as f64 / shape[a] as f64;
        p /= shape[a];
    }
    x
}

/// Smallest admissible grid side resolving a bandlimit without aliasing.
pub fn resolving_side(band: usize) -> usize {
    (2 * band + 1).next_power_of_two().max(4)
}
