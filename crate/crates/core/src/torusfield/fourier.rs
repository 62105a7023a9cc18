use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftDirection;

use super::fft::fft_nd;
use super::grid::GridField;
use crate::error::{Error, Result};

/// Number of components and their layout. Matrix components are row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector(usize),
    Matrix(usize, usize),
}

impl Rank {
    pub fn components(&self) -> usize {
        match *self {
            Rank::Scalar => 1,
            Rank::Vector(n) => n,
            Rank::Matrix(r, c) => r * c,
        }
    }
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A real band-limited field on `T^N = R^N / Z^N`,
/// `sum_k c_k exp(2 pi i k.x)` over `|k|_inf <= bandlimit`.
///
/// Coefficients are stored densely per component, indexed row-major over
/// `[-B, B]^N`. Hermitian symmetry `c_{-k} = conj(c_k)` is maintained by every
/// constructor.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    dim: usize,
    bandlimit: usize,
    rank: Rank,
    coeffs: Vec<Vec<Complex64>>,
}

pub(crate) fn mode_count(dim: usize, band: usize) -> usize {
    (2 * band + 1).pow(dim as u32)
}

pub(crate) fn mode_of(mut idx: usize, dim: usize, band: usize) -> Vec<i64> {
    let side = 2 * band + 1;
    let mut k = vec![0i64; dim];
    for a in (0..dim).rev() {
        k[a] = (idx % side) as i64 - band as i64;
        idx /= side;
    }
    k
}

pub(crate) fn index_of(k: &[i64], band: usize) -> Option<usize> {
    let side = (2 * band + 1) as i64;
    let mut idx = 0i64;
    for &ka in k {
        if ka.unsigned_abs() as usize > band {
            return None;
        }
        idx = idx * side + ka + band as i64;
    }
    Some(idx as usize)
}

impl FourierField {
    pub fn zeros(dim: usize, rank: Rank, bandlimit: usize) -> Self {
        assert!(dim > 0, "torus dimension must be positive");
        let n = mode_count(dim, bandlimit);
        FourierField {
            dim,
            bandlimit,
            rank,
            coeffs: vec![vec![ZERO; n]; rank.components()],
        }
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        let mut f = FourierField::zeros(dim, Rank::Scalar, 0);
        f.coeffs[0][0] = Complex64::new(value, 0.0);
        f
    }

    pub fn constant_vector(dim: usize, values: &[f64]) -> Self {
        let mut f = FourierField::zeros(dim, Rank::Vector(values.len()), 0);
        for (c, v) in values.iter().enumerate() {
            f.coeffs[c][0] = Complex64::new(*v, 0.0);
        }
        f
    }

    /// `a cos(2 pi k.x) + b sin(2 pi k.x)` as a scalar field.
    pub fn mode(dim: usize, k: &[i64], a: f64, b: f64) -> Self {
        assert_eq!(k.len(), dim, "frequency vector length");
        let band = k
            .iter()
            .map(|x| x.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut f = FourierField::zeros(dim, Rank::Scalar, band);
        if k.iter().all(|&x| x == 0) {
            f.coeffs[0][index_of(k, band).unwrap()] = Complex64::new(a, 0.0);
        } else {
            f.set_coeff(0, k, Complex64::new(0.5 * a, -0.5 * b))
                .unwrap();
        }
        f
    }

    /// Random Hermitian coefficients with real and imaginary parts uniform in
    /// `[-amplitude, amplitude]`; the mean is included.
    pub fn random<R: Rng>(
        rng: &mut R,
        dim: usize,
        rank: Rank,
        bandlimit: usize,
        amplitude: f64,
    ) -> Self {
        let mut f = FourierField::zeros(dim, rank, bandlimit);
        let n = mode_count(dim, bandlimit);
        let centre = n / 2;
        for c in 0..rank.components() {
            for idx in centre..n {
                let re = rng.gen_range(-amplitude..=amplitude);
                let im = if idx == centre {
                    0.0
                } else {
                    rng.gen_range(-amplitude..=amplitude)
                };
                f.coeffs[c][idx] = Complex64::new(re, im);
                f.coeffs[c][n - 1 - idx] = Complex64::new(re, -im);
            }
        }
        f
    }

    /// Assembles a vector field from scalar components.
    pub fn from_components(parts: &[FourierField]) -> Result<Self> {
        FourierField::stack(parts, Rank::Vector(parts.len()))
    }

    pub fn stack(parts: &[FourierField], rank: Rank) -> Result<Self> {
        if parts.is_empty() || parts.len() != rank.components() {
            return Err(Error::domain("component count does not match rank"));
        }
        let dim = parts[0].dim;
        let band = parts.iter().map(|p| p.bandlimit).max().unwrap();
        let mut out = FourierField::zeros(dim, rank, band);
        for (c, p) in parts.iter().enumerate() {
            if p.dim != dim || p.rank != Rank::Scalar {
                return Err(Error::domain(
                    "components must be scalars on the same torus",
                ));
            }
            out.coeffs[c] = p.with_bandlimit(band).coeffs.swap_remove(0);
        }
        Ok(out)
    }

    pub(crate) fn from_raw(
        dim: usize,
        rank: Rank,
        bandlimit: usize,
        coeffs: Vec<Vec<Complex64>>,
    ) -> Self {
        debug_assert_eq!(coeffs.len(), rank.components());
        debug_assert!(coeffs.iter().all(|c| c.len() == mode_count(dim, bandlimit)));
        FourierField {
            dim,
            bandlimit,
            rank,
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn components(&self) -> usize {
        self.rank.components()
    }

    pub(crate) fn raw(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn coeff(&self, component: usize, k: &[i64]) -> Complex64 {
        index_of(k, self.bandlimit)
            .map(|i| self.coeffs[component][i])
            .unwrap_or(ZERO)
    }

    /// Sets `c_k` and its partner `c_{-k} = conj(c_k)`.
    pub fn set_coeff(&mut self, component: usize, k: &[i64], value: Complex64) -> Result<()> {
        if k.len() != self.dim {
            return Err(Error::domain("frequency vector has wrong length"));
        }
        let idx = index_of(k, self.bandlimit).ok_or_else(|| {
            Error::domain(format!(
                "frequency {k:?} exceeds bandlimit {}",
                self.bandlimit
            ))
        })?;
        let n = self.coeffs[component].len();
        if idx == n / 2 {
            if value.im != 0.0 {
                return Err(Error::domain("mean coefficient must be real"));
            }
            self.coeffs[component][idx] = value;
        } else {
            self.coeffs[component][idx] = value;
            self.coeffs[component][n - 1 - idx] = value.conj();
        }
        Ok(())
    }

    /// Nonzero coefficients as `(component, k, c_k)`, in storage order.
    pub fn terms(&self) -> Vec<(usize, Vec<i64>, Complex64)> {
        let mut out = Vec::new();
        for (c, row) in self.coeffs.iter().enumerate() {
            for (idx, v) in row.iter().enumerate() {
                if *v != ZERO {
                    out.push((c, mode_of(idx, self.dim, self.bandlimit), *v));
                }
            }
        }
        out
    }

    pub fn component(&self, c: usize) -> FourierField {
        FourierField {
            dim: self.dim,
            bandlimit: self.bandlimit,
            rank: Rank::Scalar,
            coeffs: vec![self.coeffs[c].clone()],
        }
    }

    /// Pads with zeros or truncates to a new bandlimit.
    pub fn with_bandlimit(&self, band: usize) -> FourierField {
        if band == self.bandlimit {
            return self.clone();
        }
        let mut out = FourierField::zeros(self.dim, self.rank, band);
        let n = mode_count(self.dim, self.bandlimit);
        for idx in 0..n {
            let k = mode_of(idx, self.dim, self.bandlimit);
            if let Some(j) = index_of(&k, band) {
                for c in 0..self.components() {
                    out.coeffs[c][j] = self.coeffs[c][idx];
                }
            }
        }
        out
    }

    /// Smallest bandlimit holding every nonzero coefficient.
    pub fn effective_bandlimit(&self) -> usize {
        self.terms()
            .iter()
            .map(|(_, k, _)| {
                k.iter()
                    .map(|x| x.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &FourierField) -> Result<()> {
        if self.dim != other.dim || self.rank != other.rank {
            return Err(Error::domain("fields differ in dimension or rank"));
        }
        Ok(())
    }

    pub fn add(&self, other: &FourierField) -> Result<FourierField> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &FourierField) -> Result<FourierField> {
        self.axpy(-1.0, other)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &FourierField) -> Result<FourierField> {
        self.check_compatible(other)?;
        let band = self.bandlimit.max(other.bandlimit);
        let mut a = self.with_bandlimit(band);
        let b = other.with_bandlimit(band);
        for (ra, rb) in a.coeffs.iter_mut().zip(&b.coeffs) {
            for (x, y) in ra.iter_mut().zip(rb) {
                *x += y * s;
            }
        }
        Ok(a)
    }

    pub fn scale(&self, s: f64) -> FourierField {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        out
    }

    /// Exact derivative along `axis`: multiplication by `2 pi i k_axis`.
    pub fn derivative(&self, axis: usize) -> FourierField {
        assert!(axis < self.dim, "axis out of range");
        let mut out = self.clone();
        let n = mode_count(self.dim, self.bandlimit);
        for idx in 0..n {
            let k = mode_of(idx, self.dim, self.bandlimit)[axis];
            let factor = Complex64::new(0.0, 2.0 * PI * k as f64);
            for row in &mut out.coeffs {
                row[idx] *= factor;
            }
        }
        out
    }

    /// True when some coefficient with nonzero `k_axis` is nonzero.
    pub fn depends_on_axis(&self, axis: usize) -> bool {
        self.terms().iter().any(|(_, k, _)| k[axis] != 0)
    }

    /// Mean of every component (the `k = 0` coefficients).
    pub fn mean(&self) -> Vec<f64> {
        let centre = mode_count(self.dim, self.bandlimit) / 2;
        self.coeffs.iter().map(|row| row[centre].re).collect()
    }

    /// `int_{T^N} f dx` with total volume 1; exact.
    pub fn integrate(&self) -> Result<f64> {
        if self.rank != Rank::Scalar {
            return Err(Error::domain("integrate needs a scalar field"));
        }
        Ok(self.mean()[0])
    }

    /// Largest coefficient modulus over all components.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Values of all components at `x` by direct summation.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "point dimension");
        let b = self.bandlimit as i64;
        let side = 2 * self.bandlimit + 1;
        // exp(2 pi i k x_a) for k in -B..=B, per axis
        let phases: Vec<Vec<Complex64>> = x
            .iter()
            .map(|&xa| {
                (-b..=b)
                    .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * xa))
                    .collect()
            })
            .collect();
        let n = mode_count(self.dim, self.bandlimit);
        let mut out = vec![0.0; self.components()];
        for idx in 0..n {
            if self.coeffs.iter().all(|row| row[idx] == ZERO) {
                continue;
            }
            let mut rest = idx;
            let mut e = Complex64::new(1.0, 0.0);
            for a in (0..self.dim).rev() {
                e *= phases[a][rest % side];
                rest /= side;
            }
            for (c, row) in self.coeffs.iter().enumerate() {
                let v = row[idx];
                out[c] += v.re * e.re - v.im * e.im;
            }
        }
        out
    }

    pub fn evaluate_scalar(&self, x: &[f64]) -> f64 {
        self.evaluate(x)[0]
    }

    /// Values on the uniform grid `x_a = i_a / side`, `side^N` points, exact at
    /// the grid points for any bandlimit (coefficients are folded before the
    /// inverse transform).
    pub fn sample(&self, side: usize) -> Result<GridField> {
        let shape = vec![side; self.dim];
        self.sample_shape(&shape)
    }

    pub fn sample_shape(&self, shape: &[usize]) -> Result<GridField> {
        GridField::check_shape(self.dim, shape)?;
        let npts: usize = shape.iter().product();
        let n = mode_count(self.dim, self.bandlimit);
        let modes: Vec<Vec<i64>> = (0..n)
            .map(|i| mode_of(i, self.dim, self.bandlimit))
            .collect();
        let mut data = Vec::with_capacity(npts * self.components());
        for row in &self.coeffs {
            let mut buf = vec![ZERO; npts];
            for (idx, k) in modes.iter().enumerate() {
                if row[idx] == ZERO {
                    continue;
                }
                let mut pos = 0usize;
                for (a, &ka) in k.iter().enumerate() {
                    pos = pos * shape[a] + ka.rem_euclid(shape[a] as i64) as usize;
                }
                buf[pos] += row[idx];
            }
            fft_nd(&mut buf, shape, FftDirection::Inverse);
            data.extend(buf.iter().map(|z| z.re));
        }
        GridField::new(self.dim, shape.to_vec(), self.rank, data)
    }
}
