use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::fourier::{index_of, mode_count, mode_of, FourierField, Rank};
use super::grid::{resolving_side, GridField};
use crate::error::{Error, Result};

/// Relative tolerance for the spectral divergence check.
pub const DIV_TOL: f64 = 1e-10;

/// Evaluates a pointwise (generally nonlinear) combination of fields on a grid
/// resolving `out_band`, then returns its coefficients up to `out_band`. Exact
/// whenever the true result is band-limited by `out_band`.
pub fn combine<F>(
    inputs: &[&FourierField],
    out_rank: Rank,
    out_band: usize,
    f: F,
) -> Result<FourierField>
where
    F: Fn(&[Vec<f64>]) -> Vec<f64> + Sync,
{
    let dim = inputs
        .first()
        .map(|x| x.dim())
        .ok_or_else(|| Error::domain("combine needs inputs"))?;
    if inputs.iter().any(|x| x.dim() != dim) {
        return Err(Error::domain("inputs live on different tori"));
    }
    let side = resolving_side(out_band);
    let grids = inputs
        .iter()
        .map(|x| x.sample(side))
        .collect::<Result<Vec<_>>>()?;
    let shape = vec![side; dim];
    let out = GridField::from_fn(dim, &shape, out_rank, |p, _| {
        let vals: Vec<Vec<f64>> = grids.iter().map(|g| g.values(p)).collect();
        f(&vals)
    })?;
    out.analyze(out_band)
}

/// Pointwise product of a scalar field with any field.
pub fn product(s: &FourierField, x: &FourierField) -> Result<FourierField> {
    if s.rank() != Rank::Scalar {
        return Err(Error::domain("left factor of a product must be scalar"));
    }
    combine(&[s, x], x.rank(), s.bandlimit() + x.bandlimit(), |v| {
        v[1].iter().map(|y| v[0][0] * y).collect()
    })
}

pub fn gradient(f: &FourierField) -> Result<FourierField> {
    if f.rank() != Rank::Scalar {
        return Err(Error::domain("gradient needs a scalar field"));
    }
    let parts: Vec<_> = (0..f.dim()).map(|a| f.derivative(a)).collect();
    FourierField::from_components(&parts)
}

fn check_tangent_field(x: &FourierField) -> Result<()> {
    if x.rank() != Rank::Vector(x.dim()) {
        return Err(Error::domain(
            "expected a vector field with one component per axis",
        ));
    }
    Ok(())
}

pub fn divergence(x: &FourierField) -> Result<FourierField> {
    check_tangent_field(x)?;
    let mut out = FourierField::zeros(x.dim(), Rank::Scalar, x.bandlimit());
    for a in 0..x.dim() {
        out = out.add(&x.component(a).derivative(a))?;
    }
    Ok(out)
}

/// Relative spectral divergence `max|div X| / (2 pi B max|X|)` over coefficients.
pub fn divergence_defect(x: &FourierField) -> Result<f64> {
    let d = divergence(x)?.max_coeff();
    let scale = 2.0 * PI * x.bandlimit().max(1) as f64 * x.max_coeff();
    Ok(if scale == 0.0 { 0.0 } else { d / scale })
}

pub fn curl(x: &FourierField) -> Result<FourierField> {
    if x.dim() != 3 {
        return Err(Error::domain("curl is defined on T^3"));
    }
    check_tangent_field(x)?;
    let d = |c: usize, a: usize| x.component(c).derivative(a);
    FourierField::from_components(&[
        d(2, 1).sub(&d(1, 2))?,
        d(0, 2).sub(&d(2, 0))?,
        d(1, 0).sub(&d(0, 1))?,
    ])
}

/// `DX` as a matrix field: entry `(a, b)` is `d_b X^a`.
pub fn jacobian(x: &FourierField) -> Result<FourierField> {
    check_tangent_field(x)?;
    let n = x.dim();
    let mut parts = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            parts.push(x.component(a).derivative(b));
        }
    }
    FourierField::stack(&parts, Rank::Matrix(n, n))
}

/// `X_f = (f_y, -f_x)`, the field with `i_X w = -df` for `w = dx ^ dy`,
/// i.e. `X_f = J0 grad f`.
pub fn hamiltonian_field(f: &FourierField) -> Result<FourierField> {
    if f.dim() != 2 || f.rank() != Rank::Scalar {
        return Err(Error::domain("Hamiltonian fields need a scalar on T^2"));
    }
    FourierField::from_components(&[f.derivative(1), f.derivative(0).scale(-1.0)])
}

/// The zero-mean, divergence-free `A` with `curl A = X`.
pub fn curl_inverse(x: &FourierField) -> Result<FourierField> {
    if x.dim() != 3 {
        return Err(Error::domain("curl_inverse is defined on T^3"));
    }
    check_tangent_field(x)?;
    for (component, mean) in x.mean().into_iter().enumerate() {
        if mean != 0.0 {
            return Err(Error::HarmonicObstruction { component, mean });
        }
    }
    let defect = divergence_defect(x)?;
    if defect > DIV_TOL {
        return Err(Error::domain(format!(
            "field is not divergence-free (relative defect {defect:e})"
        )));
    }
    let band = x.bandlimit();
    let n = mode_count(3, band);
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); n]; 3];
    for idx in 0..n {
        let k = mode_of(idx, 3, band);
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        if k2 == 0.0 {
            continue;
        }
        let xh: Vec<Complex64> = (0..3).map(|c| x.raw()[c][idx]).collect();
        let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
        let cross = [
            xh[2] * kf[1] - xh[1] * kf[2],
            xh[0] * kf[2] - xh[2] * kf[0],
            xh[1] * kf[0] - xh[0] * kf[1],
        ];
        let factor = Complex64::new(0.0, 2.0 * PI) / (4.0 * PI * PI * k2);
        for c in 0..3 {
            coeffs[c][idx] = cross[c] * factor;
        }
    }
    Ok(FourierField::from_raw(3, Rank::Vector(3), band, coeffs))
}

/// `[X, Y] = (X.grad) Y - (Y.grad) X`, the usual vector-field bracket.
pub fn bracket(x: &FourierField, y: &FourierField) -> Result<FourierField> {
    check_tangent_field(x)?;
    check_tangent_field(y)?;
    if x.dim() != y.dim() {
        return Err(Error::domain("bracket of fields on different tori"));
    }
    let n = x.dim();
    let dx = jacobian(x)?;
    let dy = jacobian(y)?;
    let band = x.bandlimit() + y.bandlimit();
    combine(&[x, y, &dx, &dy], Rank::Vector(n), band, |v| {
        let (xv, yv, dxv, dyv) = (&v[0], &v[1], &v[2], &v[3]);
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| xv[b] * dyv[a * n + b] - yv[b] * dxv[a * n + b])
                    .sum()
            })
            .collect()
    })
}

/// `int X.Y` by Parseval; exact.
pub fn inner_product(x: &FourierField, y: &FourierField) -> Result<f64> {
    if x.dim() != y.dim() || x.rank() != y.rank() {
        return Err(Error::domain("inner product of mismatched fields"));
    }
    let band = x.bandlimit().max(y.bandlimit());
    let (a, b) = (x.with_bandlimit(band), y.with_bandlimit(band));
    let mut total = 0.0;
    for (ra, rb) in a.raw().iter().zip(b.raw()) {
        let terms: Vec<f64> = ra.iter().zip(rb).map(|(p, q)| (p * q.conj()).re).collect();
        total += crate::numerics::pairwise_sum(&terms);
    }
    Ok(total)
}

/// `(A_* X)(x) = A X(A^-1 x)` for an integer matrix `A` with determinant 1;
/// scalars transform as `f(A^-1 x)`.
pub fn linear_pushforward(x: &FourierField, a: &[Vec<i64>]) -> Result<FourierField> {
    let n = x.dim();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::domain("matrix size differs from torus dimension"));
    }
    let af = DMatrix::from_fn(n, n, |i, j| a[i][j] as f64);
    if (af.determinant() - 1.0).abs() > 1e-9 {
        return Err(Error::domain("linear torus map needs determinant 1"));
    }
    let ainv = af
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::domain("singular matrix"))?;
    // exp(2 pi i k.A^-1 x) = exp(2 pi i (A^-T k).x)
    let ainv_t = ainv.transpose();
    let map_k = |k: &[i64]| -> Vec<i64> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ainv_t[(i, j)] * k[j] as f64)
                    .sum::<f64>()
                    .round() as i64
            })
            .collect()
    };
    let terms = x.terms();
    let band = terms
        .iter()
        .map(|(_, k, _)| {
            map_k(k)
                .iter()
                .map(|v| v.unsigned_abs() as usize)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let vector = x.rank() == Rank::Vector(n);
    if !vector && x.rank() != Rank::Scalar {
        return Err(Error::domain(
            "linear pushforward supports scalar and tangent fields",
        ));
    }
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); mode_count(n, band)]; x.components()];
    for (c, k, v) in terms {
        let idx = index_of(&map_k(&k), band).expect("band covers mapped modes");
        if vector {
            for r in 0..n {
                coeffs[r][idx] += v * af[(r, c)];
            }
        } else {
            coeffs[0][idx] += v;
        }
    }
    Ok(FourierField::from_raw(n, x.rank(), band, coeffs))
}

/// A random zero-mean divergence-free field on `T^3`: the curl of a random
/// potential of the given bandlimit.
pub fn random_div_free<R: Rng>(rng: &mut R, band: usize, amplitude: f64) -> FourierField {
    let potential = FourierField::random(rng, 3, Rank::Vector(3), band, amplitude);
    curl(&potential).expect("curl of a vector field on T^3")
}

/// A random zero-mean Hamiltonian function on `T^2` and its field.
pub fn random_hamiltonian<R: Rng>(
    rng: &mut R,
    band: usize,
    amplitude: f64,
) -> (FourierField, FourierField) {
    let mut f = FourierField::random(rng, 2, Rank::Scalar, band, amplitude);
    f.set_coeff(0, &[0, 0], Complex64::new(0.0, 0.0))
        .expect("mean slot exists");
    let x = hamiltonian_field(&f).expect("scalar on T^2");
    (f, x)
}
