use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

const UNIT_TOL: f64 = 1e-12;

/// A unit quaternion `w + x i + y j + z k`, stored as `[w, x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S3Point {
    q: [f64; 4],
}

pub(crate) fn qmul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

const UNITS: [[f64; 4]; 3] = [
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

impl S3Point {
    pub fn new(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::domain(format!(
                "quaternion has norm {norm}, expected 1"
            )));
        }
        Ok(S3Point { q })
    }

    pub fn identity() -> Self {
        S3Point {
            q: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// A uniformly distributed point.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.1 && n <= 1.0 {
                return S3Point {
                    q: q.map(|v| v / n),
                };
            }
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        self.q
    }

    pub fn mul(&self, other: &S3Point) -> S3Point {
        S3Point {
            q: qmul(&self.q, &other.q),
        }
    }

    /// The right-invariant frame `e_i(q) = u_i q` for `u = i, j, k`.
    pub fn frame(&self) -> [[f64; 4]; 3] {
        UNITS.map(|u| qmul(&u, &self.q))
    }

    /// `nu(a, b, c) = det[q, a, b, c]` on tangent vectors at `q`.
    pub fn volume_form(&self, a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> f64 {
        det4(&self.q, a, b, c)
    }
}

fn det4(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4], d: &[f64; 4]) -> f64 {
    Matrix4::from_fn(|r, col| [a, b, c, d][r][col]).determinant()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct S3Report {
    /// `int nu(e_1, e_2, e_3) d nu` in Hopf coordinates.
    pub volume_period: f64,
    /// Extremes of `nu(e_1, e_2, e_3)` over random points.
    pub frame_volume_min: f64,
    pub frame_volume_max: f64,
    /// `max |d mu - X _| nu|` for `X = e_1` in a stereographic chart.
    pub dmu_residual: f64,
    /// Least-squares ratio `d mu / (X _| nu)` over the same samples.
    pub dmu_ratio: f64,
    pub samples: usize,
    pub step: f64,
}

/// Hopf coordinates `q = (cos eta e^{i a}, sin eta e^{i b})`.
fn hopf(eta: f64, a: f64, b: f64) -> [f64; 4] {
    [
        eta.cos() * a.cos(),
        eta.cos() * a.sin(),
        eta.sin() * b.cos(),
        eta.sin() * b.sin(),
    ]
}

/// Tangent vectors `d/d eta`, `d/da`, `d/db` of the Hopf parametrisation.
fn hopf_tangents(eta: f64, a: f64, b: f64) -> [[f64; 4]; 3] {
    [
        [
            -eta.sin() * a.cos(),
            -eta.sin() * a.sin(),
            eta.cos() * b.cos(),
            eta.cos() * b.sin(),
        ],
        [-eta.cos() * a.sin(), eta.cos() * a.cos(), 0.0, 0.0],
        [0.0, 0.0, -eta.sin() * b.sin(), eta.sin() * b.cos()],
    ]
}

/// Hopf-coordinate integral of `nu(e_1, e_2, e_3)` with `nodes` Gauss-Legendre
/// points in `eta` and `4 nodes` trapezoid points in each angle.
pub fn s3_volume_period(nodes: usize) -> f64 {
    let (x, w) = gauss_legendre(nodes);
    let m = 4 * nodes;
    let h = 2.0 * PI / m as f64;
    let mut total = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let eta = 0.5 * PI * xi;
        let mut ring = 0.0;
        for ia in 0..m {
            for ib in 0..m {
                let (a, b) = (ia as f64 * h, ib as f64 * h);
                let q = hopf(eta, a, b);
                let t = hopf_tangents(eta, a, b);
                let jac = det4(&q, &t[0], &t[1], &t[2]).abs();
                let p = S3Point { q };
                let [e1, e2, e3] = p.frame();
                ring += p.volume_form(&e1, &e2, &e3) * jac;
            }
        }
        total += wi * 0.5 * PI * ring * h * h;
    }
    total
}

/// Inverse stereographic chart `R^3 -> S^3` from `-1`.
fn chart(y: &[f64; 3]) -> [f64; 4] {
    let r2 = y.iter().map(|v| v * v).sum::<f64>();
    let s = 1.0 + r2;
    [
        (1.0 - r2) / s,
        2.0 * y[0] / s,
        2.0 * y[1] / s,
        2.0 * y[2] / s,
    ]
}

fn chart_tangent(y: &[f64; 3], a: usize) -> [f64; 4] {
    let r2 = y.iter().map(|v| v * v).sum::<f64>();
    let s = 1.0 + r2;
    let p = chart(y);
    let mut t = [0.0; 4];
    t[0] = -2.0 * y[a] / s;
    t[a + 1] = 2.0 / s;
    for c in 0..4 {
        t[c] -= p[c] * 2.0 * y[a] / s;
    }
    t
}

/// `mu_a(y) = <e_1, d_a chart>` at `y`.
fn mu(y: &[f64; 3], a: usize) -> f64 {
    let q = chart(y);
    let x = qmul(&UNITS[0], &q);
    let t = chart_tangent(y, a);
    (0..4).map(|c| x[c] * t[c]).sum()
}

/// Volume period, frame volumes at `samples` random points, and the
/// `d mu` comparison with central differences of step `step`.
pub fn s3_checks_with(samples: usize, step: f64, seed: u64) -> S3Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let p = S3Point::random(&mut rng);
        let [e1, e2, e3] = p.frame();
        let v = p.volume_form(&e1, &e2, &e3);
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    let (mut residual, mut num, mut den) = (0.0f64, 0.0, 0.0);
    for _ in 0..samples {
        let y: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.8..0.8));
        let q = S3Point { q: chart(&y) };
        let x = q.frame()[0];
        let d = |a: usize, b: usize| {
            let (mut yp, mut ym) = (y, y);
            yp[a] += step;
            ym[a] -= step;
            (mu(&yp, b) - mu(&ym, b)) / (2.0 * step)
        };
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let dmu = d(a, b) - d(b, a);
            let contraction = q.volume_form(&x, &chart_tangent(&y, a), &chart_tangent(&y, b));
            residual = residual.max((dmu - contraction).abs());
            num += dmu * contraction;
            den += contraction * contraction;
        }
    }
    S3Report {
        volume_period: s3_volume_period(24),
        frame_volume_min: vmin,
        frame_volume_max: vmax,
        dmu_residual: residual,
        dmu_ratio: num / den,
        samples,
        step,
    }
}

/// [`s3_checks_with`] at 100 samples, step `1e-4`, seed 0.
pub fn s3_checks() -> S3Report {
    s3_checks_with(100, 1e-4, 0)
}
