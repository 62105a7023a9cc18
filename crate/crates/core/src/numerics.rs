//! Small numerical kernels shared by the geometry modules: fixed-order
//! reductions, permutation enumeration, Gauss-Legendre rules and functions of
//! symmetric matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues below this are treated as a failed positivity check.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// Pairwise (tree) summation in a fixed order. The result depends only on the
/// input slice, never on thread count.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn pairwise_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    pairwise_sum(values) / values.len() as f64
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// All permutations of `0..n` together with their signs, in Heap's order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1.0;
    out.push((perm.clone(), sign));
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Symmetric eigendecomposition of the symmetric part of `m`.
pub fn sym_eigen(m: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let sym = symmetrize(m);
    SymmetricEigen::new(sym)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn rebuild(vectors: &DMatrix<f64>, values: &DVector<f64>) -> DMatrix<f64> {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * values[j]
    });
    symmetrize(&(scaled * vectors.transpose()))
}

/// `f(m)` for a symmetric positive-definite `m`, through its eigendecomposition.
pub fn spd_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let eig = sym_eigen(m);
    if let Some(bad) = eig.eigenvalues.iter().find(|&&l| l < EIGEN_FLOOR) {
        return Err(Error::numeric(format!(
            "eigenvalue {bad:e} below floor {EIGEN_FLOOR:e}"
        )));
    }
    let mapped = eig.eigenvalues.map(f);
    Ok(rebuild(&eig.eigenvectors, &mapped))
}

/// `f(m)` for an arbitrary symmetric `m`.
pub fn sym_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let eig = sym_eigen(m);
    let mapped = eig.eigenvalues.map(f);
    rebuild(&eig.eigenvectors, &mapped)
}

/// Frechet derivative of the matrix function `f` at symmetric `m` in the
/// symmetric direction `e` (Daleckii-Krein divided differences).
pub fn sym_function_derivative(
    m: &DMatrix<f64>,
    e: &DMatrix<f64>,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
) -> DMatrix<f64> {
    let eig = sym_eigen(m);
    let u = &eig.eigenvectors;
    let lam = &eig.eigenvalues;
    let n = lam.len();
    let mut inner = u.transpose() * e * u;
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (lam[i], lam[j]);
            let gap = li - lj;
            let dd = if gap.abs() <= 1e-9 * li.abs().max(lj.abs()).max(1.0) {
                df(0.5 * (li + lj))
            } else {
                (f(li) - f(lj)) / gap
            };
            inner[(i, j)] *= dd;
        }
    }
    symmetrize(&(u * inner * u.transpose()))
}

/// Frobenius-norm relative asymmetry of a square matrix.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let diff = (m - m.transpose()).norm();
    diff / m.norm().max(f64::MIN_POSITIVE)
}
