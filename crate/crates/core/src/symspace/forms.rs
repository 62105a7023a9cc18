use nalgebra::DMatrix;

use super::spd::{SpdPoint, SymTangent};
use crate::error::{Error, Result};
use crate::numerics::factorial;

/// Value of an invariant form together with a note when the form is known to
/// vanish identically for the given degree and matrix size.
#[derive(Debug, Clone, PartialEq)]
pub struct FormEval {
    pub value: f64,
    pub warning: Option<String>,
}

/// `(1/m!) sum_sigma sgn(sigma) Tr(prefix * M_sigma(1) ... M_sigma(m))`.
///
/// Permutations are enumerated depth-first with shared partial products.
pub fn alternating_trace_prefixed(prefix: Option<&DMatrix<f64>>, mats: &[DMatrix<f64>]) -> f64 {
    let m = mats.len();
    if m == 0 {
        return prefix.map(|p| p.trace()).unwrap_or(0.0);
    }
    let n = mats[0].nrows();
    let start = prefix.cloned().unwrap_or_else(|| DMatrix::identity(n, n));
    let mut remaining: Vec<usize> = (0..m).collect();
    let total = dfs(&start, mats, &mut remaining);
    total / factorial(m)
}

fn dfs(acc: &DMatrix<f64>, mats: &[DMatrix<f64>], remaining: &mut Vec<usize>) -> f64 {
    if remaining.len() == 1 {
        // Tr(acc * M) without forming the product.
        let last = &mats[remaining[0]];
        return acc.component_mul(&last.transpose()).sum();
    }
    let mut total = 0.0;
    let mut sign = 1.0;
    for r in 0..remaining.len() {
        let idx = remaining.remove(r);
        let next = acc * &mats[idx];
        total += sign * dfs(&next, mats, remaining);
        remaining.insert(r, idx);
        sign = -sign;
    }
    total
}

/// `Alt Tr(X_1 ... X_d)` normalised by `1/d!`.
///
/// For odd `d` the cyclic shifts are even permutations with equal trace, so the
/// first factor can be pinned.
pub fn alternating_trace(mats: &[DMatrix<f64>]) -> f64 {
    let d = mats.len();
    if d == 0 {
        return 0.0;
    }
    if d % 2 == 1 {
        alternating_trace_prefixed(Some(&mats[0]), &mats[1..])
    } else {
        alternating_trace_prefixed(None, mats)
    }
}

/// The odd invariant form on `SL_N(R)/SO(N)` at `g`:
/// `(1/d!) Alt Tr prod_j (g^-1 h_j)`.
///
/// Invariant under `g -> a^T g a`, `h -> a^T h a`. Degrees other than
/// `5, 9, 13, ...`, or above the fiber dimension `N(N+1)/2 - 1`, give an
/// identically vanishing form and carry a warning.
pub fn borel_odd_form(g: &SpdPoint, tangents: &[SymTangent]) -> Result<FormEval> {
    let n = g.dim();
    if tangents.iter().any(|h| h.mat().nrows() != n) {
        return Err(Error::domain("tangent size differs from base point"));
    }
    let ginv = g
        .mat()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numeric("base point not invertible"))?;
    let mats: Vec<DMatrix<f64>> = tangents.iter().map(|h| &ginv * h.mat()).collect();
    let value = alternating_trace(&mats);
    Ok(FormEval {
        value,
        warning: vanishing_warning(tangents.len(), n),
    })
}

pub(crate) fn vanishing_warning(degree: usize, n: usize) -> Option<String> {
    let fiber_dim = n * (n + 1) / 2 - 1;
    if degree < 5 || degree % 4 != 1 {
        Some(format!(
            "degree {degree} is not of the form 4k+1 >= 5; the form vanishes identically"
        ))
    } else if degree > fiber_dim {
        Some(format!(
            "degree {degree} exceeds the fiber dimension {fiber_dim} for N = {n}; the form vanishes identically"
        ))
    } else {
        None
    }
}
