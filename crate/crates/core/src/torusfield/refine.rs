use serde::Serialize;

use crate::error::Result;

/// A value computed at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    /// Value at the finer resolution.
    pub value: f64,
    /// `|value(2s) - value(s)|`.
    pub error_estimate: f64,
    pub coarse_value: f64,
}

pub fn refine_estimate(coarse: f64, fine: f64) -> Estimate {
    Estimate {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        coarse_value: coarse,
    }
}

/// Runs `compute` at grid side `side` and `2 side`.
pub fn refine<F>(side: usize, mut compute: F) -> Result<Estimate>
where
    F: FnMut(usize) -> Result<f64>,
{
    let coarse = compute(side)?;
    let fine = compute(2 * side)?;
    Ok(refine_estimate(coarse, fine))
}
