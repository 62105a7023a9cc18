use rayon::prelude::*;
use serde::Serialize;

use crate::diffeo::Isotopy;
use crate::error::{Error, Result};
use crate::numerics::pairwise_mean;

/// Largest accepted displacement of one time step of the tracked path.
const MAX_STEP_DISPLACEMENT: f64 = 0.25;
const MAX_TIME_STEPS: usize = 1 << 14;
const MAX_GRID_POINTS: usize = 1 << 20;

/// A class in `H_1(T^N, R)` in the standard basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomologyVector {
    pub components: Vec<f64>,
}

impl HomologyVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|v| !v.is_finite()) {
            return Err(Error::numeric("homology vector has non-finite entries"));
        }
        Ok(HomologyVector { components })
    }

    /// `<c, z>` for an integer class `z` in `H^1(T^N, Z)`.
    pub fn pair(&self, z: &[i64]) -> Result<f64> {
        if z.len() != self.components.len() {
            return Err(Error::domain(
                "covector length differs from torus dimension",
            ));
        }
        Ok(self
            .components
            .iter()
            .zip(z)
            .map(|(c, k)| c * *k as f64)
            .sum())
    }

    pub fn add(&self, other: &HomologyVector) -> Result<HomologyVector> {
        if other.components.len() != self.components.len() {
            return Err(Error::domain("homology vectors of different tori"));
        }
        HomologyVector::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

fn grid_points(dim: usize, side: usize) -> Result<Vec<Vec<f64>>> {
    let total = side
        .checked_pow(dim as u32)
        .filter(|&t| t <= MAX_GRID_POINTS && side > 0);
    let total = total.ok_or_else(|| Error::domain(format!("grid {side}^{dim} is too large")))?;
    Ok((0..total)
        .map(|mut p| {
            (0..dim)
                .map(|_| {
                    let i = p % side;
                    p /= side;
                    i as f64 / side as f64
                })
                .collect()
        })
        .collect())
}

/// Default grid side: `2^(16 / N)` points per axis, at least 8.
pub fn default_cycle_side(dim: usize) -> usize {
    (1usize << (16 / dim.max(1))).max(8)
}

fn check_path(iso: &Isotopy) -> Result<()> {
    if !iso.is_continuous() {
        return Err(Error::domain(
            "isotopy has no continuous lift: it contains a non-identity linear letter",
        ));
    }
    Ok(())
}

/// `int_M (g~(x) - x) d nu` on a grid with `side` points per axis, `g~` the
/// canonical lift carried letter by letter along the isotopy.
pub fn asymptotic_cycle_at(iso: &Isotopy, side: usize) -> Result<HomologyVector> {
    check_path(iso)?;
    let w = iso.word();
    let n = w.dim();
    let disp: Vec<Vec<f64>> = grid_points(n, side)?
        .par_iter()
        .map(|x| w.apply_lift(x).iter().zip(x).map(|(y, x)| y - x).collect())
        .collect();
    let comps = (0..n)
        .map(|k| pairwise_mean(&disp.iter().map(|d| d[k]).collect::<Vec<_>>()))
        .collect();
    HomologyVector::new(comps)
}

pub fn asymptotic_cycle(iso: &Isotopy) -> Result<HomologyVector> {
    asymptotic_cycle_at(iso, default_cycle_side(iso.word().dim()))
}

fn wrap(v: f64) -> f64 {
    v - v.round()
}

/// Continuous real lift of `t -> z . g_t(x) mod 1` from `t = 0` to 1,
/// obtained by unwrapping the circle values over `steps` time steps.
fn tracked_lift(iso: &Isotopy, z: &[i64], points: &[Vec<f64>], steps: usize) -> Result<Vec<f64>> {
    let f = |y: &[f64]| -> f64 {
        y.iter()
            .zip(z)
            .map(|(a, b)| a * *b as f64)
            .sum::<f64>()
            .rem_euclid(1.0)
    };
    let mut lift: Vec<f64> = points.iter().map(|x| f(x)).collect();
    let mut last = lift.clone();
    for s in 1..=steps {
        let w = iso.at(s as f64 / steps as f64)?;
        let now: Vec<f64> = points.par_iter().map(|x| f(&w.apply(x))).collect();
        for ((l, prev), cur) in lift.iter_mut().zip(last.iter_mut()).zip(&now) {
            let jump = wrap(cur - *prev);
            if jump.abs() > MAX_STEP_DISPLACEMENT {
                return Err(Error::numeric("time step too coarse"));
            }
            *l += jump;
            *prev = *cur;
        }
    }
    Ok(lift)
}

/// `int_M F d nu` where `F: M -> R` lifts `f o g - f` for `f(x) = z . x mod 1`,
/// the lift selected by following `g_t` in time with every step moving `f`
/// by less than `1/4`.
pub fn schwartzman_pairing_at(iso: &Isotopy, z: &[i64], side: usize) -> Result<f64> {
    check_path(iso)?;
    let n = iso.word().dim();
    if z.len() != n {
        return Err(Error::domain(
            "covector length differs from torus dimension",
        ));
    }
    if z.iter().all(|&k| k == 0) {
        return Ok(0.0);
    }
    let points = grid_points(n, side)?;
    let mut steps = 8;
    loop {
        match tracked_lift(iso, z, &points, steps) {
            Ok(lift) => {
                let base: Vec<f64> = points
                    .iter()
                    .map(|x| x.iter().zip(z).map(|(a, b)| a * *b as f64).sum())
                    .collect();
                let f_values: Vec<f64> = base.iter().map(|b| b.rem_euclid(1.0)).collect();
                let diff: Vec<f64> = lift.iter().zip(&f_values).map(|(l, f)| l - f).collect();
                return Ok(pairwise_mean(&diff));
            }
            Err(Error::Numeric(_)) if steps < MAX_TIME_STEPS => steps *= 2,
            Err(Error::Numeric(_)) => {
                return Err(Error::numeric(
                    "discontinuous lift: per-step displacement stays above 1/4",
                ));
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn schwartzman_pairing(iso: &Isotopy, z: &[i64]) -> Result<f64> {
    schwartzman_pairing_at(iso, z, default_cycle_side(iso.word().dim()))
}
