#![allow(dead_code)]

use diffcoh::diffeo::{DiffeoWord, Letter, Primitive};
use diffcoh::symspace::{HalfPlanePoint, SiegelJ, SpdPoint};
use diffcoh::torusfield::{FourierField, Rank};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> SpdPoint {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    SpdPoint::normalized(&a * a.transpose() + DMatrix::identity(n, n) * 0.5).unwrap()
}

pub fn random_sl2(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let (a, b, c) = (
        rng.gen_range(0.5..2.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    // [[a, b], [c, (1 + b c) / a]]
    DMatrix::from_row_slice(2, 2, &[a, b, c, (1.0 + b * c) / a])
}

/// Block-diagonal `SL_2` factors form symplectic matrices for `Omega = diag([[0, 1], [-1, 0]])`.
pub fn random_symplectic(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m.view_mut((2 * k, 2 * k), (2, 2))
            .copy_from(&random_sl2(rng));
    }
    m
}

pub fn random_j(rng: &mut ChaCha8Rng, n: usize) -> SiegelJ {
    SiegelJ::standard(n)
        .conjugate(&random_symplectic(rng, n))
        .unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng) -> HalfPlanePoint {
    HalfPlanePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..3.0)).unwrap()
}

pub fn random_int_sl2(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let gens = [
        vec![vec![1, 1], vec![0, 1]],
        vec![vec![1, 0], vec![1, 1]],
        vec![vec![0, -1], vec![1, 0]],
    ];
    let mut m = vec![vec![1i64, 0], vec![0, 1]];
    for _ in 0..rng.gen_range(1..4) {
        let g = &gens[rng.gen_range(0..3)];
        m = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| (0..2).map(|k| m[i][k] * g[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    m
}

/// A function of `x_axis` alone with modes up to `band`.
pub fn profile(rng: &mut ChaCha8Rng, dim: usize, axis: usize, band: i64, amp: f64) -> FourierField {
    let mut f = FourierField::zeros(dim, Rank::Scalar, band as usize);
    for k in 1..=band {
        let mut kv = vec![0; dim];
        kv[axis] = k;
        f = f
            .add(&FourierField::mode(
                dim,
                &kv,
                rng.gen_range(-amp..amp),
                rng.gen_range(-amp..amp),
            ))
            .unwrap();
    }
    f
}

pub fn shear(rng: &mut ChaCha8Rng, amp: f64) -> Primitive {
    let axis = rng.gen_range(0..2);
    Primitive::shear(axis, profile(rng, 2, 1 - axis, 1, amp)).unwrap()
}

pub fn random_letter(rng: &mut ChaCha8Rng) -> Letter {
    let p = match rng.gen_range(0..3) {
        0 => shear(rng, 0.1),
        1 => Primitive::linear(random_int_sl2(rng)).unwrap(),
        _ => Primitive::translation(vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .unwrap(),
    };
    let l = Letter::new(p);
    if rng.gen_bool(0.5) {
        l.inv()
    } else {
        l
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> DiffeoWord {
    let len = rng.gen_range(1..=max_len);
    DiffeoWord::new(2, (0..len).map(|_| random_letter(rng)).collect()).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
