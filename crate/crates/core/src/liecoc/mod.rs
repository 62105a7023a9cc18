//! Lie-algebra cocycles on divergence-free and symplectic vector fields of
//! tori, and the curvature identity for conformal surfaces.
//!
//! * [`psi_odd`]: `(1/d!) int Alt Tr prod (nabla X_j + (nabla X_j)^*)` for a
//!   reference metric, an odd cocycle on divergence-free fields.
//! * [`phi_even`]: `(1/d!) int Alt Tr J prod L_{X_j} J w^n` for a field of
//!   compatible structures, an even cocycle on symplectic fields.
//! * [`ce_defect`]: the Chevalley-Eilenberg differential of either, which
//!   vanishes for a cocycle.
//! * [`identity54_check`]: both sides of
//!   `int Tr J [H_f, J] [H_h, J] d area = -int K {f, h} d area`.
//!
//! `L_X J` is the Lie derivative of the `(1,1)` tensor `J`; with a constant
//! `J` it equals `-[DX, J]`.

mod cocycles;
mod fields;
mod identity;

pub use cocycles::{
    ce_defect, lie_derivative_j, phi_even, phi_even_at, phi_grid_side, psi_grid_side, psi_odd,
    psi_odd_at, CeDefect, LieCocycle, LieMetric,
};
pub use fields::{DivFreeField, DIV_FREE_TOL};
pub use identity::{identity54_check, Identity54};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::signed_permutations;
    use crate::torusfield::{
        product, random_div_free, random_hamiltonian, ConformalMetric, FourierField, GridField,
        Rank,
    };
    use nalgebra::DMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn div_free(rng: &mut ChaCha8Rng, n: usize) -> Vec<DivFreeField> {
        (0..n)
            .map(|_| DivFreeField::new(random_div_free(rng, 1, 0.3)).unwrap())
            .collect()
    }

    fn hamiltonians(rng: &mut ChaCha8Rng, n: usize) -> Vec<DivFreeField> {
        (0..n)
            .map(|_| DivFreeField::hamiltonian(random_hamiltonian(rng, 1, 0.3).0).unwrap())
            .collect()
    }

    fn standard_j() -> FourierField {
        FourierField::stack(
            &[
                FourierField::constant(2, 0.0),
                FourierField::constant(2, 1.0),
                FourierField::constant(2, -1.0),
                FourierField::constant(2, 0.0),
            ],
            Rank::Matrix(2, 2),
        )
        .unwrap()
    }

    /// `A Omega A^-1` for `A = [[1, u], [0, 1]]`: `[[-u, 1 + u^2], [-1, u]]`.
    fn sheared_j(u: &FourierField) -> FourierField {
        let u2 = product(u, u).unwrap();
        let one = FourierField::constant(2, 1.0);
        FourierField::stack(
            &[
                u.scale(-1.0),
                one.add(&u2).unwrap(),
                one.scale(-1.0),
                u.clone(),
            ],
            Rank::Matrix(2, 2),
        )
        .unwrap()
    }

    /// Rough size of `prod |nabla X_j|`, used for relative tolerances.
    fn size(xs: &[DivFreeField]) -> f64 {
        xs.iter()
            .map(|x| {
                2.0 * std::f64::consts::PI * (1 + x.bandlimit()) as f64 * x.field().max_coeff()
            })
            .product()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn psi_is_alternating_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let xs = div_free(&mut rng, 5);
        let base = psi_odd(&LieMetric::Flat, &xs).unwrap();
        assert!(base.abs() > 1e-6, "{base}");
        let mut swapped = xs.clone();
        swapped.swap(0, 3);
        assert!(rel(psi_odd(&LieMetric::Flat, &swapped).unwrap(), -base) < 1e-12);
        let mut repeated = xs.clone();
        repeated[2] = repeated[4].clone();
        assert!(psi_odd(&LieMetric::Flat, &repeated).unwrap().abs() < 1e-14 * base.abs());
        let mut scaled = xs.clone();
        scaled[1] = scaled[1].scale(2.5);
        assert!(rel(psi_odd(&LieMetric::Flat, &scaled).unwrap(), 2.5 * base) < 1e-12);
        assert!(psi_odd(&LieMetric::Flat, &xs[..4]).is_err());
    }

    #[test]
    fn psi_matches_permutation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let xs = div_free(&mut rng, 5);
        let value = psi_odd(&LieMetric::Flat, &xs).unwrap();
        // direct pointwise evaluation of every derivative and all 120 permutations
        let derivs: Vec<Vec<FourierField>> = xs
            .iter()
            .map(|x| {
                (0..9)
                    .map(|e| x.field().component(e / 3).derivative(e % 3))
                    .collect()
            })
            .collect();
        let perms = signed_permutations(5);
        let side = 16;
        let grid = GridField::from_fn(3, &[side; 3], Rank::Scalar, |_, p| {
            let s: Vec<DMatrix<f64>> = derivs
                .iter()
                .map(|d| {
                    let m = DMatrix::from_fn(3, 3, |a, b| d[a * 3 + b].evaluate_scalar(p));
                    &m + m.transpose()
                })
                .collect();
            let total: f64 = perms
                .iter()
                .map(|(perm, sign)| {
                    sign * perm
                        .iter()
                        .fold(DMatrix::identity(3, 3), |acc, &i| acc * &s[i])
                        .trace()
                })
                .sum();
            vec![total / 120.0]
        })
        .unwrap();
        let oracle = grid.integrate().unwrap();
        assert!(
            (value - oracle).abs() < 1e-10 * (1.0 + oracle.abs()),
            "{value} vs {oracle}"
        );
    }

    #[test]
    fn psi_vanishes_on_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let xs = hamiltonians(&mut rng, 5);
        let m = ConformalMetric::new(FourierField::mode(2, &[1, 0], 0.2, 0.0)).unwrap();
        let tol = 1e-12 * size(&xs);
        assert!(psi_odd(&LieMetric::Conformal(m), &xs).unwrap().abs() < tol);
        assert!(psi_odd(&LieMetric::Flat, &xs).unwrap().abs() < tol);
    }

    #[test]
    fn lie_derivative_of_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let j0 = standard_j();
        let c = DivFreeField::constant(&[0.3, -0.7]);
        assert_eq!(lie_derivative_j(&c, &j0).unwrap().max_coeff(), 0.0);

        // X = J0 grad f has DX = J0 H_f and L_X J0 = -[J0 H_f, J0]
        let (f, _) = random_hamiltonian(&mut rng, 2, 0.4);
        let x = DivFreeField::hamiltonian(f.clone()).unwrap();
        let l = lie_derivative_j(&x, &j0).unwrap().sample(16).unwrap();
        let hess: Vec<FourierField> = (0..4)
            .map(|e| f.derivative(e / 2).derivative(e % 2))
            .collect();
        let jm = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        for p in [0, 37, 101, 255] {
            let pt = l.point(p);
            let h = DMatrix::from_fn(2, 2, |a, b| hess[a * 2 + b].evaluate_scalar(&pt));
            let jh = &jm * h;
            let expected = -(&jh * &jm - &jm * &jh);
            assert!((l.matrix_at(p) - expected).norm() < 1e-10);
        }

        let j = sheared_j(&FourierField::mode(2, &[1, 1], 0.3, 0.1));
        let lj = lie_derivative_j(&x, &j).unwrap().sample(16).unwrap();
        let js = j.sample(16).unwrap();
        for p in 0..lj.npoints() {
            let (a, b) = (lj.matrix_at(p), js.matrix_at(p));
            assert!((&a * &b + &b * &a).norm() < 1e-10);
        }
    }

    #[test]
    fn phi_vanishing_on_the_flat_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let j0 = standard_j();
        for _ in 0..5 {
            let xs = hamiltonians(&mut rng, 2);
            assert!(phi_even(&j0, &xs).unwrap().abs() < 1e-10);
        }
        let consts = [
            DivFreeField::constant(&[1.0, 0.5]),
            DivFreeField::constant(&[-0.2, 0.3]),
        ];
        assert!(phi_even(&j0, &consts).unwrap().abs() < 1e-12);
        let xs = hamiltonians(&mut rng, 1);
        let mixed = [xs[0].clone(), consts[0].clone()];
        assert!(phi_even(&j0, &mixed).unwrap().abs() < 1e-12);
    }

    #[test]
    fn phi_is_alternating() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let j = sheared_j(&FourierField::mode(2, &[1, 1], 0.4, 0.2));
        let xs = hamiltonians(&mut rng, 2);
        let v = phi_even(&j, &xs).unwrap();
        assert!(v.abs() > 1e-6, "{v}");
        let swapped = [xs[1].clone(), xs[0].clone()];
        assert!(rel(phi_even(&j, &swapped).unwrap(), -v) < 1e-12);
        assert!(phi_even(&j, &[xs[0].clone(), xs[0].clone()]).unwrap().abs() < 1e-14 * v.abs());
        assert!(
            rel(
                phi_even(&j, &[xs[0].scale(3.0), xs[1].clone()]).unwrap(),
                3.0 * v
            ) < 1e-12
        );
        assert!(phi_even(&j, &xs[..1]).is_err());
    }

    #[test]
    fn phi_rejects_non_symplectic_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        // divergence-free but not symplectic on T^4
        let mut x = FourierField::zeros(4, Rank::Vector(4), 1);
        let s = FourierField::mode(4, &[0, 0, 1, 0], 0.3, 0.0);
        x = x
            .add(
                &FourierField::stack(
                    &[
                        s,
                        FourierField::zeros(4, Rank::Scalar, 1),
                        FourierField::zeros(4, Rank::Scalar, 1),
                        FourierField::zeros(4, Rank::Scalar, 1),
                    ],
                    Rank::Vector(4),
                )
                .unwrap(),
            )
            .unwrap();
        let x = DivFreeField::new(x).unwrap();
        assert!(!x.is_symplectic().unwrap());
        let mut j4 = FourierField::zeros(4, Rank::Matrix(4, 4), 0);
        for (i, jx, v) in [(0, 1, 1.0), (1, 0, -1.0), (2, 3, 1.0), (3, 2, -1.0)] {
            j4.set_coeff(i * 4 + jx, &[0, 0, 0, 0], v.into()).unwrap();
        }
        assert!(phi_even(&j4, &[x.clone(), x]).is_err());
        assert!(hamiltonians(&mut rng, 1)[0].is_symplectic().unwrap());
    }

    #[test]
    fn chevalley_eilenberg_defects() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let consts: Vec<DivFreeField> = [[1.0, 0.0], [0.2, 0.5], [-0.3, 0.1]]
            .iter()
            .map(|c| DivFreeField::constant(c))
            .collect();
        let phi = LieCocycle::Phi(standard_j());
        assert_eq!(ce_defect(&phi, &consts).unwrap().value, 0.0);
        let xs = hamiltonians(&mut rng, 3);
        let d = ce_defect(&phi, &xs).unwrap();
        assert!(
            d.value.abs() < 1e-8 && d.value.abs() <= 10.0 * d.error_estimate,
            "{d:?}"
        );
        let sheared = LieCocycle::Phi(sheared_j(&FourierField::mode(2, &[1, 0], 0.3, 0.0)));
        let d = ce_defect(&sheared, &xs).unwrap();
        assert!(d.value.abs() <= 10.0 * d.error_estimate, "{d:?}");
        assert!(d.scale > 1e-6);
    }

    #[test]
    fn psi_cocycle_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let xs = div_free(&mut rng, 6);
        let d = ce_defect(&LieCocycle::Psi(LieMetric::Flat), &xs).unwrap();
        assert!(d.value.abs() <= 10.0 * d.error_estimate, "{d:?}");
        assert!(d.scale > 1e-8, "{d:?}");
    }

    fn band2(rng: &mut ChaCha8Rng, amp: f64) -> FourierField {
        FourierField::random(rng, 2, Rank::Scalar, 2, amp)
    }

    #[test]
    fn curvature_identity_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let (f, h) = (band2(&mut rng, 0.5), band2(&mut rng, 0.5));
        let flat = identity54_check(&ConformalMetric::flat(), &f, &h, 32).unwrap();
        assert!(flat.lhs.abs() < 1e-9 && flat.rhs.abs() < 1e-9, "{flat:?}");
        let m = ConformalMetric::new(band2(&mut rng, 0.15)).unwrap();
        let same = identity54_check(&m, &f, &f, 128).unwrap();
        assert!(same.lhs.abs() < 1e-9 && same.rhs.abs() < 1e-9, "{same:?}");
    }

    /// Both sides are computed independently; the measured relation between
    /// them is `lhs = 4 rhs` for the +90 degree rotation.
    #[test]
    fn curvature_identity_measured_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..3 {
            let m = ConformalMetric::new(band2(&mut rng, 0.15)).unwrap();
            let (f, h) = (band2(&mut rng, 0.5), band2(&mut rng, 0.5));
            let r = identity54_check(&m, &f, &h, 128).unwrap();
            assert!(r.rhs.abs() > 1e-3, "{r:?}");
            assert!(
                (r.lhs - 4.0 * r.rhs).abs() < 1e-8 * (1.0 + r.lhs.abs()),
                "{r:?}"
            );
        }
    }
}
