mod common;

use common::*;
use diffcoh::liecoc::{identity54_check, phi_even, psi_odd, DivFreeField, LieMetric};
use diffcoh::torusfield::{
    random_div_free, random_hamiltonian, ConformalMetric, FourierField, Rank,
};
use proptest::prelude::*;
use rand::Rng;

fn standard_j() -> FourierField {
    let parts: Vec<FourierField> = [0.0, 1.0, -1.0, 0.0]
        .iter()
        .map(|&v| FourierField::constant(2, v))
        .collect();
    FourierField::stack(&parts, Rank::Matrix(2, 2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn psi_is_alternating_multilinear(seed in any::<u64>(), i in 0usize..5, k in 0usize..5, s in -3.0f64..3.0) {
        prop_assume!(i != k);
        let mut r = rng(seed);
        let xs: Vec<DivFreeField> = (0..5).map(|_| DivFreeField::new(random_div_free(&mut r, 1, 0.3)).unwrap()).collect();
        let v = psi_odd(&LieMetric::Flat, &xs).unwrap();
        let mut swapped = xs.clone();
        swapped.swap(i, k);
        prop_assert!(close(psi_odd(&LieMetric::Flat, &swapped).unwrap(), -v, 1e-10));
        let mut scaled = xs.clone();
        scaled[i] = scaled[i].scale(s);
        prop_assert!(close(psi_odd(&LieMetric::Flat, &scaled).unwrap(), s * v, 1e-10));
    }

    #[test]
    fn phi_is_alternating_bilinear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let u = FourierField::random(&mut r, 2, Rank::Scalar, 1, 0.3);
        let u2 = diffcoh::torusfield::product(&u, &u).unwrap();
        let one = FourierField::constant(2, 1.0);
        let j = FourierField::stack(
            &[u.scale(-1.0), one.add(&u2).unwrap(), one.scale(-1.0), u.clone()],
            Rank::Matrix(2, 2),
        )
        .unwrap();
        let x = DivFreeField::hamiltonian(random_hamiltonian(&mut r, 1, 0.3).0).unwrap();
        let y = DivFreeField::hamiltonian(random_hamiltonian(&mut r, 1, 0.3).0).unwrap();
        let v = phi_even(&j, &[x.clone(), y.clone()]).unwrap();
        prop_assert!(close(phi_even(&j, &[y.clone(), x.clone()]).unwrap(), -v, 1e-10));
        prop_assert!(close(phi_even(&j, &[x.scale(s), y]).unwrap(), s * v, 1e-10));
    }

    #[test]
    fn phi_vanishes_on_hamiltonian_and_constant_fields(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pick = |r: &mut rand_chacha::ChaCha8Rng| {
            if r.gen_bool(0.5) {
                DivFreeField::hamiltonian(random_hamiltonian(r, 2, 0.3).0).unwrap()
            } else {
                DivFreeField::constant(&[r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)])
            }
        };
        let (x, y) = (pick(&mut r), pick(&mut r));
        prop_assert!(phi_even(&standard_j(), &[x, y]).unwrap().abs() < 1e-10);
    }

    #[test]
    fn curvature_identity_sides_converge(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = ConformalMetric::new(FourierField::random(&mut r, 2, Rank::Scalar, 2, 0.15)).unwrap();
        let f = FourierField::random(&mut r, 2, Rank::Scalar, 2, 0.5);
        let h = FourierField::random(&mut r, 2, Rank::Scalar, 2, 0.5);
        let a = identity54_check(&m, &f, &h, 128).unwrap();
        let b = identity54_check(&m, &f, &h, 256).unwrap();
        prop_assert!(close(a.lhs, b.lhs, 1e-9) && close(a.rhs, b.rhs, 1e-9));
        prop_assert!(close(a.residual, b.residual, 1e-9));
    }
}
