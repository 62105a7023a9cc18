mod common;

use common::*;
use diffcoh::diffeo::{BaseJ, DiffeoWord, Primitive};
use diffcoh::groupcoc::{cocycle_defect, delta2, Resolution};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

fn word(r: &mut rand_chacha::ChaCha8Rng) -> DiffeoWord {
    if r.gen_bool(0.5) {
        DiffeoWord::single(Primitive::linear(random_int_sl2(r)).unwrap())
    } else {
        DiffeoWord::single(shear(r, 0.15))
    }
}

fn linear(r: &mut rand_chacha::ChaCha8Rng) -> DiffeoWord {
    DiffeoWord::single(Primitive::linear(random_int_sl2(r)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn area_cocycle_is_bounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (f, g) = (word(&mut r), word(&mut r));
        let rep = delta2(&f, &g, &BaseJ::Standard(1), Resolution::new(8, 16).unwrap()).unwrap();
        prop_assert!(rep.value.abs() <= PI + rep.error_estimate);
    }

    #[test]
    fn identity_arguments_give_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = word(&mut r);
        let id = DiffeoWord::identity(2);
        let res = Resolution::new(4, 8).unwrap();
        prop_assert_eq!(delta2(&f, &id, &BaseJ::Standard(1), res).unwrap().value, 0.0);
        prop_assert_eq!(delta2(&id, &f, &BaseJ::Standard(1), res).unwrap().value, 0.0);
    }

    #[test]
    fn constant_structure_defect_vanishes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (linear(&mut r), linear(&mut r), linear(&mut r));
        let j0 = BaseJ::Constant(random_j(&mut r, 1));
        let d = cocycle_defect(&a, &b, &c, &j0, Resolution::new(4, 8).unwrap()).unwrap();
        prop_assert!(d.defect.abs() < 1e-10, "{:?}", d);
    }
}
