use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dieudonne::admissible::AdmissibleCoords;
use dieudonne::gring::{random_one_unit, regular_matrix, RElement, RStructure};
use dieudonne::{Field, FieldRef, Matrix};

const DOMAINS: [(u64, u32, usize); 5] = [(3, 1, 1), (3, 2, 1), (3, 1, 2), (5, 1, 1), (5, 1, 2)];

fn built(i: usize, seed: u64) -> (FieldRef, RStructure) {
    let (p, r, h) = DOMAINS[i % DOMAINS.len()];
    let k = Field::new(p, r).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = AdmissibleCoords::random_superspecial(&k, h, &mut rng).unwrap();
    let rs = RStructure::new(c.build().unwrap()).unwrap();
    (k, rs)
}

#[test]
fn hundred_modules_at_p3_h2() {
    let k = Field::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let c = AdmissibleCoords::random_superspecial(&k, 2, &mut rng).unwrap();
        let rs = RStructure::new(c.build().unwrap()).unwrap();
        assert!(rs.host.is_bt1());
        let rep = rs.freeness_tests();
        assert!(rep.consistent() && rep.free, "{rep:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn one_units_have_exponent_p(p in prop::sample::select(vec![2u64, 3, 5]), r in 1u32..3, size in 1usize..4, seed in any::<u64>()) {
        let k = Field::new(p, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = regular_matrix(&k, &random_one_unit(&k, size, &mut rng));
        prop_assert_eq!(u.pow(p), Matrix::identity(&k, u.rows));
    }

    #[test]
    fn delta_adjoint_is_tilde(i in 0..DOMAINS.len(), seed in any::<u64>()) {
        let (_, rs) = built(i, seed);
        prop_assert_eq!(rs.tilde_adjoint_holds(), Some(true));
    }

    #[test]
    fn freeness_tests_agree(i in 0..DOMAINS.len(), seed in any::<u64>()) {
        let (_, rs) = built(i, seed);
        let rep = rs.freeness_tests();
        prop_assert!(rep.consistent(), "{:?}", rep);
        prop_assert!(rep.free);
    }

    #[test]
    fn orthogonal_of_delta_powers(i in 0..DOMAINS.len(), seed in any::<u64>()) {
        let (_, rs) = built(i, seed);
        let p = rs.p();
        for j in 0..=p {
            prop_assert_eq!(rs.orthogonal(&rs.image(j)).unwrap(), rs.image(p - j));
        }
    }

    #[test]
    fn tilde_is_an_involution(p in prop::sample::select(vec![2u64, 3, 5, 7]), seed in any::<u64>()) {
        let k = Field::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (RElement::random(&k, &mut rng), RElement::random(&k, &mut rng));
        prop_assert_eq!(a.tilde().tilde(), a.clone());
        prop_assert_eq!(a.mul(&b).tilde(), a.tilde().mul(&b.tilde()));
        prop_assert_eq!(RElement::gamma(&k).pow(p), RElement::one(&k));
    }
}
