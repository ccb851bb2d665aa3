use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dieudonne::admissible::{admissible_report, words_are_p2_shaped, AdmissibleCoords};
use dieudonne::gring::RMatrix;
use dieudonne::{Field, Matrix};

const DOMAINS: [(u64, u32, usize); 6] = [
    (3, 1, 1),
    (3, 2, 1),
    (3, 1, 2),
    (3, 2, 2),
    (5, 1, 1),
    (5, 1, 2),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn built_modules_are_admissible(i in 0..DOMAINS.len(), seed in any::<u64>()) {
        let (p, r, h) = DOMAINS[i];
        let k = Field::new(p, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = AdmissibleCoords::random_superspecial(&k, h, &mut rng).unwrap();
        let m = c.build().unwrap();
        prop_assert_eq!(m.n, 2 * h * p as usize);
        let rep = admissible_report(&m, h).unwrap();
        prop_assert!(rep.all(), "{:?}", rep);
        let a = c.a_from_d();
        prop_assert_eq!(a, m.a_number());
        if a < p as usize {
            prop_assert_eq!(a % 2, 0);
        }
        prop_assert!(c.leading_parity_holds());
    }

    #[test]
    fn general_b_keeps_the_invariants(i in 0..DOMAINS.len(), seed in any::<u64>()) {
        let (p, r, h) = DOMAINS[i];
        let k = Field::new(p, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = AdmissibleCoords::random_superspecial(&k, h, &mut rng).unwrap();
        let u = RMatrix::random_invertible(&k, h, &mut rng);
        let t = c.twisted(&u).unwrap();
        let (m, n) = (c.build().unwrap(), t.build().unwrap());
        prop_assert!(admissible_report(&n, h).unwrap().all());
        prop_assert_eq!(m.eo_sequence().unwrap(), n.eo_sequence().unwrap());
        prop_assert_eq!(m.kraft_words().unwrap(), n.kraft_words().unwrap());
        prop_assert_eq!(c.a_from_d(), t.a_from_d());
    }

    #[test]
    fn characteristic_two_shapes(r in 1u32..3, h in 1usize..3, seed in any::<u64>()) {
        let k = Field::new(2, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut d1 = Matrix::zeros(&k, h, h);
        for a in 0..h {
            for b in a..h {
                let x = k.random(&mut rng);
                d1.set(a, b, x);
                d1.set(b, a, x);
            }
        }
        let d = RMatrix::from_expansion(&k, &[Matrix::zeros(&k, h, h), d1]);
        let m = AdmissibleCoords::superspecial(d).unwrap().build().unwrap();
        let eo = m.eo_sequence().unwrap();
        prop_assert!(eo[..h].iter().all(|&x| x == 0));
        prop_assert!(words_are_p2_shaped(&m.kraft_words().unwrap()));
        prop_assert!(admissible_report(&m, h).unwrap().all());
    }
}
