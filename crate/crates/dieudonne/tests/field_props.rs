use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dieudonne::{Field, FieldRef, Matrix, SemilinearMap};

const FIELDS: [(u64, u32); 7] = [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 2)];

fn field(i: usize) -> FieldRef {
    let (p, r) = FIELDS[i % FIELDS.len()];
    Field::new(p, r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in 0..FIELDS.len(), seed in any::<u64>()) {
        let k = field(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (k.random(&mut rng), k.random(&mut rng), k.random(&mut rng));
        prop_assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
        prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism(i in 0..FIELDS.len(), seed in any::<u64>(), e in -3i64..4) {
        let k = field(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (k.random(&mut rng), k.random(&mut rng));
        prop_assert_eq!(k.frob(k.mul(a, b), e), k.mul(k.frob(a, e), k.frob(b, e)));
        prop_assert_eq!(k.frob(k.add(a, b), e), k.add(k.frob(a, e), k.frob(b, e)));
        prop_assert_eq!(k.frob(k.frob(a, e), -e), a);
        prop_assert_eq!(k.frob(a, k.degree() as i64), a);
    }

    #[test]
    fn semilinear_rank_nullity(i in 0..FIELDS.len(), seed in any::<u64>(), n in 1usize..6, plus in any::<bool>()) {
        let k = field(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::random(&k, n, n, &mut rng);
        // make low rank likely
        if n > 1 {
            let r = m.row(0).to_vec();
            for (j, &x) in r.iter().enumerate() {
                m.set(n - 1, j, x);
            }
        }
        let f = SemilinearMap::new(m, if plus { 1 } else { -1 });
        prop_assert_eq!(f.kernel().dim() + f.rank(), n);
        prop_assert_eq!(f.image().dim(), f.rank());
    }

    #[test]
    fn stable_image_and_kernel(i in 0..FIELDS.len(), seed in any::<u64>(), n in 1usize..6) {
        let k = field(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::random(&k, n, n, &mut rng);
        // a nilpotent corner so both parts are usually nonzero
        for j in 0..n {
            m.set(0, j, 0);
        }
        let f = SemilinearMap::new(m, 1);
        let (im, ker) = f.stable_image_kernel().unwrap();
        prop_assert_eq!(im.dim() + ker.dim(), n);
        prop_assert_eq!(f.image_of(&im), im.clone());
        for v in ker.basis() {
            let mut w = v.clone();
            for _ in 0..n {
                w = f.apply(&w);
            }
            prop_assert!(w.iter().all(|&x| x == 0));
        }
        prop_assert!(im.intersect(&ker).is_zero());
    }
}
