use proptest::prelude::*;

use dieudonne::curve::{de_rham_base, parse_poly, ASCover, HyperellipticCurve};
use dieudonne::poly::Poly;
use dieudonne::Field;

fn curve() -> impl Strategy<Value = HyperellipticCurve> {
    (
        prop::sample::select(vec![3u64, 5]),
        3usize..8,
        prop::collection::vec(0u64..5, 8),
    )
        .prop_filter_map("squarefree", |(p, d, mut c)| {
            let k = Field::prime(p).unwrap();
            c.truncate(d + 1);
            for x in c.iter_mut() {
                *x %= p;
            }
            c[d] = 1;
            HyperellipticCurve::new(&k, Poly::new(c)).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn de_rham_of_random_curves(x in curve()) {
        let pkg = de_rham_base(&x).unwrap();
        let m = &pkg.module;
        prop_assert_eq!(m.n, 2 * x.genus);
        prop_assert_eq!((pkg.h0, pkg.h1), (x.genus, x.genus));
        prop_assert!(m.verify().all_pass(), "{:?}", m.verify());
        prop_assert!(m.is_bt1());
        prop_assert_eq!(m.a_number(), x.a_number());
        prop_assert_eq!(m.p_rank(), x.p_rank());
        prop_assert_eq!(pkg.cartier(), x.cartier_manin().matrix);
    }

    #[test]
    fn polynomial_display_parses_back(x in curve()) {
        let s = x.f.to_string_in(&x.k, "x");
        prop_assert_eq!(parse_poly(&s, &x.k).unwrap(), x.f.clone());
    }

    #[test]
    fn twists_keep_the_structural_identities(a in 0i64..3) {
        let x = HyperellipticCurve::parse(3, "x^7 + x^6 + x^4 + x").unwrap();
        let c = ASCover::parse(&x, "(x + 1)y").unwrap().twisted(a);
        let inv = c.invariants().unwrap();
        prop_assert!(inv.all_hold(), "{:?}", inv.violations());
        prop_assert_eq!(inv.g_y, 7);
    }
}
