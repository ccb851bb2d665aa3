use proptest::prelude::*;

use dieudonne::dmodule::{module_from_eo, module_from_words, DModule, WordMultiset};
use dieudonne::harness::oracles::elementary_sequences;
use dieudonne::{Field, FieldRef};

fn words() -> impl Strategy<Value = WordMultiset> {
    prop::collection::vec(("[fv]{1,6}", 1usize..3), 1..4).prop_filter_map(
        "at most 12 letters",
        |parts| {
            let m = WordMultiset::from_pairs(&parts).ok()?;
            (m.dimension() <= 12).then_some(m)
        },
    )
}

fn field(p: u64) -> FieldRef {
    Field::prime(p).unwrap()
}

fn local_local_sequence() -> impl Strategy<Value = Vec<usize>> {
    let all: Vec<Vec<usize>> = elementary_sequences(6)
        .into_iter()
        .filter(|s| s[0] == 0)
        .collect();
    prop::sample::select(all)
}

fn nilpotent(m: &dieudonne::SemilinearMap, n: usize) -> bool {
    m.pow(n.max(1) as u32).matrix.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn standard_modules_are_bt1(w in words(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let m = module_from_words(&w, &field(p));
        prop_assert!(m.verify().all_pass());
        prop_assert!(m.is_bt1());
        let fs: usize = w.iter().map(|(x, &c)| x.matches('f').count() * c).sum();
        prop_assert_eq!(m.im_f().dim(), fs);
        prop_assert_eq!(m.ker_f().dim() + m.im_f().dim(), m.n);
    }

    #[test]
    fn a_number_two_ways(w in words()) {
        let m = module_from_words(&w, &field(3));
        prop_assert_eq!(m.a_number(), w.a_number());
    }

    #[test]
    fn decomposition_parts(w in words(), p in prop::sample::select(vec![2u64, 3])) {
        let m = module_from_words(&w, &field(p));
        let d = m.decompose().unwrap();
        prop_assert_eq!(d.etale.n + d.multiplicative.n + d.local_local.n, m.n);
        prop_assert_eq!(d.etale.frobenius().rank(), d.etale.n);
        prop_assert!(nilpotent(&d.etale.verschiebung(), d.etale.n));
        prop_assert_eq!(d.multiplicative.verschiebung().rank(), d.multiplicative.n);
        prop_assert!(nilpotent(&d.multiplicative.frobenius(), d.multiplicative.n));
        prop_assert!(nilpotent(&d.local_local.frobenius(), d.local_local.n));
        prop_assert!(nilpotent(&d.local_local.verschiebung(), d.local_local.n));
        prop_assert_eq!(d.etale.n, w.mult("f"));
        prop_assert_eq!(d.multiplicative.n, w.mult("v"));
    }

    #[test]
    fn words_of_the_dual(w in words()) {
        let k = field(3);
        let m = module_from_words(&w, &k);
        let mut ll = WordMultiset::new();
        for (x, &c) in w.iter().filter(|(x, _)| x.contains('f') && x.contains('v')) {
            ll.add(x, c).unwrap();
        }
        prop_assert_eq!(m.dual().kraft_words().unwrap(), ll.dual());
    }

    #[test]
    fn self_dual_modules_have_self_dual_words(psi in local_local_sequence(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let m = module_from_eo(&psi, &field(p)).unwrap();
        prop_assert!(m.is_self_dual());
        prop_assert!(m.kraft_words().unwrap().is_self_dual());
        prop_assert_eq!(m.im_f().dim(), m.n / 2);
        prop_assert_eq!(m.ker_f().dim(), m.n / 2);
    }

    #[test]
    fn scalar_extension_keeps_types(psi in local_local_sequence(), s in 2u32..4) {
        let m: DModule = module_from_eo(&psi, &field(3)).unwrap();
        let e = m.extend_scalars(s).unwrap();
        prop_assert_eq!(e.eo_sequence().unwrap(), psi);
        prop_assert_eq!(e.kraft_words().unwrap(), m.kraft_words().unwrap());
        prop_assert_eq!(e.a_number(), m.a_number());
    }

    #[test]
    fn json_round_trip(w in words()) {
        let m = module_from_words(&w, &Field::new(3, 2).unwrap());
        prop_assert_eq!(DModule::from_json(&m.to_json()).unwrap(), m);
    }
}
