//! Search for compatible alternating pairings.

use super::DModule;
use crate::field::Elem;
use crate::linalg::Matrix;
use crate::semilinear::{search_span, solve_fp_linear};

fn alternating_from(m: &DModule, x: &[Elem]) -> Matrix {
    let k = &m.field;
    let mut p = Matrix::zeros(k, m.n, m.n);
    let mut idx = 0;
    for i in 0..m.n {
        for j in i + 1..m.n {
            p.set(i, j, x[idx]);
            p.set(j, i, k.neg(x[idx]));
            idx += 1;
        }
    }
    p
}

/// A nondegenerate alternating `P` with `A^t P = P^(p) W^(p)`, if one exists.
///
/// The condition is F_p-linear in `P`; see [`search_span`] for the scan.
pub fn find_pairing(m: &DModule) -> Option<Matrix> {
    let n = m.n;
    if n % 2 == 1 {
        return None;
    }
    if n == 0 {
        return Some(Matrix::zeros(&m.field, 0, 0));
    }
    let k = m.field.clone();
    let unknowns = n * (n - 1) / 2;
    let at = m.f.transpose();
    let wp = m.v.frob(1);
    let sols = solve_fp_linear(&k, unknowns, n * n, |x| {
        let p = alternating_from(m, x);
        at.mul(&p).sub(&p.frob(1).mul(&wp)).data
    });
    search_span(&k, &sols, |x| alternating_from(m, x).rank() == n).map(|x| alternating_from(m, &x))
}

#[cfg(test)]
mod tests {
    use super::super::{module_from_words, WordMultiset};
    use super::*;
    use crate::field::Field;

    #[test]
    fn fv_is_self_dual() {
        let k = Field::prime(3).unwrap();
        let m = module_from_words(&WordMultiset::parse("fv:1").unwrap(), &k);
        let p = find_pairing(&m).unwrap();
        assert!(m.clone().with_pairing(p).verify().all_pass());
    }

    #[test]
    fn asymmetric_words() {
        let k = Field::prime(3).unwrap();
        let a = module_from_words(&WordMultiset::parse("ffv:1").unwrap(), &k);
        assert!(!a.is_self_dual());
        let b = module_from_words(&WordMultiset::parse("ffv:1, fvv:1").unwrap(), &k);
        assert!(find_pairing(&b).is_none());
        assert!(b.is_self_dual());
        // self-dual word without an alternating form
        let c = module_from_words(&WordMultiset::parse("ffvfvv:1").unwrap(), &k);
        assert!(!c.is_self_dual());
    }
}
