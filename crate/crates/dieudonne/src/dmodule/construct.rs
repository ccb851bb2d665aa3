//! Standard modules from Kraft words and from elementary sequences.

use super::duality::find_pairing;
use super::words::WordMultiset;
use super::DModule;
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::linalg::Matrix;

/// Standard model of `M(w)` for each word with multiplicity.
///
/// For a word `w` of length `L` the basis is `e_0..e_{L-1}` where `e_i` is
/// the rotation of `w` to the right by `i`; `F e_i = e_{i+1}` when that
/// rotation ends in `f`, and `V e_i = -e_{i-1}` when it starts with `v`; the
/// sign makes self-dual multisets carry a pairing over the prime field.
pub fn module_from_words(words: &WordMultiset, k: &FieldRef) -> DModule {
    let n = words.dimension();
    let mut f = Matrix::zeros(k, n, n);
    let mut v = Matrix::zeros(k, n, n);
    let minus_one = k.neg(1);
    let mut base = 0;
    for (w, &mult) in words.iter() {
        let b = w.as_bytes();
        let len = b.len();
        for _ in 0..mult {
            for i in 0..len {
                let last = b[(len - 1 + len - i % len) % len];
                let first = b[(len - i % len) % len];
                if last == b'f' {
                    f.set(base + (i + 1) % len, base + i, 1);
                }
                if first == b'v' {
                    v.set(base + (i + len - 1) % len, base + i, minus_one);
                }
            }
            base += len;
        }
    }
    DModule::new(f, v).expect("square matrices")
}

/// Standard model together with a compatible pairing (self-dual input).
///
/// The pairing may only exist after a scalar extension (degree 2 or 4), in
/// which case the returned module lives over that extension.
pub fn module_from_words_paired(words: &WordMultiset, k: &FieldRef) -> Result<DModule> {
    if !words.is_self_dual() {
        return Err(Error::Invalid(format!("{words} is not self-dual")));
    }
    let m = module_from_words(words, k);
    for s in SELF_DUAL_DEGREES {
        let ms = m.extend_scalars(s)?;
        if let Some(p) = find_pairing(&ms) {
            return Ok(ms.with_pairing(p));
        }
    }
    Err(Error::Invariant(format!(
        "{words} carries no alternating pairing"
    )))
}

/// Extension degrees tried when deciding self-duality.
pub const SELF_DUAL_DEGREES: [u32; 3] = [1, 2, 4];

/// Alternating form with `<e_i, e_{h+i}> = 1` on `k^{2h}`.
pub fn standard_pairing(k: &FieldRef, h: usize) -> Matrix {
    let mut j = Matrix::zeros(k, 2 * h, 2 * h);
    for i in 0..h {
        j.set(i, h + i, 1);
        j.set(h + i, i, k.neg(1));
    }
    j
}

/// Indices `m_1 < ... < m_g` (where the final sequence rises) and
/// `n_1 > ... > n_g` (where it stays flat), 1-based.
pub fn oort_indices(psi: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let g = psi.len();
    if g == 0 {
        return Err(Error::Invalid("empty elementary sequence".into()));
    }
    if !super::is_elementary_sequence(psi) || psi[0] != 0 {
        return Err(Error::Invalid(format!(
            "{psi:?} is not a local-local elementary sequence"
        )));
    }
    let n = 2 * g;
    let mut fin = vec![0usize; n + 1];
    fin[1..=g].copy_from_slice(psi);
    for i in 0..g {
        fin[n - i] = fin[i] + g - i;
    }
    let ms: Vec<usize> = (1..=n).filter(|&i| fin[i] > fin[i - 1]).collect();
    let mut ns: Vec<usize> = (1..=n).filter(|&i| fin[i] == fin[i - 1]).collect();
    ns.reverse();
    if ms.len() != g || ns.len() != g {
        return Err(Error::Invalid("final sequence has the wrong shape".into()));
    }
    Ok((ms, ns))
}

/// Oort's module for a local-local elementary sequence `[psi_1..psi_g]`,
/// with basis `Z_1..Z_{2g}` and pairing `<X_i, Y_j> = delta_ij`.
pub fn module_from_eo(psi: &[usize], k: &FieldRef) -> Result<DModule> {
    let g = psi.len();
    let (ms, ns) = oort_indices(psi)?;
    let n = 2 * g;
    // indices are 1-based Z_i -> column i-1
    let mut f = Matrix::zeros(k, n, n);
    let mut v = Matrix::zeros(k, n, n);
    for (i, &m) in ms.iter().enumerate() {
        f.set(i, m - 1, 1);
    }
    for i in 1..=g {
        let sign = if ms.contains(&i) { 1 } else { k.neg(1) };
        v.set(ns[i - 1] - 1, n - i, sign);
    }
    let mut p = Matrix::zeros(k, n, n);
    for i in 0..g {
        p.set(ms[i] - 1, ns[i] - 1, 1);
        p.set(ns[i] - 1, ms[i] - 1, k.neg(1));
    }
    Ok(DModule::new(f, v)?.with_pairing(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn fv_module_shape() {
        let k = Field::prime(3).unwrap();
        let m = module_from_words(&WordMultiset::parse("fv:1").unwrap(), &k);
        assert!(m.is_bt1());
        assert_eq!(m.a_number(), 1);
        assert!(m.verify().all_pass());
    }

    #[test]
    fn f3v3_has_a_number_one() {
        let k = Field::prime(3).unwrap();
        let m = module_from_words(&WordMultiset::parse("f^3v^3:1").unwrap(), &k);
        assert_eq!(m.n, 6);
        assert_eq!(m.a_number(), 1);
    }

    #[test]
    fn oort_modules_are_self_dual_bt1() {
        for p in [2, 3, 5] {
            let k = Field::prime(p).unwrap();
            for psi in [
                vec![0],
                vec![0, 1],
                vec![0, 0, 1],
                vec![0, 1, 1, 2],
                vec![0, 0, 0, 1],
            ] {
                let m = module_from_eo(&psi, &k).unwrap();
                assert!(m.verify().all_pass(), "p={p} psi={psi:?}");
                assert!(m.is_bt1());
                assert!(m.is_local_local());
            }
        }
    }

    #[test]
    fn example_eo_words() {
        let k = Field::prime(2).unwrap();
        let m = module_from_eo(&[0, 0, 0, 1], &k).unwrap();
        assert_eq!(
            m.kraft_words().unwrap(),
            WordMultiset::parse("ffvv:1, fv:2").unwrap()
        );
        assert_eq!(m.a_number(), 3);
    }
}
