//! Invariant factors of a square matrix via Smith form of `xI - A`.

use crate::field::FieldRef;
use crate::linalg::Matrix;
use crate::poly::Poly;

fn smith_diagonal(mut m: Vec<Vec<Poly>>, k: &FieldRef) -> Vec<Poly> {
    let n = m.len();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // pivot of least degree in the trailing block
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(d) = e.deg() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                diag.extend(std::iter::repeat_n(Poly::zero(), n - t));
                return diag;
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let piv = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                let (q, r) = m[i][t].divrem(&piv, k);
                if !q.is_zero() {
                    for j in t..n {
                        let s = q.mul(&m[t][j], k);
                        m[i][j] = m[i][j].sub(&s, k);
                    }
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                let (q, r) = m[t][j].divrem(&piv, k);
                if !q.is_zero() {
                    for i in t..n {
                        let s = q.mul(&m[i][t], k);
                        m[i][j] = m[i][j].sub(&s, k);
                    }
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest; otherwise fold a row in and retry
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !m[i][j].rem(&piv, k).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let s = m[i][j].clone();
                        m[t][j] = m[t][j].add(&s, k);
                    }
                }
                None => {
                    diag.push(piv.monic(k));
                    break;
                }
            }
        }
    }
    diag
}

/// Nonconstant invariant factors `d_1 | d_2 | ...` of `A` as monic polynomials.
pub fn invariant_factors(a: &Matrix) -> Vec<Poly> {
    let k = &a.field;
    let n = a.rows;
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = k.neg(a.get(i, j));
                    if i == j {
                        Poly::new(vec![c, 1])
                    } else {
                        Poly::constant(c)
                    }
                })
                .collect()
        })
        .collect();
    smith_diagonal(m, k)
        .into_iter()
        .filter(|d| !d.is_constant())
        .collect()
}

/// Exponents `e_1 <= e_2 <= ...` when every invariant factor is `(x-1)^e`.
pub fn unipotent_exponents(a: &Matrix) -> Option<Vec<usize>> {
    let k = &a.field;
    let xm1 = Poly::new(vec![k.neg(1), 1]);
    invariant_factors(a)
        .into_iter()
        .map(|d| {
            let e = d.deg()?;
            (xm1.pow(e as u64, k) == d).then_some(e)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn jordan_blocks() {
        let k = Field::prime(3).unwrap();
        // J_1 + J_1 + J_2 at eigenvalue 1
        let mut a = Matrix::identity(&k, 4);
        a.set(3, 2, 1);
        assert_eq!(unipotent_exponents(&a), Some(vec![1, 1, 2]));
        // conjugating does not change the answer
        let s = Matrix::from_rows(
            &k,
            &[
                vec![1, 2, 0, 1],
                vec![0, 1, 1, 0],
                vec![2, 0, 1, 1],
                vec![0, 0, 1, 2],
            ],
        );
        let si = s.inverse().unwrap();
        assert_eq!(
            unipotent_exponents(&s.mul(&a).mul(&si)),
            Some(vec![1, 1, 2])
        );
    }

    #[test]
    fn companion_matrix() {
        let k = Field::prime(5).unwrap();
        // companion of x^3 - 2
        let a = Matrix::from_rows(&k, &[vec![0, 0, 2], vec![1, 0, 0], vec![0, 1, 0]]);
        let f = invariant_factors(&a);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].coeffs(), &[3, 0, 0, 1]);
        assert_eq!(unipotent_exponents(&a), None);
    }

    #[test]
    fn scalar_matrix() {
        let k = Field::prime(7).unwrap();
        let a = Matrix::identity(&k, 3).scale(2);
        let f = invariant_factors(&a);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(|d| d.coeffs() == [5, 1]));
    }
}
