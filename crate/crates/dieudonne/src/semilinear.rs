//! Frobenius-semilinear maps `v -> A v^(p^e)` and F_p-linear reduction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldRef};
use crate::linalg::{vec_frob, Matrix, Subspace};

#[derive(Clone, Debug, PartialEq)]
pub struct SemilinearMap {
    pub matrix: Matrix,
    pub twist: i64,
}

impl SemilinearMap {
    pub fn new(matrix: Matrix, twist: i64) -> SemilinearMap {
        SemilinearMap { matrix, twist }
    }

    pub fn field(&self) -> &FieldRef {
        &self.matrix.field
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        self.matrix.mul_vec(&vec_frob(self.field(), v, self.twist))
    }

    /// `self o other`: `(A,e) o (B,f) = (A B^(p^e), e+f)`.
    pub fn compose(&self, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap {
            matrix: self.matrix.mul(&other.matrix.frob(self.twist)),
            twist: self.twist + other.twist,
        }
    }

    pub fn pow(&self, k: u32) -> SemilinearMap {
        let n = self.matrix.rows;
        let mut r = SemilinearMap::new(Matrix::identity(self.field(), n), 0);
        for _ in 0..k {
            r = self.compose(&r);
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn image(&self) -> Subspace {
        Subspace::column_space(&self.matrix)
    }

    /// `{v : A v^(p^e) = 0} = (ker A)^(p^-e)`.
    pub fn kernel(&self) -> Subspace {
        Subspace::kernel_of(&self.matrix).frob(-self.twist)
    }

    /// Image of a subspace.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        s.frob(self.twist).image(&self.matrix)
    }

    /// `{v : A v^(p^e) in s}`.
    pub fn preimage_of(&self, s: &Subspace) -> Subspace {
        s.preimage(&self.matrix).frob(-self.twist)
    }

    /// Eventual image and kernel `(im m^a, ker m^a)` for `a >= n`.
    pub fn stable_image_kernel(&self) -> Result<(Subspace, Subspace)> {
        if !self.matrix.is_square() {
            return Err(Error::Dimension(
                "stable image/kernel of a non-square map".into(),
            ));
        }
        let n = self.matrix.rows;
        let m = self.pow(n.max(1) as u32);
        Ok((m.image(), m.kernel()))
    }
}

/// Serialized form of a matrix: row-major packed coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            data: (0..m.rows)
                .flat_map(|i| m.row(i).to_vec())
                .map(|a| m.field.coeffs(a))
                .collect(),
        }
    }

    pub fn to_matrix(&self, field: &FieldRef) -> Result<Matrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Dimension("matrix data length".into()));
        }
        let mut m = Matrix::zeros(field, self.rows, self.cols);
        for (i, c) in self.data.iter().enumerate() {
            if c.len() > field.degree() as usize || c.iter().any(|&x| x >= field.p()) {
                return Err(Error::Invalid("matrix entry outside the field".into()));
            }
            m.data[i] = field.from_coeffs(c);
        }
        Ok(m)
    }
}

/// Kernel over F_p of an F_p-linear map `k^n_in -> k^n_out` given as a closure,
/// returned as vectors in `k^n_in`.
pub fn solve_fp_linear<F>(field: &FieldRef, n_in: usize, n_out: usize, map: F) -> Vec<Vec<Elem>>
where
    F: Fn(&[Elem]) -> Vec<Elem>,
{
    let r = field.degree() as usize;
    let fp = Field::prime(field.p()).expect("prime field");
    let mut cols = Vec::with_capacity(n_in * r);
    for i in 0..n_in {
        for j in 0..r {
            let mut v = vec![0; n_in];
            let mut c = vec![0; r];
            c[j] = 1;
            v[i] = field.from_coeffs(&c);
            let img = map(&v);
            assert_eq!(img.len(), n_out, "map output length");
            cols.push(
                img.iter()
                    .flat_map(|&a| field.coeffs(a))
                    .collect::<Vec<_>>(),
            );
        }
    }
    let big = if n_out == 0 {
        Matrix::zeros(&fp, 0, n_in * r)
    } else {
        Matrix::from_cols(&fp, n_out * r, &cols)
    };
    big.kernel()
        .into_iter()
        .map(|kv| {
            (0..n_in)
                .map(|i| field.from_coeffs(&kv[i * r..(i + 1) * r]))
                .collect()
        })
        .collect()
}

/// F_p-basis of `{v : A v^(p) = v}` (or any twist).
pub fn fixed_points(m: &SemilinearMap) -> Vec<Vec<Elem>> {
    let n = m.matrix.rows;
    let f = m.field().clone();
    solve_fp_linear(&f, n, n, |v| {
        let w = m.apply(v);
        w.iter().zip(v).map(|(&a, &b)| f.sub(a, b)).collect()
    })
}

/// Search the `F_p`-span of `sols` for a nonzero vector satisfying `pred`:
/// every combination when there are at most `2^16`, else 4096 seeded draws.
pub fn search_span<P>(field: &FieldRef, sols: &[Vec<Elem>], pred: P) -> Option<Vec<Elem>>
where
    P: Fn(&[Elem]) -> bool,
{
    const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
    const RANDOM_TRIALS: usize = 4096;
    let len = sols.first()?.len();
    let pr = field.p();
    let s = sols.len() as u32;
    let combine = |coeffs: &[u64]| {
        let mut x = vec![0; len];
        for (c, v) in coeffs.iter().zip(sols) {
            if *c != 0 {
                for (xi, &vi) in x.iter_mut().zip(v) {
                    *xi = field.add(*xi, field.mul(*c, vi));
                }
            }
        }
        x
    };
    if let Some(total) = pr.checked_pow(s).filter(|&t| t <= EXHAUSTIVE_LIMIT) {
        return (1..total).find_map(|idx| {
            let mut t = idx;
            let coeffs: Vec<u64> = (0..s)
                .map(|_| {
                    let c = t % pr;
                    t /= pr;
                    c
                })
                .collect();
            let x = combine(&coeffs);
            pred(&x).then_some(x)
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    (0..RANDOM_TRIALS).find_map(|_| {
        let coeffs: Vec<u64> = (0..s).map(|_| rng.gen_range(0..pr)).collect();
        let x = combine(&coeffs);
        pred(&x).then_some(x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn composition_law() {
        let f = Field::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = SemilinearMap::new(Matrix::random(&f, 3, 3, &mut rng), 1);
            let b = SemilinearMap::new(Matrix::random(&f, 3, 3, &mut rng), -1);
            let v: Vec<Elem> = (0..3).map(|_| f.random(&mut rng)).collect();
            assert_eq!(a.compose(&b).apply(&v), a.apply(&b.apply(&v)));
            assert_eq!(b.compose(&a).apply(&v), b.apply(&a.apply(&v)));
        }
    }

    #[test]
    fn stable_parts_of_diag() {
        let f = Field::prime(3).unwrap();
        let a = SemilinearMap::new(Matrix::from_rows(&f, &[vec![1, 0], vec![0, 0]]), 1);
        let (im, ker) = a.stable_image_kernel().unwrap();
        assert_eq!(im, Subspace::span(&f, 2, &[vec![1, 0]]));
        assert_eq!(ker, Subspace::span(&f, 2, &[vec![0, 1]]));
    }

    #[test]
    fn fixed_points_scalar_f9() {
        let f = Field::new(3, 2).unwrap();
        for alpha in f.elements() {
            let m = SemilinearMap::new(Matrix::from_rows(&f, &[vec![alpha]]), 1);
            let dim = fixed_points(&m).len();
            let brute = f
                .elements()
                .filter(|&v| f.mul(alpha, f.frob(v, 1)) == v)
                .count();
            assert_eq!(3u64.pow(dim as u32), brute as u64);
        }
    }
}
