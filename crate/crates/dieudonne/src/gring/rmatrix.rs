//! Matrices over `R = k[delta]/(delta^p)`.

use rand::Rng;

use super::element::{regular_matrix, RElement};
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    pub field: FieldRef,
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<Vec<RElement>>,
}

impl RMatrix {
    pub fn from_entries(field: &FieldRef, e: Vec<Vec<RElement>>) -> RMatrix {
        let rows = e.len();
        let cols = e.first().map_or(0, Vec::len);
        RMatrix {
            field: field.clone(),
            rows,
            cols,
            e,
        }
    }

    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> RMatrix {
        RMatrix::from_entries(field, vec![vec![RElement::zero(field); cols]; rows])
    }

    pub fn identity(field: &FieldRef, n: usize) -> RMatrix {
        let mut m = RMatrix::zeros(field, n, n);
        for i in 0..n {
            m.e[i][i] = RElement::one(field);
        }
        m
    }

    /// `sum_i delta^i C_i` from matrices `C_i` over `k`.
    pub fn from_expansion(field: &FieldRef, parts: &[Matrix]) -> RMatrix {
        let (rows, cols) = parts.first().map_or((0, 0), |m| (m.rows, m.cols));
        let mut m = RMatrix::zeros(field, rows, cols);
        for (l, c) in parts.iter().enumerate() {
            for i in 0..rows {
                for j in 0..cols {
                    let mut coeffs = m.e[i][j].c.clone();
                    if l < coeffs.len() {
                        coeffs[l] = field.add(coeffs[l], c.get(i, j));
                    }
                    m.e[i][j] = RElement::new(field, coeffs);
                }
            }
        }
        m
    }

    /// The `delta^l` coefficient matrix.
    pub fn coefficient(&self, l: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.e[i][j].c[l]);
            }
        }
        m
    }

    pub fn scalar(field: &FieldRef, n: usize, a: &RElement) -> RMatrix {
        let mut m = RMatrix::zeros(field, n, n);
        for i in 0..n {
            m.e[i][i] = a.clone();
        }
        m
    }

    pub fn map(&self, f: impl Fn(&RElement) -> RElement) -> RMatrix {
        RMatrix::from_entries(
            &self.field,
            self.e.iter().map(|r| r.iter().map(&f).collect()).collect(),
        )
    }

    pub fn add(&self, o: &RMatrix) -> RMatrix {
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect();
        RMatrix::from_entries(&self.field, e)
    }

    pub fn sub(&self, o: &RMatrix) -> RMatrix {
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
            .collect();
        RMatrix::from_entries(&self.field, e)
    }

    pub fn neg(&self) -> RMatrix {
        self.map(RElement::neg)
    }

    pub fn mul(&self, o: &RMatrix) -> RMatrix {
        let mut out = RMatrix::zeros(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = RElement::zero(&self.field);
                for t in 0..self.cols {
                    acc = acc.add(&self.e[i][t].mul(&o.e[t][j]));
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> RMatrix {
        let e = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.e[i][j].clone()).collect())
            .collect();
        RMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            e,
        }
    }

    pub fn tilde(&self) -> RMatrix {
        self.map(RElement::tilde)
    }

    /// Raise every `k`-coefficient to the `p^e`-th power.
    pub fn frob(&self, e: i64) -> RMatrix {
        let k = self.field.clone();
        self.map(|a| RElement::new(&k, a.c.iter().map(|&x| k.frob(x, e)).collect()))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(RElement::is_zero)
    }

    /// Whether `delta` divides every entry.
    pub fn divisible_by_delta(&self) -> bool {
        self.e.iter().flatten().all(|a| a.c[0] == 0)
    }

    /// Least `delta`-adic valuation of the entries (`p` for zero).
    pub fn valuation(&self) -> usize {
        let p = self.field.p() as usize;
        self.e
            .iter()
            .flatten()
            .filter_map(|a| a.leading_valuation().ok().map(|v| v.0))
            .min()
            .unwrap_or(p)
    }

    pub fn regular(&self) -> Matrix {
        regular_matrix(&self.field, &self.e)
    }

    /// Inverse over the local ring `R`, pivoting on units.
    pub fn inverse(&self) -> Result<RMatrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let mut a = self.clone();
        let mut inv = RMatrix::identity(&self.field, n);
        for c in 0..n {
            let piv = (c..n)
                .find(|&r| a.e[r][c].is_unit())
                .ok_or_else(|| Error::Invalid("matrix over R is not invertible".into()))?;
            a.e.swap(c, piv);
            inv.e.swap(c, piv);
            let u = a.e[c][c].inverse()?;
            a.e[c] = a.e[c].iter().map(|x| x.mul(&u)).collect();
            inv.e[c] = inv.e[c].iter().map(|x| x.mul(&u)).collect();
            for r in 0..n {
                if r != c && !a.e[r][c].is_zero() {
                    let f = a.e[r][c].clone();
                    for j in 0..n {
                        let s = f.mul(&a.e[c][j]);
                        a.e[r][j] = a.e[r][j].sub(&s);
                        let s = f.mul(&inv.e[c][j]);
                        inv.e[r][j] = inv.e[r][j].sub(&s);
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn random<G: Rng + ?Sized>(
        field: &FieldRef,
        rows: usize,
        cols: usize,
        rng: &mut G,
    ) -> RMatrix {
        let e = (0..rows)
            .map(|_| (0..cols).map(|_| RElement::random(field, rng)).collect())
            .collect();
        RMatrix::from_entries(field, e)
    }

    /// Random invertible matrix (invertible modulo `delta`).
    pub fn random_invertible<G: Rng + ?Sized>(field: &FieldRef, n: usize, rng: &mut G) -> RMatrix {
        loop {
            let m = RMatrix::random(field, n, n, rng);
            if m.coefficient(0).rank() == n {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_regular_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = Field::new(3, 2).unwrap();
        for n in 1..=3 {
            let a = RMatrix::random_invertible(&k, n, &mut rng);
            let ai = a.inverse().unwrap();
            assert_eq!(a.mul(&ai), RMatrix::identity(&k, n));
            assert_eq!(a.regular().mul(&ai.regular()), Matrix::identity(&k, 3 * n));
            let b = RMatrix::random(&k, n, n, &mut rng);
            assert_eq!(a.mul(&b).regular(), a.regular().mul(&b.regular()));
        }
    }

    #[test]
    fn expansion_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = Field::prime(5).unwrap();
        let a = RMatrix::random(&k, 2, 3, &mut rng);
        let parts: Vec<Matrix> = (0..5).map(|l| a.coefficient(l)).collect();
        assert_eq!(RMatrix::from_expansion(&k, &parts), a);
    }
}
