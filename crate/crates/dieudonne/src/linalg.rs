//! Dense matrices and subspaces over a finite field.

use std::fmt;

use rand::Rng;

use crate::field::{Elem, Embedding, FieldRef};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    pub field: FieldRef,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {:?}]", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|&a| self.field.fmt_elem(a))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &FieldRef, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &FieldRef, rows: &[Vec<Elem>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &FieldRef, n: usize, cols: &[Vec<Elem>]) -> Matrix {
        let mut m = Matrix::zeros(field, n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(
        field: &FieldRef,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for x in m.data.iter_mut() {
            *x = field.random(rng);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, a: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&b| f.mul(a, b)).collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b != 0 {
                        let idx = i * o.cols + j;
                        m.data[idx] = f.add(m.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut s = 0;
                for (j, &x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if a != 0 && x != 0 {
                        s = f.add(s, f.mul(a, x));
                    }
                }
                s
            })
            .collect()
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut r = Matrix::identity(&self.field, self.rows);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Entrywise `a -> a^(p^e)`.
    pub fn frob(&self, e: i64) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.frob(a, e)).collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn embed(&self, e: &Embedding) -> Matrix {
        Matrix {
            field: e.big.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| e.map(a)).collect(),
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zeros(&self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, o);
        m
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut m = Matrix::zeros(&self.field, self.rows + o.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, o);
        m
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = self.get(r, j);
                    if v != 0 {
                        let cur = self.get(i, j);
                        self.set(i, j, f.sub(cur, f.mul(factor, v)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let bm = Matrix::from_cols(&self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&bm);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Solve `A X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(&self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_alternating(&self) -> bool {
        let f = &self.field;
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i) == 0 && (0..i).all(|j| self.get(i, j) == f.neg(self.get(j, i)))
            })
    }
}

pub fn dot(field: &FieldRef, a: &[Elem], b: &[Elem]) -> Elem {
    let mut s = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x != 0 && y != 0 {
            s = field.add(s, field.mul(x, y));
        }
    }
    s
}

pub fn vec_add(field: &FieldRef, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

pub fn vec_sub(field: &FieldRef, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect()
}

pub fn vec_scale(field: &FieldRef, c: Elem, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| field.mul(c, x)).collect()
}

pub fn vec_frob(field: &FieldRef, a: &[Elem], e: i64) -> Vec<Elem> {
    a.iter().map(|&x| field.frob(x, e)).collect()
}

/// A subspace of `k^n`, stored as a reduced row echelon basis.
#[derive(Clone, PartialEq)]
pub struct Subspace {
    pub field: FieldRef,
    pub n: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.n)
    }
}

impl Eq for Subspace {}

impl std::hash::Hash for Subspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.basis.data.hash(state);
    }
}

impl Subspace {
    pub fn zero(field: &FieldRef, n: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            n,
            basis: Matrix::zeros(field, 0, n),
            pivots: vec![],
        }
    }

    pub fn full(field: &FieldRef, n: usize) -> Subspace {
        let basis = Matrix::identity(field, n);
        Subspace {
            field: field.clone(),
            n,
            basis,
            pivots: (0..n).collect(),
        }
    }

    pub fn span(field: &FieldRef, n: usize, vecs: &[Vec<Elem>]) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(field, n);
        }
        let mut m = Matrix::from_rows(field, vecs);
        assert_eq!(m.cols, n);
        let pivots = m.rref_in_place();
        let r = pivots.len();
        m.data.truncate(r * n);
        m.rows = r;
        Subspace {
            field: field.clone(),
            n,
            basis: m,
            pivots,
        }
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix) -> Subspace {
        let cols: Vec<Vec<Elem>> = (0..m.cols).map(|j| m.col(j)).collect();
        Subspace::span(&m.field, m.rows, &cols)
    }

    pub fn kernel_of(m: &Matrix) -> Subspace {
        Subspace::span(&m.field, m.cols, &m.kernel())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    pub fn basis(&self) -> Vec<Vec<Elem>> {
        (0..self.basis.rows)
            .map(|i| self.basis.row(i).to_vec())
            .collect()
    }

    pub fn basis_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` modulo the subspace (clears pivot coordinates).
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                for (j, x) in v.iter_mut().enumerate() {
                    let b = self.basis.get(i, j);
                    if b != 0 {
                        *x = f.sub(*x, f.mul(c, b));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` (assumed inside) in the echelon basis.
    pub fn coords(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    /// Coordinates in `k^n / self`, using the non-pivot standard vectors as
    /// complement basis.
    pub fn quotient_coords(&self, v: &[Elem]) -> Vec<Elem> {
        let r = self.reduce(v);
        (0..self.n)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| r[c])
            .collect()
    }

    /// Standard representatives of a basis of `k^n / self`.
    pub fn complement_basis(&self) -> Vec<Vec<Elem>> {
        (0..self.n)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| {
                let mut v = vec![0; self.n];
                v[c] = 1;
                v
            })
            .collect()
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut vecs = self.basis();
        vecs.extend(o.basis());
        Subspace::span(&self.field, self.n, &vecs)
    }

    /// Rows spanning the annihilator: `v` lies in the subspace iff `A v = 0`.
    pub fn equations(&self) -> Matrix {
        let ker = self.basis.kernel();
        if ker.is_empty() {
            return Matrix::zeros(&self.field, 0, self.n);
        }
        Matrix::from_rows(&self.field, &ker)
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        let eq = self.equations().vstack(&o.equations());
        if eq.rows == 0 {
            return Subspace::full(&self.field, self.n);
        }
        Subspace::kernel_of(&eq)
    }

    /// `A(self)` for a matrix acting on column vectors.
    pub fn image(&self, a: &Matrix) -> Subspace {
        let vecs: Vec<Vec<Elem>> = self.basis().iter().map(|v| a.mul_vec(v)).collect();
        Subspace::span(&self.field, a.rows, &vecs)
    }

    /// `{v : A v in self}`.
    pub fn preimage(&self, a: &Matrix) -> Subspace {
        let eq = self.equations();
        if eq.rows == 0 {
            return Subspace::full(&self.field, a.cols);
        }
        Subspace::kernel_of(&eq.mul(a))
    }

    /// Coordinatewise `p^e` power of every vector.
    pub fn frob(&self, e: i64) -> Subspace {
        let vecs: Vec<Vec<Elem>> = self
            .basis()
            .iter()
            .map(|v| vec_frob(&self.field, v, e))
            .collect();
        Subspace::span(&self.field, self.n, &vecs)
    }

    pub fn embed(&self, e: &Embedding) -> Subspace {
        let vecs: Vec<Vec<Elem>> = self
            .basis()
            .iter()
            .map(|v| v.iter().map(|&a| e.map(a)).collect())
            .collect();
        Subspace::span(&e.big, self.n, &vecs)
    }

    /// Whether every basis vector has coordinates in the image of `F_p`.
    pub fn is_rational_over_prime(&self) -> bool {
        self.basis
            .data
            .iter()
            .all(|&a| self.field.is_in_prime_field(a))
    }

    /// Matrix of a map restricted to this subspace (the map must preserve it).
    pub fn restrict(&self, a: &Matrix) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(&self.field, d, d);
        for (j, v) in self.basis().iter().enumerate() {
            let img = a.mul_vec(v);
            debug_assert!(self.contains(&img), "map does not preserve subspace");
            for (i, c) in self.coords(&img).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    /// Matrix of the induced map on `k^n / self`.
    pub fn induced_on_quotient(&self, a: &Matrix) -> Matrix {
        let reps = self.complement_basis();
        let d = reps.len();
        let mut m = Matrix::zeros(&self.field, d, d);
        for (j, v) in reps.iter().enumerate() {
            let img = a.mul_vec(v);
            for (i, c) in self.quotient_coords(&img).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_nullity_and_inverse() {
        let f = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = Matrix::random(&f, 4, 6, &mut rng);
            let ker = a.kernel();
            assert_eq!(a.rank() + ker.len(), 6);
            for v in &ker {
                assert!(a.mul_vec(v).iter().all(|&x| x == 0));
            }
            let s = Matrix::random(&f, 4, 4, &mut rng);
            if let Some(si) = s.inverse() {
                assert_eq!(s.mul(&si), Matrix::identity(&f, 4));
            } else {
                assert!(s.rank() < 4);
            }
        }
    }

    #[test]
    fn subspace_lattice_ops() {
        let f = Field::prime(5).unwrap();
        let a = Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersect(&b), Subspace::span(&f, 3, &[vec![0, 3, 0]]));
        assert!(a.sum(&b).is_full());
        assert_eq!(a.quotient_coords(&[1, 2, 3]), vec![3]);
    }

    #[test]
    fn preimage_matches_definition() {
        let f = Field::prime(3).unwrap();
        let a = Matrix::from_rows(&f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        let n = Subspace::span(&f, 3, &[vec![1, 0, 0]]);
        let pre = n.preimage(&a);
        assert_eq!(pre, Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]));
    }
}
