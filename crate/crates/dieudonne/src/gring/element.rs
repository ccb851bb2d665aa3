//! Elements of `R = k[delta]/(delta^p)` and matrices over `R`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldRef};
use crate::linalg::Matrix;

/// `a_0 + a_1 delta + ... + a_{p-1} delta^{p-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RElement {
    pub field: FieldRef,
    pub c: Vec<Elem>,
}

impl RElement {
    pub fn new(field: &FieldRef, mut c: Vec<Elem>) -> RElement {
        let p = field.p() as usize;
        c.resize(p.max(c.len()), 0);
        c.truncate(p);
        RElement {
            field: field.clone(),
            c,
        }
    }

    pub fn zero(field: &FieldRef) -> RElement {
        RElement::new(field, Vec::new())
    }

    pub fn one(field: &FieldRef) -> RElement {
        RElement::new(field, vec![1])
    }

    pub fn delta(field: &FieldRef) -> RElement {
        RElement::new(field, vec![0, 1])
    }

    /// The generator `gamma = 1 + delta`.
    pub fn gamma(field: &FieldRef) -> RElement {
        RElement::new(field, vec![1, 1])
    }

    pub fn p(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&a| a == 0)
    }

    pub fn add(&self, o: &RElement) -> RElement {
        let k = &self.field;
        RElement::new(
            k,
            self.c
                .iter()
                .zip(&o.c)
                .map(|(&a, &b)| k.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, o: &RElement) -> RElement {
        let k = &self.field;
        RElement::new(
            k,
            self.c
                .iter()
                .zip(&o.c)
                .map(|(&a, &b)| k.sub(a, b))
                .collect(),
        )
    }

    pub fn neg(&self) -> RElement {
        RElement::new(
            &self.field,
            self.c.iter().map(|&a| self.field.neg(a)).collect(),
        )
    }

    pub fn scale(&self, s: Elem) -> RElement {
        RElement::new(
            &self.field,
            self.c.iter().map(|&a| self.field.mul(a, s)).collect(),
        )
    }

    pub fn mul(&self, o: &RElement) -> RElement {
        let k = &self.field;
        let p = self.p();
        let mut c = vec![0; p];
        for (i, &a) in self.c.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in o.c[..p - i].iter().enumerate() {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        RElement::new(k, c)
    }

    pub fn pow(&self, mut e: u64) -> RElement {
        let mut base = self.clone();
        let mut acc = RElement::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.c[0] != 0
    }

    pub fn inverse(&self) -> Result<RElement> {
        if !self.is_unit() {
            return Err(Error::Invalid(
                "element of the maximal ideal is not invertible".into(),
            ));
        }
        let k = &self.field;
        let p = self.p();
        let a0inv = k.inv(self.c[0]);
        let mut b = vec![0; p];
        b[0] = a0inv;
        for n in 1..p {
            let mut s = 0;
            for i in 1..=n {
                s = k.add(s, k.mul(self.c[i], b[n - i]));
            }
            b[n] = k.neg(k.mul(s, a0inv));
        }
        Ok(RElement::new(k, b))
    }

    /// Substitute `delta -> t` (a polynomial in `delta`).
    pub fn compose(&self, t: &RElement) -> RElement {
        let mut acc = RElement::zero(&self.field);
        for &a in self.c.iter().rev() {
            acc = acc.mul(t).add(&RElement::new(&self.field, vec![a]));
        }
        acc
    }

    /// The involution with `gamma -> gamma^{-1}`, so `delta -> -delta/(1+delta)`.
    pub fn tilde(&self) -> RElement {
        let k = &self.field;
        let d_tilde = RElement::gamma(k)
            .inverse()
            .expect("gamma is a unit")
            .sub(&RElement::one(k));
        self.compose(&d_tilde)
    }

    /// `(alpha, unit)` with `a = delta^alpha * unit`.
    pub fn leading_valuation(&self) -> Result<(usize, RElement)> {
        let alpha = self
            .c
            .iter()
            .position(|&a| a != 0)
            .ok_or_else(|| Error::Invalid("valuation of zero".into()))?;
        let mut u = self.c[alpha..].to_vec();
        u.resize(self.p(), 0);
        Ok((alpha, RElement::new(&self.field, u)))
    }

    /// Action on a module where `delta` acts by `d`.
    pub fn eval(&self, d: &Matrix) -> Matrix {
        let n = d.rows;
        let mut acc = Matrix::zeros(&self.field, n, n);
        for &a in self.c.iter().rev() {
            acc = acc.mul(d).add(&Matrix::identity(&self.field, n).scale(a));
        }
        acc
    }

    pub fn random<G: Rng + ?Sized>(field: &FieldRef, rng: &mut G) -> RElement {
        let p = field.p() as usize;
        RElement::new(field, (0..p).map(|_| field.random(rng)).collect())
    }

    /// All `q^p` elements; only sensible for tiny fields.
    pub fn all(field: &FieldRef) -> Vec<RElement> {
        let p = field.p() as usize;
        let elems: Vec<Elem> = field.elements().collect();
        let mut out = vec![Vec::new()];
        for _ in 0..p {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Elem>| {
                    elems.iter().map(move |&e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|c| RElement::new(field, c)).collect()
    }
}

/// `k`-matrix of the `R`-linear map `R^m -> R^n` given by `entries[i][j]`,
/// in the basis `delta^l e_j` ordered `(j, l)`.
pub fn regular_matrix(field: &FieldRef, entries: &[Vec<RElement>]) -> Matrix {
    let p = field.p() as usize;
    let n = entries.len();
    let m = entries.first().map_or(0, Vec::len);
    let mut out = Matrix::zeros(field, n * p, m * p);
    for (i, row) in entries.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            for l in 0..p {
                for (s, &c) in a.c.iter().enumerate() {
                    if l + s < p {
                        out.set(i * p + l + s, j * p + l, c);
                    }
                }
            }
        }
    }
    out
}

/// Matrix `1 + delta N` with `N` random over `R`.
pub fn random_one_unit<G: Rng + ?Sized>(
    field: &FieldRef,
    size: usize,
    rng: &mut G,
) -> Vec<Vec<RElement>> {
    let d = RElement::delta(field);
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let x = d.mul(&RElement::random(field, rng));
                    if i == j {
                        x.add(&RElement::one(field))
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gamma_has_order_p() {
        for p in [2, 3, 5, 7] {
            let k = Field::prime(p).unwrap();
            let g = RElement::gamma(&k);
            assert_eq!(g.pow(p), RElement::one(&k));
            assert_ne!(g.pow(p - 1), RElement::one(&k));
        }
    }

    #[test]
    fn tilde_of_delta() {
        let k = Field::prime(5).unwrap();
        let t = RElement::delta(&k).tilde();
        // -d + d^2 - d^3 + d^4
        assert_eq!(t.c, vec![0, 4, 1, 4, 1]);
        assert_eq!(RElement::one(&k).tilde(), RElement::one(&k));
    }

    #[test]
    fn tilde_trivial_in_char_two() {
        let k = Field::new(2, 2).unwrap();
        for a in RElement::all(&k) {
            assert_eq!(a.tilde(), a);
        }
    }

    #[test]
    fn tilde_is_an_involutive_ring_map() {
        let k = Field::prime(3).unwrap();
        let all = RElement::all(&k);
        for a in &all {
            assert_eq!(a.tilde().tilde(), *a);
            for b in &all {
                assert_eq!(a.mul(b).tilde(), a.tilde().mul(&b.tilde()));
            }
        }
    }

    #[test]
    fn symmetric_elements_have_even_valuation() {
        let k = Field::prime(3).unwrap();
        let mut count = 0;
        for a in RElement::all(&k) {
            if !a.is_zero() && a.tilde() == a {
                count += 1;
                assert_eq!(a.leading_valuation().unwrap().0 % 2, 0, "{:?}", a.c);
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn valuation_examples() {
        let k = Field::prime(5).unwrap();
        let a = RElement::new(&k, vec![0, 0, 1, 1]);
        let (alpha, u) = a.leading_valuation().unwrap();
        assert_eq!(alpha, 2);
        assert!(u.is_unit());
        assert_eq!(RElement::one(&k).leading_valuation().unwrap().0, 0);
        assert!(RElement::zero(&k).leading_valuation().is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let k = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = RElement::random(&k, &mut rng);
            if a.is_unit() {
                assert_eq!(a.mul(&a.inverse().unwrap()), RElement::one(&k));
            }
        }
    }

    #[test]
    fn one_units_have_exponent_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for (p, r) in [(2, 1), (3, 1), (3, 2), (5, 1)] {
            let k = Field::new(p, r).unwrap();
            for size in 1..=3 {
                let u = regular_matrix(&k, &random_one_unit(&k, size, &mut rng));
                let n = u.rows;
                assert_eq!(u.pow(p), Matrix::identity(&k, n));
            }
        }
    }
}
