//! Univariate polynomials over a finite field.
//!
//! Coefficients are ascending and trimmed; the field is passed to every
//! operation so values stay plain data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, Embedding, Field, FieldRef};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Elem>,
}

impl Poly {
    pub fn new(mut c: Vec<Elem>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Elem) -> Poly {
        Poly::new(vec![a])
    }

    pub fn one() -> Poly {
        Poly::constant(1)
    }

    pub fn x() -> Poly {
        Poly::new(vec![0, 1])
    }

    /// `a x^n`.
    pub fn monomial(a: Elem, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = a;
        Poly::new(c)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn degree_or_neg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Elem {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(self.c.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn scale(&self, a: Elem, f: &Field) -> Poly {
        Poly::new(self.c.iter().map(|&b| f.mul(a, b)).collect())
    }

    pub fn mul(&self, o: &Poly, f: &Field) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(out)
    }

    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; n];
        c.extend_from_slice(&self.c);
        Poly::new(c)
    }

    pub fn pow(&self, e: u64, f: &Field) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f);
            }
        }
        r
    }

    pub fn divrem(&self, d: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![0; r.len() - dd];
        let li = f.inv(d.lead());
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], li);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dj) in d.c.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, f: &Field) -> Poly {
        self.divrem(d, f).1
    }

    /// Exact quotient; panics if `d` does not divide.
    pub fn exact_div(&self, d: &Poly, f: &Field) -> Poly {
        let (q, r) = self.divrem(d, f);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lead()), f)
    }

    pub fn gcd(&self, o: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, o: &Poly, f: &Field) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = f.inv(r0.lead());
        (r0.scale(li, f), s0.scale(li, f), t0.scale(li, f))
    }

    pub fn eval(&self, x: Elem, f: &Field) -> Elem {
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = f.add(f.mul(acc, x), a);
        }
        acc
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| f.mul(f.from_int(i as i64), a))
                .collect(),
        )
    }

    /// Coefficients of `self(a + u)` as a polynomial in `u`.
    pub fn taylor_shift(&self, a: Elem, f: &Field) -> Poly {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = f.add(c[j], f.mul(a, c[j + 1]));
            }
        }
        Poly::new(c)
    }

    /// Apply a coefficient map (e.g. an embedding or Frobenius).
    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Poly {
        Poly::new(self.c.iter().map(|&a| g(a)).collect())
    }

    pub fn embed(&self, e: &Embedding) -> Poly {
        self.map(|a| e.map(a))
    }

    /// `x^e mod self`.
    pub fn x_pow_mod(&self, e: u64, f: &Field) -> Poly {
        Poly::x().rem(self, f).pow_mod(e, self, f)
    }

    pub fn pow_mod(&self, e: u64, m: &Poly, f: &Field) -> Poly {
        let mut r = Poly::one().rem(m, f);
        let mut b = self.rem(m, f);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f).rem(m, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f).rem(m, f);
            }
        }
        r
    }

    /// `x^(q^k) mod self` where `q` is the field order.
    fn x_pow_q_k(&self, k: u32, f: &Field) -> Poly {
        let mut cur = Poly::x().rem(self, f);
        for _ in 0..k {
            cur = cur.pow_mod(f.order(), self, f);
        }
        cur
    }

    /// All distinct roots in `f`, sorted by packed value.
    pub fn roots(&self, f: &Field) -> Vec<Elem> {
        if self.is_zero() {
            return Vec::new();
        }
        let me = self.monic(f);
        if me.deg() == Some(0) {
            return Vec::new();
        }
        let xq = me.x_pow_q_k(1, f);
        let g = me.gcd(&xq.sub(&Poly::x(), f), f);
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&g, f, &mut rng, &mut out);
        out.sort_unstable();
        out
    }

    /// Distinct monic irreducible factors over `f` with their degrees.
    pub fn irreducible_factors(&self, f: &FieldRef) -> Vec<Poly> {
        let mut rest = self.monic(f);
        let mut found: Vec<Poly> = Vec::new();
        let mut d = 1u32;
        while rest.deg().unwrap_or(0) > 0 {
            let h = rest.x_pow_q_k(d, f);
            let mut g = rest.gcd(&h.sub(&Poly::x(), f), f);
            for prev in &found {
                if d.is_multiple_of(prev.deg().unwrap() as u32) && g.rem(prev, f).is_zero() {
                    g = g.exact_div(prev, f);
                }
            }
            if g.deg().unwrap_or(0) > 0 {
                let facs = equal_degree_split(&g, d, f);
                for fac in facs {
                    while rest.rem(&fac, f).is_zero() {
                        rest = rest.exact_div(&fac, f);
                    }
                    found.push(fac);
                }
            }
            d += 1;
        }
        found.sort_by(|a, b| a.deg().cmp(&b.deg()).then(a.c.cmp(&b.c)));
        found
    }

    pub fn to_string_in(&self, f: &Field, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let coef = f.fmt_elem(a);
            let coef = if coef.contains('+') {
                format!("({coef})")
            } else {
                coef
            };
            let term = match i {
                0 => coef,
                1 if a == 1 => var.to_string(),
                1 => format!("{coef}*{var}"),
                _ if a == 1 => format!("{var}^{i}"),
                _ => format!("{coef}*{var}^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

fn split_linear(g: &Poly, f: &Field, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
    let d = g.deg().unwrap_or(0);
    if d == 0 {
        return;
    }
    if d == 1 {
        out.push(f.neg(f.div(g.coeff(0), g.coeff(1))));
        return;
    }
    if f.order() <= 64 {
        for a in f.elements() {
            if g.eval(a, f) == 0 {
                out.push(a);
            }
        }
        return;
    }
    loop {
        let a = f.random(rng);
        let h = if f.p() == 2 {
            // absolute trace of a*x
            let ax = Poly::new(vec![0, a]).rem(g, f);
            let mut s = Poly::zero();
            let mut cur = ax;
            for _ in 0..f.degree() {
                s = s.add(&cur, f);
                cur = cur.mul(&cur, f).rem(g, f);
            }
            s
        } else {
            Poly::new(vec![a, 1])
                .pow_mod((f.order() - 1) / 2, g, f)
                .sub(&Poly::one(), f)
        };
        let c = g.gcd(&h, f);
        let dc = c.deg().unwrap_or(0);
        if dc > 0 && dc < d {
            let other = g.exact_div(&c, f).monic(f);
            split_linear(&c, f, rng, out);
            split_linear(&other, f, rng, out);
            return;
        }
    }
}

/// Split a product of distinct monic irreducibles of degree `d` over `f`.
fn equal_degree_split(g: &Poly, d: u32, f: &FieldRef) -> Vec<Poly> {
    if g.deg() == Some(d as usize) {
        return vec![g.monic(f)];
    }
    let big = crate::field::extension(f, d).expect("extension field");
    let emb = Embedding::new(f, &big).expect("embedding");
    let lookup: std::collections::HashMap<Elem, Elem> =
        f.elements().map(|a| (emb.map(a), a)).collect();
    let mut roots = g.embed(&emb).roots(&big);
    let q = f.order();
    let mut out = Vec::new();
    while let Some(alpha) = roots.first().copied() {
        let mut orbit = vec![alpha];
        let mut cur = big.pow(alpha, q);
        while cur != alpha {
            orbit.push(cur);
            cur = big.pow(cur, q);
        }
        roots.retain(|r| !orbit.contains(r));
        let mut m = Poly::one();
        for &r in &orbit {
            m = m.mul(&Poly::new(vec![big.neg(r), 1]), &big);
        }
        out.push(m.map(|a| lookup[&a]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn divrem_and_gcd() {
        let f = Field::prime(5).unwrap();
        let a = Poly::new(vec![1, 0, 1]); // x^2+1 = (x-2)(x-3)
        let b = Poly::new(vec![3, 1]); // x+3 = x-2
        let (q, r) = a.divrem(&b, &f);
        assert!(r.is_zero());
        assert_eq!(q.mul(&b, &f), a);
        assert_eq!(a.gcd(&b, &f), b);
        assert_eq!(a.roots(&f), vec![2, 3]);
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let f = Field::prime(3).unwrap();
        let a = Poly::new(vec![1, 0, 1, 0, 1, 0, 0, 0, 0, 1]);
        let s = a.taylor_shift(2, &f);
        for u in 0..3 {
            assert_eq!(s.eval(u, &f), a.eval(f.add(2, u), &f));
        }
    }

    #[test]
    fn factor_over_f3() {
        let f = Field::prime(3).unwrap();
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let a = Poly::new(vec![2, 0, 0, 0, 1]);
        let facs = a.irreducible_factors(&f);
        assert_eq!(facs.len(), 3);
        assert_eq!(facs[2], Poly::new(vec![1, 0, 1]));
        let x15 = Poly::monomial(1, 15);
        assert_eq!(x15.irreducible_factors(&f), vec![Poly::x()]);
    }

    #[test]
    fn roots_in_large_field() {
        let f = Field::new(3, 6).unwrap();
        let m = Poly::new(vec![1, 0, 1]);
        let rs = m.roots(&f);
        assert_eq!(rs.len(), 2);
        for r in rs {
            assert_eq!(m.eval(r, &f), 0);
        }
    }
}
