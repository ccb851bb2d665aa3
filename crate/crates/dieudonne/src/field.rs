//! Finite fields F_{p^r} with a deterministic modulus.
//!
//! Elements are packed as integers `sum c_i p^i` over the coefficient vector of
//! the polynomial basis `1, t, ..., t^{r-1}`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Packed field element.
pub type Elem = u64;

/// The data identifying a field: characteristic, degree and modulus
/// (coefficients in ascending degree, monic of length `r + 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u64>,
}

const ADD_TABLE_MAX: u64 = 256;
const LOG_TABLE_MAX: u64 = 1 << 20;

struct Tables {
    log: Vec<u32>,
    exp: Vec<u64>,
    add: Option<Vec<u32>>,
}

/// Arithmetic context for F_{p^r}.
pub struct Field {
    spec: FieldSpec,
    q: u64,
    pows: Vec<u64>,
    tables: Option<Tables>,
}

pub type FieldRef = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.spec.p, self.spec.r)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, ascending coefficients, used for the modulus.
mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let c = a[a.len() - 1] * lead_inv % p;
            let shift = a.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - c * mi % p) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// x^(p^k) mod m.
    pub fn x_pow_p_k(m: &[u64], p: u64, k: u32) -> Vec<u64> {
        let mut cur = rem(&[0, 1], m, p);
        for _ in 0..k {
            let mut r = vec![1u64];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    r = rem(&mul(&r, &base, p), m, p);
                }
                base = rem(&mul(&base, &base, p), m, p);
                e >>= 1;
            }
            cur = r;
        }
        cur
    }

    /// Rabin's irreducibility test for a monic polynomial over F_p.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = (m.len() - 1) as u32;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let xq = x_pow_p_k(m, p, n);
        if sub(&xq, &[0, 1], p).iter().any(|&c| c != 0) {
            return false;
        }
        for q in super::prime_factors(n as u64) {
            let h = x_pow_p_k(m, p, n / q as u32);
            let d = sub(&h, &[0, 1], p);
            let g = gcd(m, &d, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FieldSpec {
    /// The lexicographically least monic irreducible of degree `r`, comparing
    /// the coefficient list `[c_0, ..., c_{r-1}]` from the constant term.
    pub fn least(p: u64, r: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Invalid("extension degree must be at least 1".into()));
        }
        if r == 1 {
            return Ok(FieldSpec {
                p,
                r,
                modulus: vec![0, 1],
            });
        }
        let count = p
            .checked_pow(r)
            .ok_or_else(|| Error::Invalid(format!("F_{p}^{r} is too large")))?;
        for idx in 0..count {
            // lexicographic from c_0 means c_0 is the most significant digit
            let mut coeffs = vec![0u64; r as usize + 1];
            let mut t = idx;
            for i in (0..r as usize).rev() {
                coeffs[i] = t % p;
                t /= p;
            }
            coeffs[r as usize] = 1;
            if coeffs[0] != 0 && fp_poly::is_irreducible(&coeffs, p) {
                return Ok(FieldSpec {
                    p,
                    r,
                    modulus: coeffs,
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.r)
    }
}

impl Field {
    pub fn new(p: u64, r: u32) -> Result<FieldRef> {
        Field::from_spec(FieldSpec::least(p, r)?)
    }

    pub fn prime(p: u64) -> Result<FieldRef> {
        Field::new(p, 1)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<FieldRef> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if spec.modulus.len() != spec.r as usize + 1 || spec.modulus.last() != Some(&1) {
            return Err(Error::Invalid("modulus must be monic of degree r".into()));
        }
        if spec.modulus.iter().any(|&c| c >= p) {
            return Err(Error::Invalid(
                "modulus coefficients must lie in 0..p".into(),
            ));
        }
        if !fp_poly::is_irreducible(&spec.modulus, p) {
            return Err(Error::Invalid(format!(
                "modulus {:?} is reducible",
                spec.modulus
            )));
        }
        let q = p
            .checked_pow(spec.r)
            .filter(|q| *q < (1u64 << 62))
            .ok_or_else(|| Error::Invalid("field too large".into()))?;
        let pows = (0..=spec.r).map(|i| p.pow(i)).collect();
        let mut field = Field {
            spec,
            q,
            pows,
            tables: None,
        };
        if field.spec.r > 1 && q <= LOG_TABLE_MAX {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let order = q - 1;
        let factors = prime_factors(order);
        let mut g = 2;
        loop {
            let ok = factors.iter().all(|&l| self.pow_slow(g, order / l) != 1);
            if ok {
                break;
            }
            g += 1;
        }
        let mut exp = vec![0u64; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        let add = (q <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_slow(a, b) as u32;
                }
            }
            t
        });
        Tables { log, exp, add }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.r
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer under Z -> F_p.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.spec.p as i64) as u64
    }

    /// The generator `t` of the polynomial basis.
    pub fn gen(&self) -> Elem {
        if self.spec.r == 1 {
            (self.spec.p - self.spec.modulus[0]) % self.spec.p
        } else {
            self.spec.p
        }
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        let p = self.spec.p;
        let mut a = a;
        (0..self.spec.r)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Elem {
        let p = self.spec.p;
        let reduced = if c.len() > self.spec.r as usize {
            fp_poly::rem(c, &self.spec.modulus, p)
        } else {
            c.to_vec()
        };
        reduced
            .iter()
            .enumerate()
            .map(|(i, &x)| (x % p) * self.pows[i])
            .sum()
    }

    pub fn is_in_prime_field(&self, a: Elem) -> bool {
        a < self.spec.p
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.spec.r as usize {
            out += ((a % p + b % p) % p) * self.pows[i];
            a /= p;
            b /= p;
        }
        out
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        let mut a = a;
        let mut out = 0;
        for i in 0..self.spec.r as usize {
            out += ((p - a % p) % p) * self.pows[i];
            a /= p;
        }
        out
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let prod = fp_poly::mul(&self.coeffs(a), &self.coeffs(b), self.spec.p);
        self.from_coeffs(&fp_poly::rem(&prod, &self.spec.modulus, self.spec.p))
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.r == 1 {
            let s = a + b;
            return if s >= self.spec.p { s - self.spec.p } else { s };
        }
        if let Some(Tables { add: Some(t), .. }) = &self.tables {
            return t[(a * self.q + b) as usize] as u64;
        }
        self.add_slow(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.spec.r == 1 {
            return if a == 0 { 0 } else { self.spec.p - a };
        }
        self.neg_slow(a)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.spec.r == 1 {
            return a * b % self.spec.p;
        }
        if let Some(t) = &self.tables {
            let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
            return t.exp[(s % (self.q - 1)) as usize];
        }
        self.mul_slow(a, b)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        if self.spec.r == 1 {
            return fp_poly::inv_mod(a, self.spec.p);
        }
        if let Some(t) = &self.tables {
            let l = t.log[a as usize] as u64;
            return t.exp[((self.q - 1 - l) % (self.q - 1)) as usize];
        }
        self.pow_slow(a, self.q - 2)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.spec.r == 1 {
            return fp_poly::pow_mod(a, e, self.spec.p);
        }
        if let Some(t) = &self.tables {
            let l = t.log[a as usize] as u128;
            let s = (l * e as u128) % (self.q as u128 - 1);
            return t.exp[s as usize];
        }
        self.pow_slow(a, e)
    }

    /// Integer power allowing negative exponents for nonzero `a`.
    pub fn powi(&self, a: Elem, e: i64) -> Elem {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            self.pow(self.inv(a), e.unsigned_abs())
        }
    }

    /// `a^(p^e)`; negative `e` takes `p^|e|`-th roots.
    pub fn frob(&self, a: Elem, e: i64) -> Elem {
        let r = self.spec.r as i64;
        let e = e.rem_euclid(r) as u32;
        if e == 0 || a < self.spec.p {
            return a;
        }
        self.pow(a, self.spec.p.pow(e))
    }

    /// Square root if one exists in this field (p odd).
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return Some(0);
        }
        let q = self.q;
        if q.is_multiple_of(2) {
            return Some(self.pow(a, q / 2));
        }
        if self.pow(a, (q - 1) / 2) != 1 {
            return None;
        }
        // Tonelli-Shanks
        let mut s = 0;
        let mut odd = q - 1;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.pow(z, (q - 1) / 2) == 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.q.is_multiple_of(2) || self.pow(a, (self.q - 1) / 2) == 1
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.q)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: Elem) -> Elem {
        let mut s = 0;
        let mut cur = a;
        for _ in 0..self.spec.r {
            s = self.add(s, cur);
            cur = self.frob(cur, 1);
        }
        s
    }

    pub fn fmt_elem(&self, a: Elem) -> String {
        if self.spec.r == 1 {
            return a.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| match (i, x) {
                (0, _) => x.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{x}*t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{x}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Roots in `field` of a polynomial given by ascending coefficients.
pub fn roots(field: &Field, poly: &[Elem]) -> Vec<Elem> {
    crate::poly::Poly::new(poly.to_vec()).roots(field)
}

/// The deterministic embedding F_{p^r} -> F_{p^{rs}}: the generator maps to the
/// least root of the small modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: FieldRef,
    pub big: FieldRef,
    image_of_gen: Elem,
    basis_images: Vec<Elem>,
}

impl Embedding {
    pub fn new(small: &FieldRef, big: &FieldRef) -> Result<Embedding> {
        if small.p() != big.p() || !big.degree().is_multiple_of(small.degree()) {
            return Err(Error::Invalid(format!("no embedding {small:?} -> {big:?}")));
        }
        let modulus: Vec<Elem> = small.spec().modulus.clone();
        let mut rs = roots(big, &modulus);
        rs.sort_unstable();
        let image_of_gen = *rs
            .first()
            .ok_or_else(|| Error::Invalid("small modulus has no root in the big field".into()))?;
        let mut basis_images = Vec::with_capacity(small.degree() as usize);
        let mut cur = big.one();
        for _ in 0..small.degree() {
            basis_images.push(cur);
            cur = big.mul(cur, image_of_gen);
        }
        Ok(Embedding {
            small: small.clone(),
            big: big.clone(),
            image_of_gen,
            basis_images,
        })
    }

    pub fn image_of_gen(&self) -> Elem {
        self.image_of_gen
    }

    pub fn map(&self, a: Elem) -> Elem {
        if a < self.small.p() {
            return a;
        }
        let c = self.small.coeffs(a);
        let mut out = 0;
        for (ci, &bi) in c.iter().zip(&self.basis_images) {
            if *ci != 0 {
                out = self.big.add(out, self.big.mul(*ci, bi));
            }
        }
        out
    }
}

/// Field of degree `r * s` over the same prime.
pub fn extension(field: &FieldRef, s: u32) -> Result<FieldRef> {
    if s == 1 {
        return Ok(field.clone());
    }
    Field::new(field.p(), field.degree() * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f9_modulus_and_frobenius() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.spec().modulus, vec![1, 0, 1]);
        let t = f.gen();
        assert_eq!(f.frob(t, 1), f.neg(t));
        assert_eq!(f.mul(t, t), f.from_int(-1));
    }

    #[test]
    fn frobenius_is_automorphism() {
        let f = Field::new(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.frob(f.mul(a, b), 1), f.mul(f.frob(a, 1), f.frob(b, 1)));
            assert_eq!(f.frob(f.frob(a, 1), -1), a);
            assert_eq!(f.pow(a, 27), a);
        }
    }

    #[test]
    fn slow_paths_agree_with_tables() {
        let f = Field::new(5, 3).unwrap();
        for a in (0..125).step_by(7) {
            for b in (0..125).step_by(11) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add_slow(a, b));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(3, 14).unwrap();
        assert!(f.tables.is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = f.random(&mut rng);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        let spec = FieldSpec {
            p: 3,
            r: 2,
            modulus: vec![2, 0, 1],
        };
        assert!(Field::from_spec(spec).is_err());
        assert!(Field::new(4, 1).is_err());
    }

    #[test]
    fn sqrt_roundtrip() {
        for (p, r) in [(3, 1), (3, 2), (5, 2), (7, 1), (3, 4)] {
            let f = Field::new(p, r).unwrap();
            for a in f.elements() {
                if let Some(s) = f.sqrt(a) {
                    assert_eq!(f.mul(s, s), a);
                } else {
                    assert!(!f.is_square(a));
                }
            }
        }
    }

    #[test]
    fn embedding_is_ring_map() {
        let small = Field::new(3, 2).unwrap();
        let big = Field::new(3, 4).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.map(small.mul(a, b)), big.mul(e.map(a), e.map(b)));
                assert_eq!(e.map(small.add(a, b)), big.add(e.map(a), e.map(b)));
            }
        }
    }
}
