//! Truncated Laurent series `sum_{i >= v} c_i t^i + O(t^prec)`.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

/// Stored coefficients of `t^v, t^(v+1), ...`; coefficients past the
/// stored ones are zero up to `t^prec`, where knowledge ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub v: i64,
    pub c: Vec<Elem>,
    pub prec: i64,
}

/// Precision used for exact (polynomial) data.
pub const EXACT: i64 = i64::MAX / 8;

/// Precisions this large mean "no truncation".
fn exact(prec: i64) -> bool {
    prec >= EXACT / 2
}

fn clamp(prec: i64) -> i64 {
    if exact(prec) {
        EXACT
    } else {
        prec
    }
}

impl Series {
    /// `O(t^prec)`.
    pub fn zero(prec: i64) -> Series {
        Series {
            v: prec.min(0),
            c: Vec::new(),
            prec,
        }
    }

    pub fn constant(a: Elem, prec: i64) -> Series {
        Series::monomial(a, 0, prec)
    }

    /// `a t^n + O(t^prec)`.
    pub fn monomial(a: Elem, n: i64, prec: i64) -> Series {
        if n >= prec {
            return Series::zero(prec);
        }
        Series {
            v: n,
            c: vec![a],
            prec,
        }
    }

    /// Coefficients `c` starting at `t^v`, known exactly up to the last one.
    pub fn from_coeffs(v: i64, c: Vec<Elem>) -> Series {
        let prec = v + c.len() as i64;
        Series { v, c, prec }
    }

    pub fn from_poly(p: &Poly, prec: i64) -> Series {
        Series {
            v: 0,
            c: p.coeffs().to_vec(),
            prec,
        }
        .truncate(prec)
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `t^n`, `None` beyond the precision.
    pub fn coeff(&self, n: i64) -> Option<Elem> {
        if n >= self.prec {
            None
        } else if n < self.v || n >= self.v + self.c.len() as i64 {
            Some(0)
        } else {
            Some(self.c[(n - self.v) as usize])
        }
    }

    /// Coefficient of `t^n`; panics beyond the precision.
    pub fn at(&self, n: i64) -> Elem {
        self.coeff(n)
            .unwrap_or_else(|| panic!("coefficient t^{n} beyond precision {}", self.prec))
    }

    /// First exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.c
            .iter()
            .position(|&x| x != 0)
            .map(|i| self.v + i as i64)
    }

    pub fn normalized(&self) -> Series {
        match self.c.iter().position(|&x| x != 0) {
            Some(i) => {
                let end = self.c.iter().rposition(|&x| x != 0).unwrap() + 1;
                Series {
                    v: self.v + i as i64,
                    c: self.c[i..end].to_vec(),
                    prec: self.prec,
                }
            }
            None => Series::zero(self.prec),
        }
    }

    pub fn truncate(&self, prec: i64) -> Series {
        let prec = prec.min(self.prec);
        let keep = (prec - self.v).clamp(0, self.c.len() as i64) as usize;
        Series {
            v: self.v.min(prec),
            c: self.c[..keep].to_vec(),
            prec,
        }
    }

    fn end(&self) -> i64 {
        self.v + self.c.len() as i64
    }

    pub fn add(&self, o: &Series, k: &Field) -> Series {
        let prec = self.prec.min(o.prec);
        let v = self.v.min(o.v).min(prec);
        let end = self.end().max(o.end()).min(prec).max(v);
        let c = (v..end).map(|n| k.add(self.at(n), o.at(n))).collect();
        Series { v, c, prec }
    }

    pub fn sub(&self, o: &Series, k: &Field) -> Series {
        self.add(&o.neg(k), k)
    }

    pub fn neg(&self, k: &Field) -> Series {
        self.map(|x| k.neg(x))
    }

    pub fn scale(&self, a: Elem, k: &Field) -> Series {
        self.map(|x| k.mul(a, x))
    }

    /// Multiply by `t^n`.
    pub fn shift(&self, n: i64) -> Series {
        let prec = if exact(self.prec) {
            self.prec
        } else {
            self.prec + n
        };
        Series {
            v: self.v + n,
            c: self.c.clone(),
            prec,
        }
    }

    pub fn mul(&self, o: &Series, k: &Field) -> Series {
        let a = self.normalized();
        let b = o.normalized();
        let va = a.valuation().unwrap_or(a.prec);
        let vb = b.valuation().unwrap_or(b.prec);
        let prec = clamp(va.saturating_add(b.prec).min(vb.saturating_add(a.prec)));
        if a.c.is_empty() || b.c.is_empty() {
            return Series::zero(prec);
        }
        let v = va + vb;
        let end = (a.end() + b.end() - 1).min(prec);
        if end <= v {
            return Series::zero(prec);
        }
        let len = (end - v) as usize;
        let mut c = vec![0; len];
        for (i, &x) in a.c.iter().enumerate().take(len) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate().take(len - i) {
                if y != 0 {
                    c[i + j] = k.add(c[i + j], k.mul(x, y));
                }
            }
        }
        Series { v, c, prec }
    }

    /// Inverse; the relative precision is preserved (capped for exact input).
    pub fn inv(&self, k: &Field) -> Result<Series> {
        self.inv_to(k, 64)
    }

    /// Inverse with relative precision at most `rel` for exact input.
    pub fn inv_to(&self, k: &Field, rel: i64) -> Result<Series> {
        let a = self.normalized();
        let va = a.valuation().ok_or_else(|| {
            Error::Invariant("inverting a series with unknown leading term".into())
        })?;
        let rel_prec = if exact(a.prec) { rel } else { a.prec - va };
        let n = rel_prec.max(1) as usize;
        let l = k.inv(a.c[0]);
        let mut c = vec![0; n];
        c[0] = l;
        for i in 1..n {
            let mut s = 0;
            for j in 1..=i.min(a.c.len() - 1) {
                s = k.add(s, k.mul(a.c[j], c[i - j]));
            }
            c[i] = k.neg(k.mul(l, s));
        }
        Ok(Series {
            v: -va,
            c,
            prec: -va + n as i64,
        })
    }

    pub fn pow(&self, e: u64, k: &Field) -> Series {
        let mut out = Series::constant(1, EXACT);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base, k);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, k);
            }
        }
        out
    }

    /// `f^p`, exact in characteristic `p`.
    pub fn frobenius(&self, k: &Field) -> Series {
        let p = k.p() as i64;
        let mut c = vec![0; (self.c.len() as i64 * p - p + 1).max(0) as usize];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * p as usize] = k.frob(x, 1);
        }
        let prec = if exact(self.prec) {
            EXACT
        } else {
            self.prec * p
        };
        Series {
            v: self.v * p,
            c,
            prec,
        }
    }

    /// `d/dt`.
    pub fn derivative(&self, k: &Field) -> Series {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, &x)| k.mul(k.from_int(self.v + i as i64), x))
            .collect();
        let prec = if exact(self.prec) {
            EXACT
        } else {
            self.prec - 1
        };
        Series {
            v: self.v - 1,
            c,
            prec,
        }
    }

    /// Cartier operator on `f dt`: `sum c_{pj+p-1}^{1/p} t^j`.
    pub fn cartier(&self, k: &Field) -> Series {
        let p = k.p() as i64;
        let lo = (self.v + 1).div_euclid(p) - 1 + i64::from((self.v + 1).rem_euclid(p) != 0);
        let prec = if exact(self.prec) {
            EXACT
        } else {
            self.prec.div_euclid(p)
        };
        let end = (self.end() + 1).div_euclid(p) + 1;
        let end = end.min(prec);
        if end <= lo {
            return Series::zero(prec);
        }
        let c = (lo..end)
            .map(|j| k.frob(self.at(p * j + p - 1), -1))
            .collect();
        Series { v: lo, c, prec }
    }

    pub fn residue(&self) -> Elem {
        self.at(-1)
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Series {
        Series {
            v: self.v,
            c: self.c.iter().map(|&x| f(x)).collect(),
            prec: self.prec,
        }
    }

    /// `P(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly, k: &Field) -> Series {
        let mut acc = Series::zero(EXACT);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self, k).add(&Series::constant(c, EXACT), k);
        }
        acc
    }

    /// Square root of a series with constant term `b^2`, choosing
    /// constant term `b`.
    pub fn sqrt_unit(&self, b: Elem, k: &Field) -> Result<Series> {
        if self.valuation() != Some(0) || self.v != 0 || b == 0 || k.mul(b, b) != self.c[0] {
            return Err(Error::Invalid(
                "sqrt needs a unit series with the given constant term".into(),
            ));
        }
        let n = if exact(self.prec) {
            64
        } else {
            self.prec as usize
        };
        let inv2b = k.inv(k.add(b, b));
        let mut c = vec![0; n];
        c[0] = b;
        for i in 1..n {
            let mut s = self.at(i as i64);
            for j in 1..i {
                s = k.sub(s, k.mul(c[j], c[i - j]));
            }
            c[i] = k.mul(s, inv2b);
        }
        Ok(Series {
            v: 0,
            c,
            prec: n as i64,
        })
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn inverse_and_product() {
        let k = Field::new(3, 2).unwrap();
        let a = Series::from_coeffs(-2, vec![1, 2, 0, 1, 1, 2, 0, 0]);
        let b = a.inv(&k).unwrap();
        let one = a.mul(&b, &k);
        assert_eq!(one.valuation(), Some(0));
        assert!((1..one.prec()).all(|n| one.at(n) == 0));
        assert_eq!(one.prec(), 8);
    }

    #[test]
    fn cartier_of_basic_forms() {
        let k = Field::prime(5).unwrap();
        // C(t^-1 dt) = t^-1 dt, C(t^4 dt) = dt, C(t^-2 dt) = 0
        let s = Series::from_coeffs(-2, vec![0, 1, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0]);
        assert_eq!(s.prec(), 10);
        let c = s.cartier(&k);
        assert_eq!(c.at(-1), 1);
        assert_eq!(c.at(0), 3);
        assert_eq!(c.at(1), 0);
        assert_eq!(c.prec(), 2);
    }

    #[test]
    fn frobenius_and_derivative() {
        let k = Field::prime(3).unwrap();
        let s = Series::from_coeffs(-1, vec![1, 1, 2]);
        let f = s.frobenius(&k);
        assert_eq!((f.v, f.prec()), (-3, 6));
        assert!(f.derivative(&k).is_zero_to_prec());
        let d = s.derivative(&k);
        assert_eq!((d.at(-2), d.at(-1), d.at(0)), (2, 0, 2));
    }

    #[test]
    fn square_root() {
        let k = Field::prime(7).unwrap();
        let a = Series::from_coeffs(0, vec![2, 1, 5, 0, 3, 1]);
        let r = a.sqrt_unit(3, &k).unwrap();
        assert_eq!(r.mul(&r, &k).normalized(), a.normalized());
    }
}
