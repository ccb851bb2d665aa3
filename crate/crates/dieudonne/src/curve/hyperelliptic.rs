//! Hyperelliptic curves `y^2 = f(x)` over a prime field with odd `p`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::semilinear::{fixed_points, SemilinearMap};

use super::expr::parse_poly;

#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    pub k: FieldRef,
    pub f: Poly,
    pub genus: usize,
}

/// Invariants of `X` read off the Cartier-Manin matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSummary {
    pub p: u64,
    pub f: String,
    pub genus: usize,
    pub p_rank: usize,
    pub a_number: usize,
    pub nu: usize,
}

impl HyperellipticCurve {
    pub fn new(k: &FieldRef, f: Poly) -> Result<HyperellipticCurve> {
        if k.p() == 2 {
            return Err(Error::Invalid(
                "hyperelliptic models y^2 = f need p odd".into(),
            ));
        }
        if k.degree() != 1 {
            return Err(Error::Invalid(
                "curves are defined over the prime field".into(),
            ));
        }
        let d = f.deg().unwrap_or(0);
        if d < 3 {
            return Err(Error::Invalid(format!("deg f = {d} gives genus 0")));
        }
        if !f.gcd(&f.derivative(k), k).is_constant() {
            return Err(Error::Invalid("f is not squarefree".into()));
        }
        Ok(HyperellipticCurve {
            k: k.clone(),
            f,
            genus: (d - 1) / 2,
        })
    }

    pub fn parse(p: u64, f: &str) -> Result<HyperellipticCurve> {
        let k = Field::prime(p)?;
        let f = parse_poly(f, &k)?;
        HyperellipticCurve::new(&k, f)
    }

    pub fn p(&self) -> u64 {
        self.k.p()
    }

    /// `deg f` is even: two points at infinity (possibly conjugate).
    pub fn even_degree(&self) -> bool {
        self.f.deg().unwrap_or(0).is_multiple_of(2)
    }

    fn power_coeffs(&self) -> Poly {
        self.f.pow((self.p() - 1) / 2, &self.k)
    }

    /// Cartier operator on `x^(i-1) dx/y`, `i = 1..g`: column `j` holds
    /// `C(x^(j-1) dx/y)`, entries `c_(ip-j)` of `f^((p-1)/2)`.
    pub fn cartier_manin(&self) -> SemilinearMap {
        let g = self.genus;
        let p = self.p() as usize;
        let h = self.power_coeffs();
        let mut w = Matrix::zeros(&self.k, g, g);
        for i in 1..=g {
            for j in 1..=g {
                if i * p >= j {
                    w.set(i - 1, j - 1, h.coeff(i * p - j));
                }
            }
        }
        SemilinearMap::new(w, -1)
    }

    /// Frobenius on `H^1(O)` in the basis dual to `x^(i-1) dx/y`.
    pub fn hasse_witt(&self) -> SemilinearMap {
        let c = self.cartier_manin();
        SemilinearMap::new(c.matrix.frob(1).transpose(), 1)
    }

    pub fn p_rank(&self) -> usize {
        let g = self.genus as u32;
        self.hasse_witt().pow(g.max(1)).rank()
    }

    pub fn a_number(&self) -> usize {
        self.genus - self.cartier_manin().rank()
    }

    /// Dimension over `F_p` of the Frobenius-fixed vectors of `H^1(O)`.
    pub fn nu(&self) -> usize {
        fixed_points(&self.hasse_witt()).len()
    }

    pub fn summary(&self) -> CurveSummary {
        CurveSummary {
            p: self.p(),
            f: self.f.to_string_in(&self.k, "x"),
            genus: self.genus,
            p_rank: self.p_rank(),
            a_number: self.a_number(),
            nu: self.nu(),
        }
    }

    /// Number of points over `F_(p^r)` of the smooth model, by enumeration.
    pub fn count_points(&self, r: u32) -> Result<u64> {
        let kk = Field::new(self.p(), r)?;
        let mut n = 0;
        for x in kk.elements() {
            let v = self.f.eval(x, &kk);
            n += if v == 0 {
                1
            } else if kk.is_square(v) {
                2
            } else {
                0
            };
        }
        let d = self.f.deg().unwrap();
        n += if d % 2 == 1 {
            1
        } else if kk.is_square(self.f.lead()) {
            2
        } else {
            0
        };
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supersingular_elliptic_curve() {
        let e = HyperellipticCurve::parse(3, "x^3 + x").unwrap();
        // trace zero over F_3 and F_9 means supersingular
        assert_eq!(e.count_points(1).unwrap(), 4);
        assert_eq!(e.count_points(2).unwrap(), 16);
        assert!(e.cartier_manin().matrix.is_zero());
        assert_eq!(e.a_number(), 1);
        assert_eq!(e.p_rank(), 0);
    }

    #[test]
    fn degree_nine_curve() {
        let x = HyperellipticCurve::parse(3, "x^9 + x^4 + x^2 + 1").unwrap();
        assert_eq!(x.genus, 4);
        assert_eq!(x.p_rank(), 2);
        assert_eq!(x.nu(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(HyperellipticCurve::parse(3, "x^2 + 1").is_err());
        assert!(HyperellipticCurve::parse(3, "(x+1)^2 (x^3 + x + 1)").is_err());
        assert!(HyperellipticCurve::parse(2, "x^5 + x + 1").is_err());
    }
}
