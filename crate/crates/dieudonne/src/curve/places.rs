//! Special places of `X` and of an Artin-Schreier cover `Y`, with local
//! expansions of `x`, `y`, `z` in a uniformizer.
//!
//! Expansions are computed over an extension `k'` of the prime field large
//! enough that every special place is rational; Galois conjugation permutes
//! the places and acts on coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldRef};
use crate::poly::Poly;

use super::expr::FnElem;
use super::hyperelliptic::HyperellipticCurve;
use super::series::{Series, EXACT};

/// Largest extension degree tried for the field of definition of places.
const MAX_DEGREE: u32 = 12;

/// A geometric point of `X` over `D(x) = 0` or at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoint {
    pub infinity: bool,
    pub alpha: Elem,
    /// Value of `y` (finite) or of `y / x^(g+1)` (infinity).
    pub beta: Elem,
    pub ramified: bool,
}

/// A point of the curve being studied (`X` itself or `Y`).
#[derive(Clone, Debug)]
pub struct Place {
    pub base: usize,
    pub sheet: usize,
    /// Constant term of `z`, zero without a cover.
    pub zc: Elem,
}

/// `x` and `y` at a base place, with the reduced `g` and the regular part of `z` when there is a cover.
type BaseSeries = (Series, Series, Option<(Series, Series)>);

/// Local series at one place.
#[derive(Clone, Debug)]
pub struct Local {
    pub x: Series,
    pub y: Series,
    pub z: Series,
    pub inv_d: Series,
    pub dx_over_y: Series,
}

/// Record of the local Artin-Schreier reduction at one point of `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceCertificate {
    pub place: String,
    pub pole_order: i64,
    pub substitution: String,
    pub constant: String,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub curve: HyperellipticCurve,
    pub cover: Option<FnElem>,
    pub kk: FieldRef,
    /// Squarefree polynomial over `k` whose zeros are the finite special points.
    pub d: Poly,
    pub base: Vec<BasePoint>,
    pub places: Vec<Place>,
    pub marked: Vec<bool>,
    pub certificates: Vec<PlaceCertificate>,
    /// Largest pole order of `g` at a special place.
    pub pole: i64,
}

fn lcm(a: u32, b: u32) -> u32 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Product of the distinct irreducible factors.
fn radical(p: &Poly, k: &FieldRef) -> Poly {
    if p.deg().unwrap_or(0) == 0 {
        return Poly::one();
    }
    p.irreducible_factors(k)
        .iter()
        .fold(Poly::one(), |acc, q| acc.mul(q, k))
}

/// Iterated reduction at a place: returns the polar correction `h` (with
/// `g - (h^p - h)` regular) and the regular remainder.
pub fn as_reduce(g: &Series, kk: &Field) -> std::result::Result<(Series, Series), i64> {
    let p = kk.p() as i64;
    let mut rest = g.normalized();
    let mut h = Series::zero(EXACT);
    while let Some(v) = rest.valuation().filter(|&v| v < 0) {
        let m = -v;
        if m % p != 0 {
            return Err(m);
        }
        let b = kk.frob(rest.at(v), -1);
        let corr = Series::monomial(b, -m / p, EXACT);
        h = h.add(&corr, kk);
        rest = rest
            .sub(&corr.frobenius(kk).sub(&corr, kk), kk)
            .normalized();
    }
    Ok((h.normalized(), rest))
}

/// Solution `u` with `u(0) = 0` of `u^p - u = s` for `s(0) = 0`.
pub fn as_regular_root(s: &Series, kk: &Field) -> Series {
    let mut u = s.neg(kk);
    for _ in 0..64 {
        let next = u.frobenius(kk).sub(s, kk).truncate(s.prec());
        if next.normalized() == u.normalized() {
            break;
        }
        u = next;
    }
    u
}

fn laurent_string(s: &Series, kk: &Field) -> String {
    let s = s.normalized();
    let terms: Vec<String> =
        s.c.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| format!("({})*t^{}", kk.fmt_elem(c), s.v + i as i64))
            .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl Tower {
    /// `X` alone (no cover), optionally with a marked rational point.
    pub fn base_curve(curve: &HyperellipticCurve) -> Result<Tower> {
        Tower::new(curve, None, None)
    }

    pub fn new(
        curve: &HyperellipticCurve,
        cover: Option<&FnElem>,
        marked: Option<(Elem, Elem)>,
    ) -> Result<Tower> {
        let k = curve.k.clone();
        let p = k.p();
        let mut d = match cover {
            Some(g) => radical(&g.denominator(&k), &k),
            None => Poly::one(),
        };
        if let Some((x0, y0)) = marked {
            if k.mul(y0, y0) != curve.f.eval(x0, &k) {
                return Err(Error::Invalid(format!("({x0}, {y0}) is not on the curve")));
            }
            let lin = Poly::new(vec![k.neg(x0), 1]);
            if !d.rem(&lin, &k).is_zero() {
                d = d.mul(&lin, &k);
            }
        }
        let mut r = d
            .irreducible_factors(&k)
            .iter()
            .fold(1, |acc, q| lcm(acc, q.deg().unwrap() as u32));
        loop {
            if r > MAX_DEGREE {
                return Err(Error::Bound(format!(
                    "special places need an extension of degree {r}"
                )));
            }
            let kk = Field::new(p, r)?;
            let Some(base) = base_points(curve, &d, &kk) else {
                r *= 2;
                continue;
            };
            let mut tower = Tower {
                curve: curve.clone(),
                cover: cover.cloned(),
                kk: kk.clone(),
                d: d.clone(),
                base,
                places: Vec::new(),
                marked: Vec::new(),
                certificates: Vec::new(),
                pole: 0,
            };
            match tower.build_places(marked)? {
                true => return Ok(tower),
                false => r *= p as u32,
            }
        }
    }

    pub fn sheets(&self) -> usize {
        if self.cover.is_some() {
            self.curve.p() as usize
        } else {
            1
        }
    }

    pub fn genus(&self) -> usize {
        let g = self.curve.genus;
        match self.cover {
            Some(_) => self.sheets() * (g - 1) + 1,
            None => g,
        }
    }

    pub fn marked_degree(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    pub fn label(&self, b: usize) -> String {
        let bp = &self.base[b];
        let kk = &self.kk;
        if bp.infinity {
            format!(
                "infinity (y/x^{} = {})",
                self.curve.genus + 1,
                kk.fmt_elem(bp.beta)
            )
        } else {
            format!(
                "(x, y) = ({}, {})",
                kk.fmt_elem(bp.alpha),
                kk.fmt_elem(bp.beta)
            )
        }
    }

    /// Fills places and certificates; `false` when `k'` is too small for the
    /// Artin-Schreier constants.
    fn build_places(&mut self, marked: Option<(Elem, Elem)>) -> Result<bool> {
        let kk = self.kk.clone();
        let sheets = self.sheets();
        let mut places = Vec::new();
        let mut certs = Vec::new();
        for b in 0..self.base.len() {
            let mut zcs = vec![0];
            if let Some(g) = &self.cover {
                let (pole, h, rest) = self.reduce_at(g, b)?;
                self.pole = self.pole.max(pole);
                let c0 = rest.at(0);
                if kk.trace(c0) != 0 {
                    return Ok(false);
                }
                let w0 = as_constant_root(c0, &kk).expect("trace zero gives a root");
                zcs = (0..sheets)
                    .map(|i| kk.add(w0, kk.from_int(i as i64)))
                    .collect();
                certs.push(PlaceCertificate {
                    place: self.label(b),
                    pole_order: pole,
                    substitution: laurent_string(&h, &kk),
                    constant: kk.fmt_elem(c0),
                });
            }
            for (sheet, &zc) in zcs.iter().enumerate() {
                places.push(Place { base: b, sheet, zc });
            }
        }
        self.marked = places
            .iter()
            .map(|pl| {
                let bp = &self.base[pl.base];
                marked.is_some_and(|(x0, y0)| !bp.infinity && bp.alpha == x0 && bp.beta == y0)
            })
            .collect();
        self.places = places;
        self.certificates = certs;
        Ok(true)
    }

    /// Local reduction of `g` at base point `b`, raising the precision until
    /// the constant term of the remainder is known.
    fn reduce_at(&self, g: &FnElem, b: usize) -> Result<(i64, Series, Series)> {
        let kk = &self.kk;
        let mut rel = 24;
        loop {
            let (x, y) = self.base_series(b, rel)?;
            let gs = eval_fn(g, &x, &y, kk, rel)?;
            let pole = -gs.valuation().unwrap_or(0).min(0);
            let (h, rest) = as_reduce(&gs, kk).map_err(|m| {
                Error::Ramified(format!(
                    "{}: pole of order {m} prime to p after reduction",
                    self.label(b)
                ))
            })?;
            if rest.prec() > 8 {
                return Ok((pole, h, rest));
            }
            if rel > 1 << 12 {
                return Err(Error::Bound("local expansion precision".into()));
            }
            rel *= 2;
        }
    }

    /// Model polynomial `F(s)` of the chart containing base point `b`.
    fn chart_poly(&self, b: usize) -> Poly {
        let f = &self.curve.f;
        if !self.base[b].infinity {
            return f.clone();
        }
        let n = 2 * self.curve.genus + 2;
        Poly::new((0..=n).map(|i| f.coeff(n - i)).collect())
    }

    /// `x` and `y` at base point `b` with relative precision about `rel`.
    pub fn base_series(&self, b: usize, rel: i64) -> Result<(Series, Series)> {
        let kk = &self.kk;
        let bp = &self.base[b];
        let big_f = self.chart_poly(b);
        let shifted = big_f.taylor_shift(bp.alpha, kk);
        let (s, w) = if bp.ramified {
            let c1 = shifted.coeff(1);
            let higher = Poly::new(
                shifted
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| if i < 2 { 0 } else { c })
                    .collect(),
            );
            let prec = rel + 2;
            let t2 = Series::monomial(1, 2, prec);
            let ic1 = kk.inv(c1);
            let mut u = t2.scale(ic1, kk);
            for _ in 0..prec {
                let next = t2
                    .sub(&u.eval_poly(&higher, kk), kk)
                    .scale(ic1, kk)
                    .truncate(prec);
                if next.normalized() == u.normalized() {
                    break;
                }
                u = next;
            }
            (
                u.add(&Series::constant(bp.alpha, EXACT), kk),
                Series::monomial(1, 1, EXACT),
            )
        } else {
            let s = Series::from_coeffs(0, vec![bp.alpha, 1]);
            let s = Series { prec: EXACT, ..s };
            let w = Series::from_poly(&shifted, rel).sqrt_unit(bp.beta, kk)?;
            (s, w)
        };
        if !bp.infinity {
            return Ok((s, w));
        }
        let x = s.inv_to(kk, rel)?;
        let y = w.mul(&x.pow(self.curve.genus as u64 + 1, kk), kk);
        Ok((x, y))
    }

    /// Local series at every place with relative precision about `rel`.
    pub fn local_series(&self, rel: i64) -> Result<Vec<Local>> {
        let kk = &self.kk;
        let mut out = Vec::with_capacity(self.places.len());
        let mut cache: Vec<Option<BaseSeries>> = vec![None; self.base.len()];
        for pl in &self.places {
            if cache[pl.base].is_none() {
                let (x, y) = self.base_series(pl.base, rel + 2 * self.pole + 8)?;
                let red = match &self.cover {
                    Some(g) => {
                        let gs = eval_fn(g, &x, &y, kk, rel)?;
                        let (h, rest) = as_reduce(&gs, kk)
                            .map_err(|m| Error::Ramified(format!("pole of order {m}")))?;
                        let c0 = rest.at(0);
                        let u = as_regular_root(&rest.sub(&Series::constant(c0, EXACT), kk), kk);
                        Some((h, u))
                    }
                    None => None,
                };
                cache[pl.base] = Some((x, y, red));
            }
            let (x, y, red) = cache[pl.base].as_ref().unwrap();
            let z = match red {
                Some((h, u)) => h.add(&Series::constant(pl.zc, EXACT), kk).add(u, kk),
                None => Series::zero(EXACT),
            };
            let inv_d = x.eval_poly(&self.d, kk).inv_to(kk, rel)?;
            let dx_over_y = x.derivative(kk).mul(&y.inv_to(kk, rel)?, kk);
            out.push(Local {
                x: x.clone(),
                y: y.clone(),
                z,
                inv_d,
                dx_over_y,
            });
        }
        Ok(out)
    }

    /// Index of the place `sigma(Q)` for the `p`-power Frobenius of `k'`.
    pub fn galois_image(&self, q: usize) -> usize {
        let kk = &self.kk;
        let pl = &self.places[q];
        let bp = &self.base[pl.base];
        let target = BasePoint {
            infinity: bp.infinity,
            alpha: kk.frob(bp.alpha, 1),
            beta: kk.frob(bp.beta, 1),
            ramified: bp.ramified,
        };
        let zc = kk.frob(pl.zc, 1);
        self.places
            .iter()
            .position(|o| self.base[o.base] == target && o.zc == zc)
            .expect("special places are Galois stable")
    }

    /// Index of `gamma(Q)`, where `z(gamma Q) = z(Q) + 1`.
    pub fn gamma_image(&self, q: usize) -> usize {
        let kk = &self.kk;
        let pl = &self.places[q];
        let zc = kk.add(pl.zc, 1);
        self.places
            .iter()
            .position(|o| o.base == pl.base && o.zc == zc)
            .expect("fibers are gamma stable")
    }
}

/// Root of `w^p - w = c`, the least one in packed order.
pub fn as_constant_root(c: Elem, kk: &Field) -> Option<Elem> {
    let p = kk.p() as usize;
    let mut coeffs = vec![0; p + 1];
    coeffs[0] = kk.neg(c);
    coeffs[1] = kk.neg(1);
    coeffs[p] = 1;
    Poly::new(coeffs).roots(kk).first().copied()
}

/// Points of `X` over the zeros of `d` and at infinity, or `None` if some
/// `y`-value is not in `kk`.
fn base_points(curve: &HyperellipticCurve, d: &Poly, kk: &FieldRef) -> Option<Vec<BasePoint>> {
    let mut out = Vec::new();
    let roots = d.roots(kk);
    if roots.len() != d.deg().unwrap_or(0) {
        return None;
    }
    for alpha in roots {
        let v = curve.f.eval(alpha, kk);
        if v == 0 {
            out.push(BasePoint {
                infinity: false,
                alpha,
                beta: 0,
                ramified: true,
            });
        } else {
            let beta = kk.sqrt(v)?;
            for b in [beta, kk.neg(beta)] {
                out.push(BasePoint {
                    infinity: false,
                    alpha,
                    beta: b,
                    ramified: false,
                });
            }
        }
    }
    if curve.even_degree() {
        let beta = kk.sqrt(curve.f.lead())?;
        for b in [beta, kk.neg(beta)] {
            out.push(BasePoint {
                infinity: true,
                alpha: 0,
                beta: b,
                ramified: false,
            });
        }
    } else {
        out.push(BasePoint {
            infinity: true,
            alpha: 0,
            beta: 0,
            ramified: true,
        });
    }
    Some(out)
}

/// `A(x) + B(x) y` as a series.
pub fn eval_fn(g: &FnElem, x: &Series, y: &Series, kk: &Field, rel: i64) -> Result<Series> {
    let part = |num: &Poly, den: &Poly| -> Result<Series> {
        let n = x.eval_poly(num, kk);
        if den.deg() == Some(0) {
            return Ok(n.scale(kk.inv(den.lead()), kk));
        }
        Ok(n.mul(&x.eval_poly(den, kk).inv_to(kk, rel)?, kk))
    };
    let a = part(&g.a.num, &g.a.den)?;
    let b = part(&g.b.num, &g.b.den)?;
    Ok(a.add(&b.mul(y, kk), kk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::expr::parse_function;

    #[test]
    fn ramified_point_expansion_satisfies_equation() {
        let c = HyperellipticCurve::parse(5, "x^5 + 2x + 1").unwrap();
        let t = Tower::base_curve(&c).unwrap();
        let inf = t.base.iter().position(|b| b.infinity).unwrap();
        let (x, y) = t.base_series(inf, 30).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(y.valuation(), Some(-5));
        let lhs = y.mul(&y, &t.kk);
        let rhs = x.eval_poly(&c.f, &t.kk);
        let diff = lhs.sub(&rhs, &t.kk);
        assert!(diff.prec() > 15);
        assert!(diff.is_zero_to_prec());
    }

    #[test]
    fn unramified_cover_reduces_everywhere() {
        let c = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        let g = parse_function("(x^4 + x^2 + x)y", &c.f, &c.k).unwrap();
        let t = Tower::new(&c, Some(&g), None).unwrap();
        assert_eq!(t.places.len(), 3 * t.base.len());
        assert_eq!(t.genus(), 7);
        let loc = t.local_series(40).unwrap();
        for l in &loc {
            let lhs = l.z.frobenius(&t.kk).sub(&l.z, &t.kk);
            let rhs = eval_fn(&g, &l.x, &l.y, &t.kk, 40).unwrap();
            assert!(lhs.sub(&rhs, &t.kk).is_zero_to_prec());
        }
    }

    #[test]
    fn prime_to_p_pole_is_ramified() {
        let c = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        let g = parse_function("1/(x-1)", &c.f, &c.k).unwrap();
        assert!(matches!(
            Tower::new(&c, Some(&g), None),
            Err(Error::Ramified(_))
        ));
    }
}
