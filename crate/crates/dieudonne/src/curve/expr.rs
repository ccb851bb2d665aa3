//! Elements `A(x) + B(x) y` of a hyperelliptic function field and a small
//! ASCII expression grammar for them.
//!
//! Grammar: integers, `x`, `y`, `+ - * / ^ ( )`, with implicit
//! multiplication (`2x`, `(x+1)y`, `xy`). Exponents are non-negative
//! integer literals.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldRef};
use crate::poly::Poly;

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, k: &Field) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(&den, k);
        let (num, den) = (num.exact_div(&g, k), den.exact_div(&g, k));
        let l = k.inv(den.lead());
        Ok(RatFn {
            num: num.scale(l, k),
            den: den.scale(l, k),
        })
    }

    pub fn poly(p: Poly) -> RatFn {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> RatFn {
        RatFn::poly(Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn, k: &Field) -> RatFn {
        let num = self.num.mul(&o.den, k).add(&o.num.mul(&self.den, k), k);
        RatFn::new(num, self.den.mul(&o.den, k), k).expect("nonzero denominators")
    }

    pub fn neg(&self, k: &Field) -> RatFn {
        RatFn {
            num: self.num.neg(k),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn, k: &Field) -> RatFn {
        RatFn::new(self.num.mul(&o.num, k), self.den.mul(&o.den, k), k)
            .expect("nonzero denominators")
    }

    pub fn mul_poly(&self, p: &Poly, k: &Field) -> RatFn {
        self.mul(&RatFn::poly(p.clone()), k)
    }

    pub fn inv(&self, k: &Field) -> Result<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone(), k)
    }

    fn fmt_in(&self, k: &Field) -> String {
        let n = self.num.to_string_in(k, "x");
        if self.den == Poly::one() {
            n
        } else {
            format!("({n})/({})", self.den.to_string_in(k, "x"))
        }
    }
}

/// `a + b y` with `y^2 = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnElem {
    pub a: RatFn,
    pub b: RatFn,
}

impl FnElem {
    pub fn from_rat(a: RatFn) -> FnElem {
        FnElem {
            a,
            b: RatFn::zero(),
        }
    }

    pub fn constant(c: Elem) -> FnElem {
        FnElem::from_rat(RatFn::poly(Poly::constant(c)))
    }

    pub fn x() -> FnElem {
        FnElem::from_rat(RatFn::poly(Poly::x()))
    }

    pub fn y() -> FnElem {
        FnElem {
            a: RatFn::zero(),
            b: RatFn::poly(Poly::one()),
        }
    }

    pub fn add(&self, o: &FnElem, k: &Field) -> FnElem {
        FnElem {
            a: self.a.add(&o.a, k),
            b: self.b.add(&o.b, k),
        }
    }

    pub fn neg(&self, k: &Field) -> FnElem {
        FnElem {
            a: self.a.neg(k),
            b: self.b.neg(k),
        }
    }

    pub fn sub(&self, o: &FnElem, k: &Field) -> FnElem {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &FnElem, f: &Poly, k: &Field) -> FnElem {
        let bb = self.b.mul(&o.b, k).mul_poly(f, k);
        FnElem {
            a: self.a.mul(&o.a, k).add(&bb, k),
            b: self.a.mul(&o.b, k).add(&self.b.mul(&o.a, k), k),
        }
    }

    /// `(a - b y) / (a^2 - b^2 f)`.
    pub fn inv(&self, f: &Poly, k: &Field) -> Result<FnElem> {
        let norm = self
            .a
            .mul(&self.a, k)
            .add(&self.b.mul(&self.b, k).mul_poly(f, k).neg(k), k);
        if norm.is_zero() {
            return Err(Error::Invalid(
                "division by zero in the function field".into(),
            ));
        }
        let ni = norm.inv(k)?;
        Ok(FnElem {
            a: self.a.mul(&ni, k),
            b: self.b.neg(k).mul(&ni, k),
        })
    }

    pub fn pow(&self, e: u64, f: &Poly, k: &Field) -> FnElem {
        let mut out = FnElem::constant(1);
        for _ in 0..e {
            out = out.mul(self, f, k);
        }
        out
    }

    /// Monic common denominator of `a` and `b`.
    pub fn denominator(&self, k: &Field) -> Poly {
        let g = self.a.den.gcd(&self.b.den, k);
        self.a.den.mul(&self.b.den, k).exact_div(&g, k)
    }

    pub fn is_polynomial_in_x(&self) -> bool {
        self.b.is_zero() && self.a.den == Poly::one()
    }

    pub fn display<'a>(&'a self, k: &'a Field) -> Display<'a> {
        Display { e: self, k }
    }
}

pub struct Display<'a> {
    e: &'a FnElem,
    k: &'a Field,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k;
        match (self.e.a.is_zero(), self.e.b.is_zero()) {
            (true, true) => write!(out, "0"),
            (false, true) => write!(out, "{}", self.e.a.fmt_in(k)),
            (true, false) => write!(out, "({})*y", self.e.b.fmt_in(k)),
            (false, false) => write!(out, "{} + ({})*y", self.e.a.fmt_in(k), self.e.b.fmt_in(k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    X,
    Y,
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let st = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = cs[st..i].iter().collect();
                out.push(Tok::Num(
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad integer {t}")))?,
                ));
            }
            'x' => {
                out.push(Tok::X);
                i += 1;
            }
            'y' => {
                out.push(Tok::Y);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    k: &'a Field,
    f: Option<&'a Poly>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn curve(&self) -> Result<&Poly> {
        self.f
            .ok_or_else(|| Error::Parse("y is not allowed here".into()))
    }

    fn mul(&self, a: &FnElem, b: &FnElem) -> Result<FnElem> {
        match self.f {
            Some(f) => Ok(a.mul(b, f, self.k)),
            None => Ok(a.mul(b, &Poly::zero(), self.k)),
        }
    }

    fn expr(&mut self) -> Result<FnElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = acc.add(&t, self.k);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = acc.sub(&t, self.k);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FnElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = self.mul(&acc, &t)?;
            } else if self.eat('/') {
                let t = self.unary()?;
                let inv = match self.f {
                    Some(f) => t.inv(f, self.k)?,
                    None => t.inv(&Poly::zero(), self.k)?,
                };
                acc = self.mul(&acc, &inv)?;
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::X | Tok::Y | Tok::Op('('))
            ) {
                let t = self.power()?;
                acc = self.mul(&acc, &t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FnElem> {
        if self.eat('-') {
            return Ok(self.unary()?.neg(self.k));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FnElem> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = match self.peek() {
                Some(&Tok::Num(n)) => n,
                _ => return Err(Error::Parse("exponent must be an integer literal".into())),
            };
            self.pos += 1;
            let f = self.f.cloned().unwrap_or_else(Poly::zero);
            return Ok(base.pow(e as u64, &f, self.k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<FnElem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(FnElem::constant(self.k.from_int(n)))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(FnElem::x())
            }
            Some(Tok::Y) => {
                self.curve()?;
                self.pos += 1;
                Ok(FnElem::y())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn run(s: &str, k: &Field, f: Option<&Poly>) -> Result<FnElem> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        k,
        f,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// A polynomial in `x` with integer coefficients reduced mod `p`.
pub fn parse_poly(s: &str, k: &FieldRef) -> Result<Poly> {
    let e = run(s, k, None)?;
    if !e.is_polynomial_in_x() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial in x")));
    }
    Ok(e.a.num)
}

/// An element of `k(x)[y]/(y^2 - f)`.
pub fn parse_function(s: &str, f: &Poly, k: &FieldRef) -> Result<FnElem> {
    run(s, k, Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn polynomials() {
        let k = Field::prime(3).unwrap();
        let f = parse_poly("x^9 + x^4 + x^2 + 1", &k).unwrap();
        assert_eq!(f.coeffs(), &[1, 0, 1, 0, 1, 0, 0, 0, 0, 1]);
        let g = parse_poly("-x^7 - x^3 - 1", &k).unwrap();
        assert_eq!(g.coeff(7), 2);
        assert_eq!(parse_poly("2x(x+1)", &k).unwrap().coeffs(), &[0, 2, 2]);
        assert!(parse_poly("x*y", &k).is_err());
        assert!(parse_poly("x +", &k).is_err());
    }

    #[test]
    fn functions_reduce_y_squared() {
        let k = Field::prime(5).unwrap();
        let f = parse_poly("x^3 + 1", &k).unwrap();
        let e = parse_function("y^2 - 1", &f, &k).unwrap();
        assert_eq!(
            e,
            FnElem::from_rat(RatFn::poly(parse_poly("x^3", &k).unwrap()))
        );
        let g = parse_function("(x+1)y + 1", &f, &k).unwrap();
        assert_eq!(g.b.num.coeffs(), &[1, 1]);
        let q = parse_function("xy/x^2", &f, &k).unwrap();
        assert_eq!(q.b.den.coeffs(), &[0, 1]);
        let inv = parse_function("1/(1+y)", &f, &k).unwrap();
        let one = inv.mul(&parse_function("1+y", &f, &k).unwrap(), &f, &k);
        assert_eq!(one, FnElem::constant(1));
    }
}
