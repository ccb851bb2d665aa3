//! De Rham cohomology of a curve `Z` (either `X` or `Y`) from local data at
//! the special places `S`.
//!
//! A class of the complex `O(-E) -> Omega(E)` is a pair `(w, f)` with `w` a
//! differential regular off `S` and `f = (f_Q)` Laurent tails modulo
//! `t^(e_Q)`, such that `w + d f_Q` has a pole of order at most `e_Q` at each
//! `Q`. Coboundaries are `(dh, -h)` for `h` regular off `S`. Then
//! `F(w, f) = (0, f^p)`, `V(w, f) = (C w, 0)` and the cup product is
//! `sum_Q res_Q(f_Q (w' + d f'_Q) - w g'_Q)`.

use crate::dmodule::DModule;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldRef};
use crate::linalg::{Matrix, Subspace};

use super::places::{Local, Tower};
use super::series::{Series, EXACT};

/// Slack on pole bounds and precision.
const SLACK: i64 = 2;
/// Extra tail depths tried when the first guess is short.
const DEPTH_RETRIES: i64 = 4;

/// Cohomology of `Z` relative to the divisor `E` (the marked places).
#[derive(Clone, Debug)]
pub struct CohomologyPackage {
    pub genus: usize,
    /// `dim H^0(Omega(E))`; the first basis vectors span it.
    pub h0: usize,
    /// `dim H^1(O(-E))`.
    pub h1: usize,
    /// Over the prime field, with pairing (and `gamma` for covers).
    pub module: DModule,
}

impl CohomologyPackage {
    /// Cartier operator on `H^0(Omega(E))`.
    pub fn cartier(&self) -> Matrix {
        self.module.v.submatrix(0..self.h0, 0..self.h0)
    }

    /// Frobenius induced on `H^1(O(-E))`.
    pub fn hasse_witt(&self) -> Matrix {
        let n = self.module.n;
        self.module.f.submatrix(self.h0..n, self.h0..n)
    }
}

/// A class: differential expansions at every place and tails
/// (coefficients of `t^n`, `n` in `[-depth, e_Q)`).
#[derive(Clone, Debug)]
struct Class {
    omega: Vec<Series>,
    tail: Vec<Series>,
}

struct Engine<'a> {
    tower: &'a Tower,
    kk: FieldRef,
    e: Vec<i64>,
    p: i64,
    /// Candidate expansions `[candidate][place]` as functions and as
    /// multiples of `dx/y`.
    fun: Vec<Vec<Series>>,
    dif: Vec<Vec<Series>>,
    lo: i64,
    hi_w: i64,
    m_hol: i64,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

/// Candidate monomials `x^a y^eps z^j / D^m` spanning every function
/// regular off `S` with poles of order at most `bound` at each place.
fn candidates(tower: &Tower, loc: &[Local], bound: i64) -> (i64, Vec<(usize, usize, usize)>) {
    let sheets = tower.sheets();
    let ord = |s: &Series| s.valuation().expect("nonzero local series");
    let rho = loc
        .iter()
        .map(|l| if sheets > 1 { (-ord(&l.z)).max(0) } else { 0 })
        .max()
        .unwrap_or(0);
    let b = bound + (sheets as i64 - 1) * rho;
    let deg_d = tower.d.deg().unwrap_or(0) as i64;
    let mut m = 0;
    let mut e_inf = 1;
    let mut y_inf = 0;
    for (q, l) in loc.iter().enumerate() {
        let bp = &tower.base[tower.places[q].base];
        if bp.infinity {
            e_inf = -ord(&l.x);
            y_inf = ord(&l.y);
        } else if deg_d > 0 {
            let od = -ord(&l.inv_d);
            let oy = ord(&l.y).max(0);
            m = m.max(ceil_div(b + oy, od));
        }
    }
    let mut out = Vec::new();
    for j in 0..sheets {
        for eps in 0..2usize {
            let top = m * deg_d + (b + if eps == 1 { y_inf } else { 0 }).div_euclid(e_inf);
            for a in 0..=top {
                out.push((a as usize, eps, j));
            }
        }
    }
    (m, out)
}

impl<'a> Engine<'a> {
    fn new(
        tower: &'a Tower,
        e: Vec<i64>,
        cand_bound: i64,
        hi_w: i64,
        m_hol: i64,
    ) -> Result<Engine<'a>> {
        let probe = tower.local_series(24)?;
        let (m, cands) = candidates(tower, &probe, cand_bound);
        let mut rel = hi_w + 4 * cand_bound + 40;
        for _ in 0..4 {
            let loc = tower.local_series(rel)?;
            if let Some(eng) = Engine::expand(tower, &loc, m, &cands, e.clone(), hi_w, m_hol)? {
                return Ok(eng);
            }
            rel *= 2;
        }
        Err(Error::Invariant(
            "local expansions did not reach the required precision".into(),
        ))
    }

    fn expand(
        tower: &'a Tower,
        loc: &[Local],
        m: i64,
        cands: &[(usize, usize, usize)],
        e: Vec<i64>,
        hi_w: i64,
        m_hol: i64,
    ) -> Result<Option<Engine<'a>>> {
        let kk = tower.kk.clone();
        let nq = loc.len();
        let mut fun = vec![Vec::with_capacity(nq); cands.len()];
        let mut dif = vec![Vec::with_capacity(nq); cands.len()];
        let mut lo = 0;
        let top_a = cands.iter().map(|c| c.0).max().unwrap_or(0);
        for l in loc {
            let cut = |s: Series| s.truncate(hi_w + 8 * (top_a as i64 + 10) + 200);
            let base = l.inv_d.pow(m as u64, &kk);
            let mut yz = vec![vec![base.clone(); tower.sheets()]; 2];
            for eps in 0..2 {
                if eps == 1 {
                    yz[1][0] = cut(base.mul(&l.y, &kk));
                }
                for j in 1..tower.sheets() {
                    yz[eps][j] = cut(yz[eps][j - 1].mul(&l.z, &kk));
                }
            }
            let mut xp = vec![Series::constant(1, EXACT)];
            for a in 1..=top_a {
                xp.push(cut(xp[a - 1].mul(&l.x, &kk)));
            }
            for (ci, &(a, eps, j)) in cands.iter().enumerate() {
                let f = xp[a].mul(&yz[eps][j], &kk);
                let w = f.mul(&l.dx_over_y, &kk);
                if f.prec() < hi_w || w.prec() < hi_w {
                    return Ok(None);
                }
                lo = lo
                    .min(f.valuation().unwrap_or(0))
                    .min(w.valuation().unwrap_or(0));
                fun[ci].push(f.truncate(hi_w));
                dif[ci].push(w.truncate(hi_w));
            }
        }
        Ok(Some(Engine {
            tower,
            kk,
            e,
            p: tower.kk.p() as i64,
            fun,
            dif,
            lo: lo - SLACK,
            hi_w,
            m_hol,
        }))
    }

    fn nq(&self) -> usize {
        self.e.len()
    }

    fn ncand(&self) -> usize {
        self.fun.len()
    }

    /// Rows `(q, n)` for `n` in `range(q)` of the given expansions.
    fn rows(&self, exps: &[Vec<Series>], range: impl Fn(usize) -> (i64, i64)) -> Matrix {
        let mut rows = Vec::new();
        for q in 0..self.nq() {
            let (a, b) = range(q);
            for n in a..b {
                rows.push(exps.iter().map(|c| c[q].at(n)).collect::<Vec<_>>());
            }
        }
        if rows.is_empty() {
            return Matrix::zeros(&self.kk, 0, self.ncand());
        }
        Matrix::from_rows(&self.kk, &rows)
    }

    /// Combination of candidate expansions.
    fn combine(&self, exps: &[Vec<Series>], coef: &[Elem]) -> Vec<Series> {
        let kk = &self.kk;
        (0..self.nq())
            .map(|q| {
                let mut acc = Series::zero(self.hi_w);
                for (c, &a) in coef.iter().enumerate() {
                    if a != 0 {
                        acc = acc.add(&exps[c][q].scale(a, kk), kk);
                    }
                }
                acc
            })
            .collect()
    }

    /// Functions with poles of order at most `depth` everywhere.
    fn functions(&self, depth: i64) -> Vec<Vec<Elem>> {
        self.rows(&self.fun, |_| (self.lo, -depth)).kernel()
    }

    /// Tail coordinates `(q, n)`, `n` in `[-depth, e_q)`.
    fn tail_index(&self, depth: i64) -> Vec<(usize, i64)> {
        (0..self.nq())
            .flat_map(|q| (-depth..self.e[q]).map(move |n| (q, n)))
            .collect()
    }

    fn tail_vec(&self, tails: &[Series], idx: &[(usize, i64)]) -> Vec<Elem> {
        idx.iter()
            .map(|&(q, n)| tails[q].coeff(n).unwrap_or(0))
            .collect()
    }

    fn tails_from_vec(&self, v: &[Elem], idx: &[(usize, i64)]) -> Vec<Series> {
        let kk = &self.kk;
        let mut out = vec![Series::zero(EXACT); self.nq()];
        for (&(q, n), &a) in idx.iter().zip(v) {
            if a != 0 {
                out[q] = out[q].add(&Series::monomial(a, n, EXACT), kk);
            }
        }
        out
    }

    fn check_rational(&self, v: &[Elem], what: &str) -> Result<()> {
        if v.iter().all(|&a| self.kk.is_in_prime_field(a)) {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "{what} is not defined over the prime field"
            )))
        }
    }

    fn run(&self, genus: usize, depth: i64) -> Result<CohomologyPackage> {
        let kk = self.kk.clone();
        let deg_e: i64 = self.e.iter().sum();
        let expect = if deg_e == 0 {
            genus
        } else {
            genus + deg_e as usize - 1
        };
        let h_fun = if deg_e == 0 { 1 } else { 0 };
        let idx = self.tail_index(depth);
        // image of L(depth) in the tails
        let lfun = self.functions(depth);
        let tmat = self.rows(&self.fun, |q| (-depth, self.e[q]));
        let img: Vec<Vec<Elem>> = lfun.iter().map(|v| tmat.mul_vec(v)).collect();
        let image = Subspace::span(&kk, idx.len(), &img);
        if lfun.len() - image.dim() != h_fun {
            return Err(Error::Reducible);
        }
        if idx.len() - image.dim() != expect {
            return Err(Error::Dimension(format!(
                "H^1(O) has dimension {} at depth {depth}, expected {expect}",
                idx.len() - image.dim()
            )));
        }
        let taus = self.rational_complement(&image, &idx, expect)?;
        // H^0(Omega(E))
        let polar = self.rows(&self.dif, |q| (self.lo, -self.e[q]));
        let hol = polar.kernel();
        if hol.len() != expect {
            return Err(Error::Dimension(format!(
                "H^0(Omega) has dimension {}, expected {expect}",
                hol.len()
            )));
        }
        for w in &hol {
            self.check_rational(w, "a holomorphic differential")?;
        }
        let mut basis: Vec<Class> = hol
            .iter()
            .map(|w| Class {
                omega: self.combine(&self.dif, w),
                tail: vec![Series::zero(EXACT); self.nq()],
            })
            .collect();
        for tau in &taus {
            let tails = self.tails_from_vec(tau, &idx);
            let rhs: Vec<Elem> = (0..self.nq())
                .flat_map(|q| {
                    let d = tails[q].derivative(&kk);
                    (self.lo..-self.e[q])
                        .map(move |n| d.coeff(n).unwrap_or(0))
                        .collect::<Vec<_>>()
                })
                .map(|a| kk.neg(a))
                .collect();
            let w = polar.solve(&rhs).ok_or_else(|| {
                Error::Invariant("no differential with the prescribed polar parts".into())
            })?;
            self.check_rational(&w, "a lifted differential")?;
            basis.push(Class {
                omega: self.combine(&self.dif, &w),
                tail: tails,
            });
        }
        let n = basis.len();
        let images_f: Vec<Class> = basis.iter().map(|b| self.frobenius(b)).collect();
        let images_v: Vec<Class> = basis.iter().map(|b| self.cartier(b)).collect();
        let big = self.p * depth;
        let reducer = Reducer::new(self, &basis, big)?;
        let f = reducer.coords(self, &images_f)?;
        let v = reducer.coords(self, &images_v)?;
        let gamma = if self.tower.cover.is_some() {
            let images_g: Vec<Class> = basis.iter().map(|b| self.gamma(b)).collect();
            Some(reducer.coords(self, &images_g)?)
        } else {
            None
        };
        let mut pairing = Matrix::zeros(&kk, n, n);
        for i in (0..n).filter(|_| deg_e == 0) {
            for j in 0..n {
                pairing.set(i, j, self.pair(&basis[i], &basis[j]));
            }
        }
        let k = Field::prime(kk.p())?;
        let down = |m: &Matrix| -> Result<Matrix> {
            let mut out = Matrix::zeros(&k, m.rows, m.cols);
            for i in 0..m.rows {
                for j in 0..m.cols {
                    let a = m.get(i, j);
                    if !kk.is_in_prime_field(a) {
                        return Err(Error::Invariant(
                            "operator matrix is not defined over the prime field".into(),
                        ));
                    }
                    out.set(i, j, a);
                }
            }
            Ok(out)
        };
        let mut module = DModule::new(down(&f)?, down(&v)?)?;
        if deg_e == 0 {
            module = module.with_pairing(down(&pairing)?);
        }
        if let Some(g) = gamma {
            module = module.with_gamma(down(&g)?);
        }
        Ok(CohomologyPackage {
            genus,
            h0: expect,
            h1: expect,
            module,
        })
    }

    /// Galois-stable tail vectors completing `image`, preferring small poles.
    fn rational_complement(
        &self,
        image: &Subspace,
        idx: &[(usize, i64)],
        want: usize,
    ) -> Result<Vec<Vec<Elem>>> {
        let kk = &self.kk;
        let r = kk.degree();
        let mut span = image.clone();
        let mut out = Vec::new();
        let depth = idx.iter().map(|&(_, n)| -n).max().unwrap_or(0);
        let top = self.e.iter().copied().max().unwrap_or(0);
        let pos = |q: usize, n: i64| idx.iter().position(|&(a, b)| a == q && b == n);
        for n in (-depth..top).rev() {
            for q0 in 0..self.nq() {
                if n >= self.e[q0] {
                    continue;
                }
                for i in 0..r {
                    if out.len() == want {
                        return Ok(out);
                    }
                    let mut lam = kk.pow(kk.gen(), i as u64);
                    if r == 1 {
                        lam = 1;
                    }
                    let mut v = vec![0; idx.len()];
                    let mut q = q0;
                    for _ in 0..r {
                        let at = pos(q, n).expect("Galois orbits preserve e");
                        v[at] = kk.add(v[at], lam);
                        lam = kk.frob(lam, 1);
                        q = self.tower.galois_image(q);
                    }
                    if !span.contains(&v) {
                        span = span.sum(&Subspace::span(kk, idx.len(), &[v.clone()]));
                        out.push(v);
                    }
                }
            }
        }
        if out.len() == want {
            Ok(out)
        } else {
            Err(Error::Invariant(
                "could not find a rational complement".into(),
            ))
        }
    }

    fn frobenius(&self, b: &Class) -> Class {
        let kk = &self.kk;
        Class {
            omega: vec![Series::zero(EXACT); self.nq()],
            tail: b
                .tail
                .iter()
                .enumerate()
                .map(|(q, t)| t.frobenius(kk).truncate(self.e[q]))
                .collect(),
        }
    }

    fn cartier(&self, b: &Class) -> Class {
        let kk = &self.kk;
        Class {
            omega: b.omega.iter().map(|w| w.cartier(kk)).collect(),
            tail: vec![Series::zero(EXACT); self.nq()],
        }
    }

    fn gamma(&self, b: &Class) -> Class {
        let perm: Vec<usize> = (0..self.nq()).map(|q| self.tower.gamma_image(q)).collect();
        Class {
            omega: perm.iter().map(|&g| b.omega[g].clone()).collect(),
            tail: perm.iter().map(|&g| b.tail[g].clone()).collect(),
        }
    }

    fn pair(&self, a: &Class, b: &Class) -> Elem {
        let kk = &self.kk;
        let mut s = 0;
        for q in 0..self.nq() {
            let fa = &a.tail[q];
            let gb = &b.tail[q];
            let form = b.omega[q].add(&gb.derivative(kk), kk);
            let t1 = fa.mul(&form, kk).residue();
            let t2 = a.omega[q].mul(gb, kk).residue();
            s = kk.add(s, kk.sub(t1, t2));
        }
        s
    }
}

/// Solves for coordinates of classes in the chosen basis.
struct Reducer {
    /// Rows: tails `(q, n)` for `n` in `[-big, e_q)`, then differential
    /// coefficients for `n` in `[lo, m_hol)`.
    system: Matrix,
    tail_idx: Vec<(usize, i64)>,
    dim: usize,
}

impl Reducer {
    fn new(eng: &Engine<'_>, basis: &[Class], big: i64) -> Result<Reducer> {
        let kk = &eng.kk;
        let tail_idx = eng.tail_index(big);
        let hfun = eng.functions(big);
        let mut cols: Vec<Vec<Elem>> = basis
            .iter()
            .map(|b| Reducer::flatten(eng, b, &tail_idx))
            .collect();
        for h in &hfun {
            let f = eng.combine(&eng.fun, h);
            let cls = Class {
                omega: f.iter().map(|s| s.derivative(kk)).collect(),
                tail: f.iter().map(|s| s.neg(kk)).collect(),
            };
            cols.push(Reducer::flatten(eng, &cls, &tail_idx));
        }
        let rows = cols[0].len();
        let system = Matrix::from_cols(kk, rows, &cols);
        let without = Matrix::from_cols(kk, rows, &cols[basis.len()..]);
        if system.rank() != without.rank() + basis.len() {
            return Err(Error::Invariant(
                "basis classes are dependent modulo coboundaries".into(),
            ));
        }
        Ok(Reducer {
            system,
            tail_idx,
            dim: basis.len(),
        })
    }

    fn flatten(eng: &Engine<'_>, c: &Class, tail_idx: &[(usize, i64)]) -> Vec<Elem> {
        let mut v = eng.tail_vec(&c.tail, tail_idx);
        for q in 0..eng.nq() {
            for n in eng.lo..eng.m_hol {
                v.push(c.omega[q].coeff(n).expect("differential known to m_hol"));
            }
        }
        v
    }

    /// Coordinates of each class as the columns of a matrix.
    fn coords(&self, eng: &Engine<'_>, classes: &[Class]) -> Result<Matrix> {
        let kk = &eng.kk;
        for c in classes {
            for q in 0..eng.nq() {
                if c.tail[q]
                    .valuation()
                    .is_some_and(|v| v < -(self.tail_idx.iter().map(|t| -t.1).max().unwrap_or(0)))
                {
                    return Err(Error::Invariant(
                        "tail deeper than the reduction system".into(),
                    ));
                }
                if c.omega[q].valuation().is_some_and(|v| v < eng.lo) {
                    return Err(Error::Invariant(
                        "pole deeper than the reduction system".into(),
                    ));
                }
            }
        }
        let cols: Vec<Vec<Elem>> = classes
            .iter()
            .map(|c| Reducer::flatten(eng, c, &self.tail_idx))
            .collect();
        let rhs = Matrix::from_cols(kk, self.system.rows, &cols);
        let sol = self
            .system
            .solve_matrix(&rhs)
            .ok_or_else(|| Error::Invariant("class does not reduce to the basis".into()))?;
        Ok(sol.submatrix(0..self.dim, 0..classes.len()))
    }
}

/// Cohomology of `Z` with `e_Q = 1` on the marked places and `0` elsewhere.
pub fn cohomology(tower: &Tower) -> Result<CohomologyPackage> {
    let genus = tower.genus() as i64;
    let nq = tower.places.len() as i64;
    let e: Vec<i64> = tower.marked.iter().map(|&m| i64::from(m)).collect();
    let deg_e: i64 = e.iter().sum();
    let p = tower.kk.p() as i64;
    let probe = tower.local_series(24)?;
    let dxy = probe
        .iter()
        .map(|l| l.dx_over_y.valuation().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let m_hol = (2 * genus - 2 + deg_e).div_euclid(nq) + 1 + SLACK;
    let first = ceil_div(2 * genus + deg_e, nq).max(1);
    let mut last = None;
    for depth in first..first + DEPTH_RETRIES {
        let big = p * depth;
        let cand_bound = big.max(depth + 1 + dxy + 1);
        let hi_w = (p * (m_hol + 1)).max(depth + 1) + SLACK;
        let eng = Engine::new(tower, e.clone(), cand_bound, hi_w, m_hol)?;
        match eng.run(tower.genus(), depth) {
            Err(Error::Dimension(msg)) => last = Some(msg),
            other => return other,
        }
    }
    Err(Error::Dimension(last.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::hyperelliptic::HyperellipticCurve;

    #[test]
    fn base_curve_matches_cartier_manin() {
        let x = HyperellipticCurve::parse(3, "x^9 + x^4 + x^2 + 1").unwrap();
        let t = Tower::base_curve(&x).unwrap();
        let pkg = cohomology(&t).unwrap();
        assert_eq!(pkg.module.n, 8);
        assert!(pkg.module.verify().all_pass(), "{:?}", pkg.module.verify());
        assert_eq!(pkg.module.a_number(), x.a_number());
        assert_eq!(pkg.module.p_rank(), 2);
        assert_eq!(pkg.cartier().rank(), x.cartier_manin().rank());
    }
}
