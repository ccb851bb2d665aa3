//! Classification statements for superspecial-mod-delta coordinates.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AdmissibleCoords;
use crate::dmodule::WordMultiset;
use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::gring::{RElement, RMatrix};
use crate::linalg::{Matrix, Subspace};

/// `k`-basis of `{D : delta | D, D~^t = D}` (the conditions have `F_p`
/// coefficients, so an `F_p`-basis of solutions serves over `k`).
pub fn superspecial_family(field: &FieldRef, h: usize) -> Vec<RMatrix> {
    let p = field.p() as usize;
    let fp = Field::prime(field.p()).expect("prime field");
    let idx = |i: usize, j: usize, l: usize| (i * h + j) * (p - 1) + (l - 1);
    let unknowns = h * h * (p - 1);
    let to_matrix = |x: &[u64], k: &FieldRef| {
        let mut d = RMatrix::zeros(k, h, h);
        for i in 0..h {
            for j in 0..h {
                let mut c = vec![0; p];
                for l in 1..p {
                    c[l] = x[idx(i, j, l)];
                }
                d.e[i][j] = RElement::new(k, c);
            }
        }
        d
    };
    let mut cols = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut x = vec![0; unknowns];
        x[u] = 1;
        let d = to_matrix(&x, &fp);
        let r = d.tilde().transpose().sub(&d);
        cols.push(
            r.e.iter()
                .flatten()
                .flat_map(|a| a.c.clone())
                .collect::<Vec<_>>(),
        );
    }
    let sys = Matrix::from_cols(&fp, h * h * p, &cols);
    sys.kernel().iter().map(|x| to_matrix(x, field)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Class {
    pub a: usize,
    pub ell: usize,
    pub b: usize,
    pub words: WordMultiset,
    /// `(exponent, count)`: `F^e e_i = V^e e_i` for `count` generators.
    pub relations: Vec<(usize, usize)>,
}

/// The rank-two case: `p = ell a + b` gives words `f^{ell+1}v^{ell+1}` (b times)
/// and `f^ell v^ell` (`a - b` times).
pub fn classify_h1(p: usize, a: usize) -> Result<H1Class> {
    let allowed = a == p || (a >= 2 && a < p && a.is_multiple_of(2));
    if p < 3 || !allowed {
        return Err(Error::Invalid(format!(
            "a = {a} is not a possible a-number for p = {p}, h = 1"
        )));
    }
    let ell = p / a;
    let b = p % a;
    let words = expected_words_for_power(p, 1, a);
    let mut relations = Vec::new();
    if b > 0 {
        relations.push((ell + 1, b));
    }
    relations.push((ell, a - b));
    Ok(H1Class {
        a,
        ell,
        b,
        words,
        relations,
    })
}

/// Words of `D = delta^alpha U` with `U` invertible: `p = ell alpha + beta`,
/// `f^{ell+1}v^{ell+1}` with multiplicity `h beta`, `f^ell v^ell` with
/// multiplicity `h (alpha - beta)`.
pub fn expected_words_for_power(p: usize, h: usize, alpha: usize) -> WordMultiset {
    let ell = p / alpha;
    let beta = p % alpha;
    let mut w = WordMultiset::new();
    let word = |e: usize| format!("{}{}", "f".repeat(e), "v".repeat(e));
    w.add(&word(ell + 1), h * beta).expect("valid word");
    w.add(&word(ell), h * (alpha - beta)).expect("valid word");
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub p: usize,
    pub h: usize,
    pub field_degree: u32,
    pub mode: ParityMode,
    pub checked: usize,
    /// `a -> count`.
    pub a_counts: BTreeMap<usize, usize>,
    pub violations: Vec<String>,
}

impl ParityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }
}

fn check_one(c: &AdmissibleCoords) -> (usize, Vec<String>) {
    let p = c.p();
    let h = c.h;
    let mut bad = Vec::new();
    let tag = d_tag(c);
    let a = c.a_from_d();
    let m = match c.build() {
        Ok(m) => m,
        Err(e) => return (a, vec![format!("{tag}: build failed: {e}")]),
    };
    if m.a_number() != a {
        bad.push(format!(
            "{tag}: a from D is {a}, module has {}",
            m.a_number()
        ));
    }
    if a < p && a % 2 == 1 {
        bad.push(format!("{tag}: odd a = {a} < p"));
    }
    if h % 2 == 1 && a < h + 1 {
        bad.push(format!("{tag}: h odd but a = {a}"));
    }
    if !c.leading_parity_holds() {
        bad.push(format!("{tag}: leading matrix has the wrong symmetry"));
    }
    let (alpha, lead) = c.leading();
    let unit_lead = alpha == p || lead.rank() == h;
    if a == h || unit_lead {
        match m.kraft_words() {
            Ok(words) => {
                if a == h {
                    let mut want = WordMultiset::new();
                    want.add(&format!("{}{}", "f".repeat(p), "v".repeat(p)), h)
                        .expect("word");
                    if words != want || h % 2 == 1 {
                        bad.push(format!("{tag}: a = h but words {words}"));
                    }
                }
                if unit_lead {
                    let want = expected_words_for_power(p, h, alpha);
                    if words != want {
                        bad.push(format!(
                            "{tag}: alpha = {alpha} expects {want}, got {words}"
                        ));
                    }
                    if alpha < p && (h * alpha) % 2 == 1 {
                        bad.push(format!("{tag}: h alpha odd"));
                    }
                }
            }
            Err(e) => bad.push(format!("{tag}: words failed: {e}")),
        }
    }
    (a, bad)
}

/// Every (or a seeded sample of) `D` in the superspecial family.
pub fn superspecial_candidates(
    field: &FieldRef,
    h: usize,
    mode: ParityMode,
) -> Result<Vec<RMatrix>> {
    let basis = superspecial_family(field, h);
    let q = field.order();
    let combine = |coeffs: &[u64]| {
        let mut d = RMatrix::zeros(field, h, h);
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0 {
                d = d.add(&b.map(|x| x.scale(c)));
            }
        }
        d
    };
    let coeffs: Vec<Vec<u64>> = match mode {
        ParityMode::Exhaustive => {
            let total = q
                .checked_pow(basis.len() as u32)
                .filter(|&t| t <= 1 << 20)
                .ok_or_else(|| Error::Bound("exhaustive enumeration too large".into()))?;
            (0..total)
                .map(|mut t| {
                    (0..basis.len())
                        .map(|_| {
                            let c = t % q;
                            t /= q;
                            c
                        })
                        .collect()
                })
                .collect()
        }
        ParityMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| (0..basis.len()).map(|_| field.random(&mut rng)).collect())
                .collect()
        }
    };
    Ok(coeffs.iter().map(|x| combine(x)).collect())
}

/// Enumerate or sample `delta | D = D~^t` and check the parity statements.
pub fn verify_parity_theorems(
    field: &FieldRef,
    h: usize,
    mode: ParityMode,
) -> Result<ParityReport> {
    let p = field.p() as usize;
    if p < 3 {
        return Err(Error::Invalid("parity statements need p > 2".into()));
    }
    let candidates = superspecial_candidates(field, h, mode)?;
    let results: Vec<(usize, Vec<String>)> = candidates
        .into_par_iter()
        .map(|d| match AdmissibleCoords::superspecial(d) {
            Ok(c) => check_one(&c),
            Err(e) => (usize::MAX, vec![format!("invalid candidate: {e}")]),
        })
        .collect();
    let mut rep = ParityReport {
        p,
        h,
        field_degree: field.degree(),
        mode,
        checked: results.len(),
        a_counts: BTreeMap::new(),
        violations: Vec::new(),
    };
    for (a, bad) in results {
        *rep.a_counts.entry(a).or_insert(0) += 1;
        rep.violations.extend(bad);
    }
    Ok(rep)
}

fn d_tag(c: &AdmissibleCoords) -> String {
    format!(
        "{:?}",
        c.d.e
            .iter()
            .map(|r| r.iter().map(|x| x.c.clone()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    )
}

/// Words of the built module against `classify_h1` for every rank-one `D`.
pub fn verify_h1_classification(field: &FieldRef, mode: ParityMode) -> Result<ParityReport> {
    let p = field.p() as usize;
    let candidates = superspecial_candidates(field, 1, mode)?;
    let results: Vec<(usize, Vec<String>)> = candidates
        .into_par_iter()
        .map(|d| {
            let c = match AdmissibleCoords::superspecial(d) {
                Ok(c) => c,
                Err(e) => return (usize::MAX, vec![format!("invalid candidate: {e}")]),
            };
            let a = c.a_from_d();
            let words = c.build().and_then(|m| m.kraft_words());
            let want = classify_h1(p, a);
            let bad = match (words, want) {
                (Ok(w), Ok(cl)) if w == cl.words => vec![],
                (Ok(w), Ok(cl)) => vec![format!(
                    "{}: a = {a}, module words {w}, class {}",
                    d_tag(&c),
                    cl.words
                )],
                (Err(e), _) | (_, Err(e)) => vec![format!("{}: {e}", d_tag(&c))],
            };
            (a, bad)
        })
        .collect();
    let mut rep = ParityReport {
        p,
        h: 1,
        field_degree: field.degree(),
        mode,
        checked: results.len(),
        a_counts: BTreeMap::new(),
        violations: Vec::new(),
    };
    for (a, bad) in results {
        *rep.a_counts.entry(a).or_insert(0) += 1;
        rep.violations.extend(bad);
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeASweep {
    pub checked: usize,
    /// `a = ph` counted under `"ph"`, `a = ph - 1` under `"r=<r>"`.
    pub classes: BTreeMap<String, usize>,
    pub mismatches: Vec<String>,
}

/// Run `classify_large_a` on every candidate with `a >= ph - 1`.
pub fn verify_large_a(field: &FieldRef, h: usize, mode: ParityMode) -> Result<LargeASweep> {
    let p = field.p() as usize;
    let candidates = superspecial_candidates(field, h, mode)?;
    let results: Vec<Option<(String, Option<String>)>> = candidates
        .into_par_iter()
        .map(|d| {
            let c = match AdmissibleCoords::superspecial(d) {
                Ok(c) => c,
                Err(e) => return Some(("invalid".into(), Some(e.to_string()))),
            };
            if c.a_from_d() + 1 < p * h {
                return None;
            }
            Some(match classify_large_a(&c) {
                Ok(rep) => {
                    let key = rep.r.map_or("ph".to_string(), |r| format!("r={r}"));
                    let bad = (!rep.matches()).then(|| format!("{}: {rep:?}", d_tag(&c)));
                    (key, bad)
                }
                Err(e) => ("error".into(), Some(format!("{}: {e}", d_tag(&c)))),
            })
        })
        .collect();
    let mut sweep = LargeASweep {
        checked: results.len(),
        classes: BTreeMap::new(),
        mismatches: Vec::new(),
    };
    for (key, bad) in results.into_iter().flatten() {
        *sweep.classes.entry(key).or_insert(0) += 1;
        sweep.mismatches.extend(bad);
    }
    Ok(sweep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeAReport {
    pub a: usize,
    pub r: Option<usize>,
    pub expected_eo: Vec<usize>,
    pub expected_words: WordMultiset,
    pub eo: Vec<usize>,
    pub words: WordMultiset,
}

impl LargeAReport {
    pub fn matches(&self) -> bool {
        self.eo == self.expected_eo && self.words == self.expected_words
    }
}

/// `a = ph` (superspecial) or `a = ph - 1` (indexed by `r`).
pub fn classify_large_a(c: &AdmissibleCoords) -> Result<LargeAReport> {
    let p = c.p();
    let h = c.h;
    let a = c.a_from_d();
    let m = c.build()?;
    let eo = m.eo_sequence()?;
    let words = m.kraft_words()?;
    if a == p * h {
        let mut w = WordMultiset::new();
        w.add("fv", p * h)?;
        return Ok(LargeAReport {
            a,
            r: None,
            expected_eo: vec![0; p * h],
            expected_words: w,
            eo,
            words,
        });
    }
    if a + 1 != p * h {
        return Err(Error::Invalid(format!("a = {a} is neither ph nor ph - 1")));
    }
    let (alpha, lead) = c.leading();
    if alpha != p - 1 || lead.rank() != 1 {
        return Err(Error::Invariant(
            "a = ph - 1 but D is not delta^{p-1} times rank one".into(),
        ));
    }
    let k = &c.field;
    let v = Subspace::column_space(&lead).basis()[0].clone();
    let mut span = Subspace::span(k, h, std::slice::from_ref(&v));
    let mut w = v;
    for _ in 0..h {
        w = w.iter().map(|&x| k.frob(x, 2)).collect();
        span = span.sum(&Subspace::span(k, h, &[w.clone()]));
    }
    let r = span.dim();
    let mut expected_eo = vec![0; p * h - r];
    expected_eo.extend(std::iter::repeat_n(1, r));
    let mut expected_words = WordMultiset::new();
    expected_words.add("fv", p * h - 2 * r)?;
    let long = format!("{}vv{}ff", "vf".repeat(r - 1), "fv".repeat(r - 1));
    expected_words.add(&long, 1)?;
    Ok(LargeAReport {
        a,
        r: Some(r),
        expected_eo,
        expected_words,
        eo,
        words,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn h1_classes() {
        let c = classify_h1(5, 2).unwrap();
        assert_eq!((c.ell, c.b), (2, 1));
        assert_eq!(c.words, WordMultiset::parse("f^3v^3:1, f^2v^2:1").unwrap());
        assert_eq!(
            classify_h1(5, 5).unwrap().words,
            WordMultiset::parse("fv:5").unwrap()
        );
        assert!(classify_h1(5, 3).is_err());
        assert!(classify_h1(5, 1).is_err());
    }

    #[test]
    fn h1_p3_against_module() {
        let k = Field::prime(3).unwrap();
        let d = RMatrix::scalar(&k, 1, &RElement::new(&k, vec![0, 0, 1]));
        let m = AdmissibleCoords::superspecial(d).unwrap().build().unwrap();
        assert_eq!(m.kraft_words().unwrap(), classify_h1(3, 2).unwrap().words);
        assert_eq!(
            m.kraft_words().unwrap(),
            WordMultiset::parse("f^2v^2:1, fv:1").unwrap()
        );
    }

    #[test]
    fn family_dimensions() {
        let k = Field::prime(3).unwrap();
        assert_eq!(superspecial_family(&k, 1).len(), 1);
        assert_eq!(superspecial_family(&k, 2).len(), 4);
        let k2 = Field::prime(2).unwrap();
        assert_eq!(superspecial_family(&k2, 2).len(), 3);
    }

    #[test]
    fn parity_p3_h1_exhaustive() {
        let k = Field::prime(3).unwrap();
        let rep = verify_parity_theorems(&k, 1, ParityMode::Exhaustive).unwrap();
        assert!(rep.ok(), "{:?}", rep.violations);
        assert_eq!(rep.a_counts.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn delta_identity_gives_fpvp() {
        let k = Field::prime(3).unwrap();
        // delta I is not tilde-symmetric; use the alpha = 1 skew block instead
        let mut d = RMatrix::zeros(&k, 2, 2);
        d.e[0][1] = RElement::new(&k, vec![0, 1, 0]);
        d.e[1][0] = RElement::new(&k, vec![0, 2, 1]);
        let c = AdmissibleCoords::superspecial(d).unwrap();
        assert_eq!(c.a_from_d(), 2);
        let m = c.build().unwrap();
        assert_eq!(
            m.kraft_words().unwrap(),
            WordMultiset::parse("f^3v^3:2").unwrap()
        );
    }

    #[test]
    fn large_a_rank_one() {
        let k = Field::prime(3).unwrap();
        let mut d = RMatrix::zeros(&k, 2, 2);
        d.e[0][0] = RElement::new(&k, vec![0, 0, 1]);
        let rep = classify_large_a(&AdmissibleCoords::superspecial(d).unwrap()).unwrap();
        assert_eq!(rep.r, Some(1));
        assert_eq!(rep.eo, vec![0, 0, 0, 0, 0, 1]);
        assert!(rep.matches(), "{rep:?}");
    }
}
