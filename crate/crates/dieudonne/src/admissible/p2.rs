//! Characteristic two: admissible word multisets and EO types, witnesses,
//! and a census over symmetric `D = delta D_1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{admissible_report, AdmissibleCoords};
use crate::dmodule::{
    is_elementary_sequence, module_from_eo, module_from_words, module_from_words_paired,
    oort_indices, DModule, WordMultiset, SELF_DUAL_DEGREES,
};
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::gring::{RElement, RMatrix};
use crate::linalg::{Matrix, Subspace};
use crate::semilinear::{search_span, solve_fp_linear};

fn require_p2(k: &FieldRef) -> Result<()> {
    if k.p() != 2 {
        return Err(Error::Invalid("this construction is for p = 2".into()));
    }
    Ok(())
}

fn parse_block(b: &[u8], mut i: usize) -> Option<usize> {
    while b.get(i..i + 2) == Some(b"vf") {
        i += 2;
    }
    if b.get(i..i + 2) != Some(b"vv") {
        return None;
    }
    i += 2;
    while b.get(i..i + 2) == Some(b"fv") {
        i += 2;
    }
    if b.get(i..i + 2) != Some(b"ff") {
        return None;
    }
    Some(i + 2)
}

/// Whether some rotation of `word` is a concatenation of blocks
/// `(vf)^e2 v^2 (fv)^e1 f^2`.
pub fn is_block_concatenation(word: &str) -> bool {
    let n = word.len();
    let doubled = format!("{word}{word}");
    (0..n).any(|s| {
        let b = &doubled.as_bytes()[s..s + n];
        let mut i = 0;
        while i < n {
            match parse_block(b, i) {
                Some(j) => i = j,
                None => return false,
            }
        }
        true
    })
}

/// Every word other than `fv` is a block concatenation, `fv` has even
/// multiplicity and the multiset is self-dual.
pub fn words_are_p2_shaped(w: &WordMultiset) -> bool {
    w.mult("fv").is_multiple_of(2)
        && w.is_self_dual()
        && w.iter()
            .filter(|(x, _)| x.as_str() != "fv")
            .all(|(x, _)| is_block_concatenation(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum P2Input {
    Words(WordMultiset),
    Eo(Vec<usize>),
}

#[derive(Clone, Debug, Serialize)]
pub struct P2Verdict {
    pub admissible: bool,
    pub reasons: Vec<String>,
    pub h: usize,
    #[serde(skip)]
    pub witness: Option<DModule>,
    pub witness_words: Option<WordMultiset>,
    pub witness_eo: Option<Vec<usize>>,
}

/// `M(fv) (x) R` with `D_k` on the first factor and `R` on the second.
pub fn fv_tensor_r(k: &FieldRef) -> Result<DModule> {
    require_p2(k)?;
    let base = module_from_words_paired(&WordMultiset::parse("fv:1")?, k)?;
    if base.field.order() != k.order() {
        return Err(Error::Invariant(
            "M(fv) needs a larger field for its pairing".into(),
        ));
    }
    let kron = |a: &Matrix, b: &Matrix| {
        let mut out = Matrix::zeros(k, a.rows * b.rows, a.cols * b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                for s in 0..b.rows {
                    for t in 0..b.cols {
                        out.set(
                            i * b.rows + s,
                            j * b.cols + t,
                            k.mul(a.get(i, j), b.get(s, t)),
                        );
                    }
                }
            }
        }
        out
    };
    let id2 = Matrix::identity(k, 2);
    let gamma_r = RMatrix::scalar(k, 1, &RElement::gamma(k)).regular();
    let form_r = {
        let pow = |l: usize| RElement::delta(k).pow(l as u64);
        let mut t = Matrix::zeros(k, 2, 2);
        for l in 0..2 {
            for lp in 0..2 {
                t.set(l, lp, super::constant_term(&pow(l).mul(&pow(lp).tilde())));
            }
        }
        t
    };
    let pairing = base.pairing.as_ref().expect("paired");
    let m = DModule::new(kron(&base.f, &id2), kron(&base.v, &id2))?
        .with_pairing(kron(pairing, &form_r))
        .with_gamma(kron(&id2, &gamma_r));
    Ok(m)
}

/// `delta = M -> M/N = N^dual -> N` for a maximal isotropic submodule `N`
/// and a symmetric `D_k`-isomorphism, found by solving for it.
pub fn lemma_r_structure(m: &DModule, n: &Subspace) -> Result<DModule> {
    require_p2(&m.field)?;
    let pm = m
        .pairing
        .as_ref()
        .ok_or_else(|| Error::Invalid("module needs a pairing".into()))?;
    let d = m.n;
    if 2 * n.dim() != d || !m.is_stable(n) {
        return Err(Error::Invalid(
            "N must be a stable subspace of half dimension".into(),
        ));
    }
    let nb = n.basis_matrix();
    if !nb.mul(pm).mul(&nb.transpose()).is_zero() {
        return Err(Error::Invalid("N is not isotropic".into()));
    }
    for s in SELF_DUAL_DEGREES {
        let ms = m.extend_scalars(s)?;
        let k = ms.field.clone();
        let ns = if s == 1 {
            n.clone()
        } else {
            n.embed(&crate::field::Embedding::new(&m.field, &k)?)
        };
        let h = ns.dim();
        let iota = ns.basis_matrix().transpose();
        let mut pi = Matrix::zeros(&k, h, d);
        for j in 0..d {
            let mut e = vec![0; d];
            e[j] = 1;
            for (i, c) in ns.quotient_coords(&e).into_iter().enumerate() {
                pi.set(i, j, c);
            }
        }
        let pk = ms.pairing.clone().expect("paired");
        let delta_of = |x: &[u64]| {
            let phi = Matrix {
                field: k.clone(),
                rows: h,
                cols: h,
                data: x.to_vec(),
            };
            iota.mul(&phi).mul(&pi)
        };
        let sols = solve_fp_linear(&k, h * h, 4 * d * d, |x| {
            let dl = delta_of(x);
            let mut out = dl.mul(&ms.f).sub(&ms.f.mul(&dl.frob(1))).data;
            out.extend(dl.mul(&ms.v).sub(&ms.v.mul(&dl.frob(-1))).data);
            out.extend(dl.transpose().mul(&pk).sub(&pk.mul(&dl)).data);
            out.extend(vec![0; d * d]);
            out
        });
        if let Some(x) = search_span(&k, &sols, |x| delta_of(x).rank() == h) {
            let g = Matrix::identity(&k, d).add(&delta_of(&x));
            return Ok(ms.with_gamma(g));
        }
    }
    Err(Error::Invariant(
        "no symmetric isomorphism N^dual -> N found".into(),
    ))
}

/// Oort's module for `[0,..,0, psi_{h+1}, .., psi_{2h}]` with the
/// `R`-structure from `N = span(X_i + Y_i, Y_{h+i})`.
fn eo_witness(psi: &[usize], k: &FieldRef) -> Result<DModule> {
    let h = psi.len() / 2;
    let m = module_from_eo(psi, k)?;
    let (ms, ns) = oort_indices(psi)?;
    let vec_of = |idx: &[usize]| {
        let mut v = vec![0; m.n];
        for &i in idx {
            v[i - 1] = 1;
        }
        v
    };
    let mut gens = Vec::new();
    for i in 0..h {
        gens.push(vec_of(&[ms[i], ns[i]]));
        gens.push(vec_of(&[ns[h + i]]));
    }
    let n = Subspace::span(k, m.n, &gens);
    lemma_r_structure(&m, &n)
}

/// Decide the necessary conditions and build a witness when they hold.
pub fn p2_admissibility(input: &P2Input, k: &FieldRef) -> Result<P2Verdict> {
    require_p2(k)?;
    let mut reasons = Vec::new();
    let (h, witness) = match input {
        P2Input::Words(w) => {
            let dim = w.dimension();
            if dim % 4 != 0 {
                reasons.push(format!("dimension {dim} is not a multiple of 4"));
            }
            if w.mult("fv") % 2 == 1 {
                reasons.push("fv has odd multiplicity".into());
            }
            if !w.is_self_dual() {
                reasons.push("multiset is not self-dual".into());
            }
            for (x, _) in w.iter().filter(|(x, _)| x.as_str() != "fv") {
                if !is_block_concatenation(x) {
                    reasons.push(format!(
                        "{x} is not a concatenation of (vf)^a v^2 (fv)^b f^2"
                    ));
                }
            }
            let h = dim / 4;
            if !reasons.is_empty() {
                (h, None)
            } else {
                let pairs = w.mult("fv") / 2;
                let mut rest = w.clone();
                rest.0.remove("fv");
                let mut acc: Option<DModule> = None;
                for _ in 0..pairs {
                    let t = fv_tensor_r(k)?;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.direct_sum(&t),
                    });
                }
                if !rest.is_empty() {
                    let psi = module_from_words(&rest, k).eo_sequence()?;
                    let wit = eo_witness(&psi, k)?;
                    acc = Some(match acc {
                        None => wit,
                        Some(a) => unify(a, wit)?,
                    });
                }
                (h, acc)
            }
        }
        P2Input::Eo(psi) => {
            if psi.is_empty() || psi.len() % 2 == 1 {
                reasons.push("length must be even and positive".into());
            } else if !is_elementary_sequence(psi) {
                reasons.push("not an elementary sequence".into());
            }
            let h = psi.len() / 2;
            if reasons.is_empty() && psi[..h].iter().any(|&x| x != 0) {
                reasons.push(format!("does not start with {h} zeroes"));
            }
            let wit = if reasons.is_empty() {
                Some(eo_witness(psi, k)?)
            } else {
                None
            };
            (h, wit)
        }
    };
    let (witness_words, witness_eo) = match &witness {
        Some(m) => {
            let rep = admissible_report(m, h)?;
            if !rep.all() {
                return Err(Error::Invariant(format!(
                    "witness fails the admissibility checks: {rep:?}"
                )));
            }
            (Some(m.kraft_words()?), Some(m.eo_sequence()?))
        }
        None => (None, None),
    };
    Ok(P2Verdict {
        admissible: reasons.is_empty(),
        reasons,
        h,
        witness,
        witness_words,
        witness_eo,
    })
}

/// Direct sum after bringing both summands to a common field.
fn unify(a: DModule, b: DModule) -> Result<DModule> {
    let (ra, rb) = (a.field.degree(), b.field.degree());
    let l = ra.max(rb);
    if l % ra != 0 || l % rb != 0 {
        return Err(Error::Invalid("incompatible field degrees".into()));
    }
    Ok(a.extend_scalars(l / ra)?
        .direct_sum(&b.extend_scalars(l / rb)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub p: u64,
    pub h: usize,
    pub field: String,
    pub d: String,
    pub a: usize,
    pub eo: String,
    pub words: String,
}

fn encode_d(k: &FieldRef, d1: &Matrix) -> String {
    let rows: Vec<String> = (0..d1.rows)
        .map(|i| {
            let r: Vec<String> = (0..d1.cols).map(|j| k.fmt_elem(d1.get(i, j))).collect();
            format!("[{}]", r.join(" "))
        })
        .collect();
    format!("delta*[{}]", rows.join(" "))
}

/// All symmetric `D_1` over `k` with `D = delta D_1`.
pub fn enumerate_p2(k: &FieldRef, h: usize) -> Result<Vec<CensusRow>> {
    require_p2(k)?;
    let q = k.order();
    let slots: Vec<(usize, usize)> = (0..h).flat_map(|i| (i..h).map(move |j| (i, j))).collect();
    let total = q
        .checked_pow(slots.len() as u32)
        .filter(|&t| t <= 1 << 16)
        .ok_or_else(|| Error::Bound("census too large".into()))?;
    let rows: Result<Vec<CensusRow>> = (0..total)
        .into_par_iter()
        .map(|mut t| {
            let mut d1 = Matrix::zeros(k, h, h);
            for &(i, j) in &slots {
                let c = t % q;
                t /= q;
                d1.set(i, j, c);
                d1.set(j, i, c);
            }
            let zero = Matrix::zeros(k, h, h);
            let d = RMatrix::from_expansion(k, &[zero, d1.clone()]);
            let c = AdmissibleCoords::superspecial(d)?;
            let m = c.build()?;
            let eo = m.eo_sequence()?;
            Ok(CensusRow {
                p: 2,
                h,
                field: format!("F_{q}"),
                d: encode_d(k, &d1),
                a: c.a_from_d(),
                eo: format!("{eo:?}"),
                words: m.kraft_words()?.to_string(),
            })
        })
        .collect();
    rows
}

pub fn census_csv(rows: &[CensusRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Fixture(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Fixture(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Fixture(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn block_shapes() {
        assert!(is_block_concatenation("vvff"));
        assert!(is_block_concatenation("ffvv"));
        assert!(is_block_concatenation("vfvvfvff"));
        assert!(is_block_concatenation("vvffvvff"));
        assert!(!is_block_concatenation("fffvvv"));
        assert!(!is_block_concatenation("fv"));
    }

    #[test]
    fn fv_pair_is_admissible() {
        let k = Field::prime(2).unwrap();
        let v =
            p2_admissibility(&P2Input::Words(WordMultiset::parse("fv:2").unwrap()), &k).unwrap();
        assert!(v.admissible);
        assert_eq!(
            v.witness_words.unwrap(),
            WordMultiset::parse("fv:2").unwrap()
        );
        let odd =
            p2_admissibility(&P2Input::Words(WordMultiset::parse("fv:1").unwrap()), &k).unwrap();
        assert!(!odd.admissible && odd.witness.is_none());
    }

    #[test]
    fn eo_witness_example() {
        let k = Field::prime(2).unwrap();
        let v = p2_admissibility(&P2Input::Eo(vec![0, 0, 0, 1]), &k).unwrap();
        assert!(v.admissible, "{:?}", v.reasons);
        assert_eq!(v.witness_eo.unwrap(), vec![0, 0, 0, 1]);
        let bad = p2_admissibility(&P2Input::Eo(vec![0, 1, 1, 1]), &k).unwrap();
        assert!(!bad.admissible);
    }

    #[test]
    fn mixed_words_witness() {
        let k = Field::prime(2).unwrap();
        let w = WordMultiset::parse("f^2v^2:1, fv:2").unwrap();
        let v = p2_admissibility(&P2Input::Words(w.clone()), &k).unwrap();
        assert!(v.admissible);
        assert_eq!(v.witness_words.unwrap(), w);
    }

    #[test]
    fn census_h1() {
        let k = Field::prime(2).unwrap();
        let rows = enumerate_p2(&k, 1).unwrap();
        let mut eos: Vec<String> = rows.iter().map(|r| r.eo.clone()).collect();
        eos.sort();
        assert_eq!(eos, vec!["[0, 0]", "[0, 1]"]);
        assert!(census_csv(&rows)
            .unwrap()
            .starts_with("p,h,field,d,a,eo,words"));
    }
}
