//! Free `D_k[G]`-modules in symplectic coordinates `F = [[0, B], [0, D]]`.

mod p2;
mod theorems;

pub use p2::{
    census_csv, enumerate_p2, fv_tensor_r, lemma_r_structure, p2_admissibility,
    words_are_p2_shaped, CensusRow, P2Input, P2Verdict,
};
pub use theorems::{
    classify_h1, classify_large_a, expected_words_for_power, superspecial_candidates,
    superspecial_family, verify_h1_classification, verify_large_a, verify_parity_theorems, H1Class,
    LargeAReport, LargeASweep, ParityMode, ParityReport,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dmodule::DModule;
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::gring::{RElement, RMatrix, RStructure};
use crate::linalg::Matrix;
use crate::semilinear::SemilinearMap;

/// `B`, `D` over `R` with `h = B.rows`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleCoords {
    pub field: FieldRef,
    pub h: usize,
    pub b: RMatrix,
    pub d: RMatrix,
}

/// Properties (1)-(4) of a free self-dual module of rank `2h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub free_rank_2h: bool,
    pub self_dual_local_local_bt1: bool,
    pub gamma_preserves_pairing: bool,
    pub images_free_rank_h: bool,
}

impl AdmissibleReport {
    pub fn all(&self) -> bool {
        self.free_rank_2h
            && self.self_dual_local_local_bt1
            && self.gamma_preserves_pairing
            && self.images_free_rank_h
    }
}

/// `(a)_0`: the coefficient of `gamma^0`, i.e. `sum (-1)^i a_i`.
pub fn constant_term(a: &RElement) -> u64 {
    let k = &a.field;
    a.c.iter().enumerate().fold(0, |acc, (i, &x)| {
        if i % 2 == 0 {
            k.add(acc, x)
        } else {
            k.sub(acc, x)
        }
    })
}

/// Matrix of `<m, n> = (m^t J n~)_0` on `R^{2h}` in the basis `delta^l e_j`.
pub fn standard_r_pairing(field: &FieldRef, h: usize) -> Matrix {
    let p = field.p() as usize;
    let n = 2 * h;
    let pow = |l: usize| RElement::delta(field).pow(l as u64);
    let mut table = vec![vec![0; p]; p];
    for (l, row) in table.iter_mut().enumerate() {
        for (lp, x) in row.iter_mut().enumerate() {
            *x = constant_term(&pow(l).mul(&pow(lp).tilde()));
        }
    }
    let mut out = Matrix::zeros(field, n * p, n * p);
    for j in 0..h {
        for l in 0..p {
            for lp in 0..p {
                let v = table[l][lp];
                out.set(j * p + l, (h + j) * p + lp, v);
                out.set((h + j) * p + l, j * p + lp, field.neg(v));
            }
        }
    }
    out
}

fn block2(field: &FieldRef, tl: &RMatrix, tr: &RMatrix, bl: &RMatrix, br: &RMatrix) -> RMatrix {
    let h = tl.rows;
    let mut m = RMatrix::zeros(field, 2 * h, 2 * h);
    for i in 0..h {
        for j in 0..h {
            m.e[i][j] = tl.e[i][j].clone();
            m.e[i][h + j] = tr.e[i][j].clone();
            m.e[h + i][j] = bl.e[i][j].clone();
            m.e[h + i][h + j] = br.e[i][j].clone();
        }
    }
    m
}

impl AdmissibleCoords {
    /// General coordinates; checks the relation, freeness and nilpotence.
    pub fn new(b: RMatrix, d: RMatrix) -> Result<AdmissibleCoords> {
        let field = b.field.clone();
        let h = b.rows;
        if b.cols != h || d.rows != h || d.cols != h {
            return Err(Error::Dimension("B and D must be h x h".into()));
        }
        let c = AdmissibleCoords { field, h, b, d };
        let lhs = c.d.tilde().transpose().mul(&c.b);
        let rhs = c.b.tilde().transpose().mul(&c.d);
        if lhs != rhs {
            return Err(Error::Invariant("D~^t B != B~^t D".into()));
        }
        let p = c.field.p() as usize;
        let mut cols = RMatrix::zeros(&c.field, 2 * h, h);
        for i in 0..h {
            for j in 0..h {
                cols.e[i][j] = c.b.e[i][j].clone();
                cols.e[h + i][j] = c.d.e[i][j].clone();
            }
        }
        if cols.regular().rank() != h * p {
            return Err(Error::Invariant(
                "columns of F do not span a free module of rank h".into(),
            ));
        }
        if !c.is_p_nilpotent() {
            return Err(Error::Invariant("F is not p-nilpotent".into()));
        }
        Ok(c)
    }

    /// `B = I`, `delta | D`, `D~^t = D`.
    pub fn superspecial(d: RMatrix) -> Result<AdmissibleCoords> {
        if !d.divisible_by_delta() {
            return Err(Error::Invariant("delta does not divide D".into()));
        }
        if d.tilde().transpose() != d {
            return Err(Error::Invariant("D~^t != D".into()));
        }
        let h = d.rows;
        AdmissibleCoords::new(RMatrix::identity(&d.field, h), d)
    }

    /// Move superspecial coordinates by `diag(T, U)` with `T^t U~ = I`;
    /// the result has a general `B`.
    pub fn twisted(&self, u: &RMatrix) -> Result<AdmissibleCoords> {
        let b = u.tilde().transpose().mul(&self.b).mul(&u.frob(1));
        let d = u.inverse()?.mul(&self.d).mul(&u.frob(1));
        AdmissibleCoords::new(b, d)
    }

    pub fn p(&self) -> usize {
        self.field.p() as usize
    }

    pub fn f_matrix(&self) -> RMatrix {
        let z = RMatrix::zeros(&self.field, self.h, self.h);
        block2(&self.field, &z, &self.b, &z, &self.d)
    }

    pub fn v_matrix(&self) -> RMatrix {
        let z = RMatrix::zeros(&self.field, self.h, self.h);
        let tl = self.d.tilde().transpose().frob(-1);
        let tr = self.b.tilde().transpose().frob(-1).neg();
        block2(&self.field, &tl, &tr, &z, &z)
    }

    fn is_p_nilpotent(&self) -> bool {
        let n = 2 * self.h * self.p();
        let f = SemilinearMap::new(self.f_matrix().regular(), 1);
        f.pow(n as u32).matrix.is_zero()
    }

    /// The module `R^{2h}` over `k` of dimension `2hp`.
    pub fn build(&self) -> Result<DModule> {
        let f = self.f_matrix().regular();
        let v = self.v_matrix().regular();
        let n = f.rows;
        let g = RMatrix::scalar(&self.field, 2 * self.h, &RElement::gamma(&self.field)).regular();
        let m = DModule::new(f, v)?
            .with_pairing(standard_r_pairing(&self.field, self.h))
            .with_gamma(g);
        debug_assert_eq!(m.n, n);
        let rep = m.verify();
        if !rep.all_pass() {
            return Err(Error::Invariant(format!(
                "coordinates give an invalid module: {rep:?}"
            )));
        }
        Ok(m)
    }

    /// `dim_k ker(D : R^h -> R^h)`.
    pub fn a_from_d(&self) -> usize {
        self.h * self.p() - self.d.regular().rank()
    }

    /// `(alpha, D_alpha)` with `D = sum_{i >= alpha} delta^i D_i`.
    pub fn leading(&self) -> (usize, Matrix) {
        let alpha = self.d.valuation();
        let lead = if alpha < self.p() {
            self.d.coefficient(alpha)
        } else {
            Matrix::zeros(&self.field, self.h, self.h)
        };
        (alpha, lead)
    }

    /// Leading matrix is symmetric for even `alpha`, skew for odd.
    pub fn leading_parity_holds(&self) -> bool {
        let (alpha, lead) = self.leading();
        if alpha % 2 == 0 {
            lead.transpose() == lead
        } else {
            lead.transpose() == lead.scale(self.field.neg(1))
        }
    }

    pub fn random_superspecial<G: Rng + ?Sized>(
        field: &FieldRef,
        h: usize,
        rng: &mut G,
    ) -> Result<AdmissibleCoords> {
        let basis = superspecial_family(field, h);
        let mut d = RMatrix::zeros(field, h, h);
        for b in &basis {
            let c = field.random(rng);
            d = d.add(&b.map(|x| x.scale(c)));
        }
        AdmissibleCoords::superspecial(d)
    }
}

/// Check properties (1)-(4) on a module with `G`-action of dimension `2hp`.
pub fn admissible_report(m: &DModule, h: usize) -> Result<AdmissibleReport> {
    let rs = RStructure::new(m.clone())?;
    let p = rs.p();
    let rep = m.verify();
    let free_rank_2h = m.n == 2 * h * p && rs.freeness_tests().free;
    let self_dual = rep.all_pass() && m.pairing.is_some() && m.is_bt1() && m.is_local_local();
    let gamma_ok = rep.gamma_preserves_pairing == Some(true);
    let image_free = |s: &crate::linalg::Subspace| {
        s.dim() == h * p && RStructure::new(m.restrict(s)).is_ok_and(|r| r.freeness_tests().free)
    };
    Ok(AdmissibleReport {
        free_rank_2h,
        self_dual_local_local_bt1: self_dual,
        gamma_preserves_pairing: gamma_ok,
        images_free_rank_h: image_free(&m.im_f()) && image_free(&m.im_v()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmodule::WordMultiset;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn scalar_d(k: &FieldRef, c: Vec<u64>) -> RMatrix {
        RMatrix::scalar(k, 1, &RElement::new(k, c))
    }

    #[test]
    fn zero_d_is_superspecial() {
        let k = Field::prime(3).unwrap();
        let c = AdmissibleCoords::superspecial(scalar_d(&k, vec![])).unwrap();
        let m = c.build().unwrap();
        assert_eq!(
            m.kraft_words().unwrap(),
            WordMultiset::parse("fv:3").unwrap()
        );
        assert_eq!(c.a_from_d(), 3);
        assert!(admissible_report(&m, 1).unwrap().all());
    }

    #[test]
    fn symmetric_valuation_two_at_p5() {
        let k = Field::prime(5).unwrap();
        let c = AdmissibleCoords::superspecial(scalar_d(&k, vec![0, 0, 1, 4, 1])).unwrap();
        let m = c.build().unwrap();
        assert_eq!(m.a_number(), 2);
        assert_eq!(c.a_from_d(), 2);
        assert_eq!(
            m.kraft_words().unwrap(),
            WordMultiset::parse("f^3v^3:1, f^2v^2:1").unwrap()
        );
    }

    #[test]
    fn odd_valuation_is_not_symmetric() {
        let k = Field::prime(5).unwrap();
        assert!(AdmissibleCoords::superspecial(scalar_d(&k, vec![0, 1])).is_err());
    }

    #[test]
    fn random_general_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let k = Field::prime(3).unwrap();
        for _ in 0..20 {
            let c = AdmissibleCoords::random_superspecial(&k, 2, &mut rng).unwrap();
            let u = RMatrix::random_invertible(&k, 2, &mut rng);
            let g = c.twisted(&u).unwrap();
            let m = g.build().unwrap();
            assert!(admissible_report(&m, 2).unwrap().all());
            assert_eq!(m.a_number(), c.build().unwrap().a_number());
            assert!(c.leading_parity_holds());
        }
    }

    #[test]
    fn pairing_is_gamma_invariant() {
        let k = Field::new(5, 2).unwrap();
        let p = standard_r_pairing(&k, 2);
        let g = RMatrix::scalar(&k, 4, &RElement::gamma(&k)).regular();
        assert_eq!(g.transpose().mul(&p).mul(&g), p);
        assert!(p.is_alternating());
        assert_eq!(p.rank(), 20);
    }
}
