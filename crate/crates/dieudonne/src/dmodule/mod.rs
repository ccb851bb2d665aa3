//! Dieudonne modules of finite commutative p-group schemes.
//!
//! `F(v) = A v^(p)` and `V(v) = W v^(1/p)` with `A`, `W` the stored matrices.
//! A pairing `P` means `<x, y> = x^t P y`.

mod construct;
mod duality;
mod filtration;
pub mod words;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{extension, Embedding, Field, FieldRef, FieldSpec};
use crate::linalg::{Matrix, Subspace};
use crate::semilinear::{MatrixJson, SemilinearMap};

pub use construct::{
    module_from_eo, module_from_words, module_from_words_paired, oort_indices, standard_pairing,
    SELF_DUAL_DEGREES,
};
pub use duality::find_pairing;
pub use filtration::{is_elementary_sequence, CanonicalFiltration};
pub use words::WordMultiset;

#[derive(Clone, Debug, PartialEq)]
pub struct DModule {
    pub field: FieldRef,
    pub n: usize,
    pub f: Matrix,
    pub v: Matrix,
    pub pairing: Option<Matrix>,
    pub gamma: Option<Matrix>,
}

/// Outcome of checking the module axioms; `None` means not applicable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub fv_zero: bool,
    pub vf_zero: bool,
    pub pairing_alternating: Option<bool>,
    pub pairing_nondegenerate: Option<bool>,
    pub pairing_compatible: Option<bool>,
    pub gamma_order_p: Option<bool>,
    pub gamma_commutes: Option<bool>,
    pub gamma_preserves_pairing: Option<bool>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.fv_zero
            && self.vf_zero
            && [
                self.pairing_alternating,
                self.pairing_nondegenerate,
                self.pairing_compatible,
                self.gamma_order_p,
                self.gamma_commutes,
                self.gamma_preserves_pairing,
            ]
            .iter()
            .all(|x| x.unwrap_or(true))
    }
}

/// The three canonical summands.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub etale: DModule,
    pub multiplicative: DModule,
    pub local_local: DModule,
    pub etale_space: Subspace,
    pub mult_space: Subspace,
    pub ll_space: Subspace,
}

impl DModule {
    pub fn new(f: Matrix, v: Matrix) -> Result<DModule> {
        if !f.is_square() || !v.is_square() || f.rows != v.rows {
            return Err(Error::Dimension(
                "F and V must be square of equal size".into(),
            ));
        }
        Ok(DModule {
            field: f.field.clone(),
            n: f.rows,
            f,
            v,
            pairing: None,
            gamma: None,
        })
    }

    pub fn with_pairing(mut self, p: Matrix) -> DModule {
        self.pairing = Some(p);
        self
    }

    pub fn with_gamma(mut self, g: Matrix) -> DModule {
        self.gamma = Some(g);
        self
    }

    pub fn zero(field: &FieldRef) -> DModule {
        DModule::new(Matrix::zeros(field, 0, 0), Matrix::zeros(field, 0, 0)).unwrap()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn frobenius(&self) -> SemilinearMap {
        SemilinearMap::new(self.f.clone(), 1)
    }

    pub fn verschiebung(&self) -> SemilinearMap {
        SemilinearMap::new(self.v.clone(), -1)
    }

    pub fn apply_f(&self, x: &[u64]) -> Vec<u64> {
        self.frobenius().apply(x)
    }

    pub fn apply_v(&self, x: &[u64]) -> Vec<u64> {
        self.verschiebung().apply(x)
    }

    pub fn verify(&self) -> VerifyReport {
        let fv_zero = self.f.mul(&self.v.frob(1)).is_zero();
        let vf_zero = self.v.mul(&self.f.frob(-1)).is_zero();
        let mut rep = VerifyReport {
            fv_zero,
            vf_zero,
            pairing_alternating: None,
            pairing_nondegenerate: None,
            pairing_compatible: None,
            gamma_order_p: None,
            gamma_commutes: None,
            gamma_preserves_pairing: None,
        };
        if let Some(p) = &self.pairing {
            rep.pairing_alternating = Some(p.is_alternating());
            rep.pairing_nondegenerate = Some(p.rank() == self.n);
            rep.pairing_compatible =
                Some(self.f.transpose().mul(p) == p.frob(1).mul(&self.v.frob(1)));
        }
        if let Some(g) = &self.gamma {
            let id = Matrix::identity(&self.field, self.n);
            rep.gamma_order_p = Some(g.pow(self.p()) == id);
            let fc = self.f.mul(&g.frob(1)) == g.mul(&self.f);
            let vc = self.v.mul(&g.frob(-1)) == g.mul(&self.v);
            rep.gamma_commutes = Some(fc && vc);
            if let Some(p) = &self.pairing {
                rep.gamma_preserves_pairing = Some(g.transpose().mul(p).mul(g) == *p);
            }
        }
        rep
    }

    pub fn ker_f(&self) -> Subspace {
        self.frobenius().kernel()
    }

    pub fn im_f(&self) -> Subspace {
        self.frobenius().image()
    }

    pub fn ker_v(&self) -> Subspace {
        self.verschiebung().kernel()
    }

    pub fn im_v(&self) -> Subspace {
        self.verschiebung().image()
    }

    pub fn is_bt1(&self) -> bool {
        self.ker_f() == self.im_v() && self.im_f() == self.ker_v()
    }

    pub fn a_number(&self) -> usize {
        self.ker_f().intersect(&self.ker_v()).dim()
    }

    pub fn p_rank(&self) -> usize {
        self.frobenius().pow(self.n.max(1) as u32).rank()
    }

    /// Image of a subspace under `F`.
    pub fn f_image(&self, s: &Subspace) -> Subspace {
        self.frobenius().image_of(s)
    }

    /// `V^{-1}(s)`.
    pub fn v_preimage(&self, s: &Subspace) -> Subspace {
        self.verschiebung().preimage_of(s)
    }

    pub fn is_stable(&self, s: &Subspace) -> bool {
        let fs = s.contains_space(&self.f_image(s));
        let vs = s.contains_space(&self.verschiebung().image_of(s));
        let gs = self
            .gamma
            .as_ref()
            .is_none_or(|g| s.contains_space(&s.image(g)));
        fs && vs && gs
    }

    /// Submodule on an F-, V- and gamma-stable subspace, in its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> DModule {
        let basis = s.basis();
        let d = basis.len();
        let build = |img: &dyn Fn(&[u64]) -> Vec<u64>| {
            let mut m = Matrix::zeros(&self.field, d, d);
            for (j, b) in basis.iter().enumerate() {
                for (i, c) in s.coords(&img(b)).into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        };
        // F(sum c_j b_j) = sum c_j^p A b_j^(p), so columns are coords of A b_j^(p)
        let f = build(&|b| self.apply_f(b));
        let v = build(&|b| self.apply_v(b));
        let gamma = self.gamma.as_ref().map(|g| build(&|b| g.mul_vec(b)));
        let pairing = self.pairing.as_ref().map(|p| {
            let bm = s.basis_matrix();
            bm.mul(p).mul(&bm.transpose())
        });
        DModule {
            field: self.field.clone(),
            n: d,
            f,
            v,
            pairing,
            gamma,
        }
    }

    /// Quotient by a stable subspace; the pairing is dropped.
    pub fn quotient(&self, s: &Subspace) -> DModule {
        let reps = s.complement_basis();
        let d = reps.len();
        let build = |img: &dyn Fn(&[u64]) -> Vec<u64>| {
            let mut m = Matrix::zeros(&self.field, d, d);
            for (j, b) in reps.iter().enumerate() {
                for (i, c) in s.quotient_coords(&img(b)).into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        };
        let f = build(&|b| self.apply_f(b));
        let v = build(&|b| self.apply_v(b));
        let gamma = self.gamma.as_ref().map(|g| build(&|b| g.mul_vec(b)));
        DModule {
            field: self.field.clone(),
            n: d,
            f,
            v,
            pairing: None,
            gamma,
        }
    }

    /// Subquotient `big / small` with `small` inside `big`.
    pub fn subquotient(&self, small: &Subspace, big: &Subspace) -> DModule {
        let sub = self.restrict(big);
        let small_in_big: Vec<Vec<u64>> = small.basis().iter().map(|v| big.coords(v)).collect();
        let s = Subspace::span(&self.field, big.dim(), &small_in_big);
        sub.quotient(&s)
    }

    pub fn decompose(&self) -> Result<Decomposition> {
        let rep = self.verify();
        if !(rep.fv_zero && rep.vf_zero) {
            return Err(Error::Invariant("FV = VF = 0 fails".into()));
        }
        let (et, ker_f) = self.frobenius().stable_image_kernel()?;
        let (mu, ker_v) = self.verschiebung().stable_image_kernel()?;
        let ll = ker_f.intersect(&ker_v);
        if et.dim() + mu.dim() + ll.dim() != self.n {
            return Err(Error::Invariant("summand dimensions do not add up".into()));
        }
        Ok(Decomposition {
            etale: self.restrict(&et),
            multiplicative: self.restrict(&mu),
            local_local: self.restrict(&ll),
            etale_space: et,
            mult_space: mu,
            ll_space: ll,
        })
    }

    pub fn local_local(&self) -> Result<DModule> {
        Ok(self.decompose()?.local_local)
    }

    pub fn is_local_local(&self) -> bool {
        let n = self.n.max(1) as u32;
        self.frobenius().pow(n).matrix.is_zero() && self.verschiebung().pow(n).matrix.is_zero()
    }

    /// Cartier dual with dual basis; `<x, phi> = phi(x)` is compatible.
    pub fn dual(&self) -> DModule {
        let f = self.v.frob(1).transpose();
        let v = self.f.frob(-1).transpose();
        let gamma = self
            .gamma
            .as_ref()
            .map(|g| g.inverse().expect("invertible gamma").transpose());
        DModule {
            field: self.field.clone(),
            n: self.n,
            f,
            v,
            pairing: None,
            gamma,
        }
    }

    /// Whether a compatible nondegenerate alternating pairing exists, possibly
    /// after extending scalars to degree 2 or 4.
    pub fn is_self_dual(&self) -> bool {
        construct::SELF_DUAL_DEGREES.iter().any(|&s| {
            self.extend_scalars(s)
                .is_ok_and(|m| find_pairing(&m).is_some())
        })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &DModule) -> DModule {
        let n = self.n + o.n;
        let block = |a: &Matrix, b: &Matrix| {
            let mut m = Matrix::zeros(&self.field, n, n);
            m.set_block(0, 0, a);
            m.set_block(self.n, self.n, b);
            m
        };
        let pairing = match (&self.pairing, &o.pairing) {
            (Some(a), Some(b)) => Some(block(a, b)),
            _ => None,
        };
        let gamma = match (&self.gamma, &o.gamma) {
            (Some(a), Some(b)) => Some(block(a, b)),
            _ => None,
        };
        DModule {
            field: self.field.clone(),
            n,
            f: block(&self.f, &o.f),
            v: block(&self.v, &o.v),
            pairing,
            gamma,
        }
    }

    /// Change of basis: columns of `s` are the new basis vectors.
    pub fn change_basis(&self, s: &Matrix) -> DModule {
        let si = s.inverse().expect("invertible change of basis");
        let f = si.mul(&self.f).mul(&s.frob(1));
        let v = si.mul(&self.v).mul(&s.frob(-1));
        let gamma = self.gamma.as_ref().map(|g| si.mul(g).mul(s));
        let pairing = self.pairing.as_ref().map(|p| s.transpose().mul(p).mul(s));
        DModule {
            field: self.field.clone(),
            n: self.n,
            f,
            v,
            pairing,
            gamma,
        }
    }

    pub fn extend_scalars(&self, s: u32) -> Result<DModule> {
        if s == 0 {
            return Err(Error::Invalid("extension degree must be positive".into()));
        }
        if s == 1 {
            return Ok(self.clone());
        }
        let big = extension(&self.field, s)?;
        let e = Embedding::new(&self.field, &big)?;
        Ok(DModule {
            field: big,
            n: self.n,
            f: self.f.embed(&e),
            v: self.v.embed(&e),
            pairing: self.pairing.as_ref().map(|m| m.embed(&e)),
            gamma: self.gamma.as_ref().map(|m| m.embed(&e)),
        })
    }

    pub fn to_json(&self) -> DModuleJson {
        DModuleJson {
            field: self.field.spec().clone(),
            n: self.n,
            f: MatrixJson::from_matrix(&self.f),
            v: MatrixJson::from_matrix(&self.v),
            pairing: self.pairing.as_ref().map(MatrixJson::from_matrix),
            gamma: self.gamma.as_ref().map(MatrixJson::from_matrix),
        }
    }

    pub fn from_json(j: &DModuleJson) -> Result<DModule> {
        let field = Field::from_spec(j.field.clone())?;
        let f = j.f.to_matrix(&field)?;
        let v = j.v.to_matrix(&field)?;
        let mut m = DModule::new(f, v)?;
        if m.n != j.n {
            return Err(Error::Dimension(format!(
                "declared n = {} but matrices have {}",
                j.n, m.n
            )));
        }
        m.pairing = j
            .pairing
            .as_ref()
            .map(|x| x.to_matrix(&field))
            .transpose()?;
        m.gamma = j.gamma.as_ref().map(|x| x.to_matrix(&field)).transpose()?;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DModuleJson {
    pub field: FieldSpec,
    pub n: usize,
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "V")]
    pub v: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<MatrixJson>,
}

/// `M(Z/p)`: `F = 1`, `V = 0`.
pub fn constant_module(field: &FieldRef) -> DModule {
    DModule::new(Matrix::identity(field, 1), Matrix::zeros(field, 1, 1)).unwrap()
}

/// `M(mu_p)`: `F = 0`, `V = 1`.
pub fn multiplicative_module(field: &FieldRef) -> DModule {
    DModule::new(Matrix::zeros(field, 1, 1), Matrix::identity(field, 1)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_module_passes() {
        let k = Field::prime(3).unwrap();
        let m = constant_module(&k);
        assert!(m.verify().all_pass());
        assert_eq!(m.p_rank(), 1);
        let d = m.decompose().unwrap();
        assert_eq!((d.etale.n, d.multiplicative.n, d.local_local.n), (1, 0, 0));
        assert_eq!(m.dual(), multiplicative_module(&k));
    }

    #[test]
    fn fv_relation_violation_detected() {
        let k = Field::prime(3).unwrap();
        let m = DModule::new(Matrix::identity(&k, 1), Matrix::identity(&k, 1)).unwrap();
        assert!(!m.verify().fv_zero);
    }

    #[test]
    fn zero_maps_are_not_bt1() {
        let k = Field::prime(5).unwrap();
        let m = DModule::new(Matrix::zeros(&k, 2, 2), Matrix::zeros(&k, 2, 2)).unwrap();
        assert!(!m.is_bt1());
    }

    #[test]
    fn block_sum_decomposes() {
        let k = Field::prime(3).unwrap();
        let fv = module_from_words(&WordMultiset::parse("fv:1").unwrap(), &k);
        let m = constant_module(&k)
            .direct_sum(&multiplicative_module(&k))
            .direct_sum(&fv);
        let d = m.decompose().unwrap();
        assert_eq!((d.etale.n, d.multiplicative.n, d.local_local.n), (1, 1, 2));
        assert!(d.local_local.is_local_local());
    }

    #[test]
    fn json_roundtrip() {
        let k = Field::new(3, 2).unwrap();
        let m = module_from_eo(&[0, 1], &k).unwrap();
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back: DModuleJson = serde_json::from_str(&j).unwrap();
        assert_eq!(DModule::from_json(&back).unwrap(), m);
    }
}
