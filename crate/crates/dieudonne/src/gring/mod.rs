//! The group ring `R = k[G] = k[delta]/(delta^p)` acting on Dieudonne modules.

mod element;
mod etale;
mod rmatrix;
mod smith;

pub use element::{random_one_unit, regular_matrix, RElement};
pub use etale::{
    extension_degrees, galois_matrix, matrix_order, nu, nu_inequalities_hold, split_coker_test,
    split_ker_test, EtaleReport, ExtensionDegrees, SplitReport,
};
pub use rmatrix::RMatrix;
pub use smith::{invariant_factors, unipotent_exponents};

use serde::{Deserialize, Serialize};

use crate::dmodule::DModule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

/// A Dieudonne module with a compatible action of `G = Z/p`.
#[derive(Clone, Debug)]
pub struct RStructure {
    pub host: DModule,
    pub gamma: Matrix,
    pub delta: Matrix,
}

/// Conditions of the freeness criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub free: bool,
    pub socle_is_top_power: bool,
    pub almost_kernel_is_image: bool,
    pub top_power_iso: bool,
}

impl FreenessReport {
    pub fn consistent(&self) -> bool {
        let v = [
            self.free,
            self.socle_is_top_power,
            self.almost_kernel_is_image,
            self.top_power_iso,
        ];
        v.iter().all(|&b| b == v[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filtration {
    Image,
    Kernel,
}

impl RStructure {
    pub fn new(host: DModule) -> Result<RStructure> {
        let gamma = host
            .gamma
            .clone()
            .ok_or_else(|| Error::Invalid("module carries no G-action".into()))?;
        let n = host.n;
        let p = host.p();
        let id = Matrix::identity(&host.field, n);
        if gamma.pow(p) != id {
            return Err(Error::Invariant("gamma^p is not the identity".into()));
        }
        let delta = gamma.sub(&id);
        Ok(RStructure { host, gamma, delta })
    }

    /// An `R`-module with zero `F` and `V`.
    pub fn from_action(gamma: Matrix) -> Result<RStructure> {
        let k = gamma.field.clone();
        let n = gamma.rows;
        let z = Matrix::zeros(&k, n, n);
        RStructure::new(DModule::new(z.clone(), z)?.with_gamma(gamma))
    }

    pub fn p(&self) -> usize {
        self.host.p() as usize
    }

    pub fn n(&self) -> usize {
        self.host.n
    }

    pub fn delta_pow(&self, j: usize) -> Matrix {
        self.delta.pow(j as u64)
    }

    /// `delta^j M`.
    pub fn image(&self, j: usize) -> Subspace {
        Subspace::column_space(&self.delta_pow(j))
    }

    /// `M[delta^j]`.
    pub fn kernel(&self, j: usize) -> Subspace {
        Subspace::kernel_of(&self.delta_pow(j))
    }

    /// `rank delta^j` for `j = 0..=p`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.p() + 1);
        let mut d = Matrix::identity(&self.host.field, self.n());
        for _ in 0..=self.p() {
            out.push(d.rank());
            d = d.mul(&self.delta);
        }
        out
    }

    /// Multiplicities `(c_1, ..., c_p)` of the Jordan blocks `V_1, ..., V_p`.
    pub fn indecomposable_multiplicities(&self) -> Vec<usize> {
        let r = self.ranks();
        let p = self.p();
        // blocks of size >= j
        let at_least = |j: usize| r[j - 1] - r[j];
        (1..=p)
            .map(|i| at_least(i) - if i < p { at_least(i + 1) } else { 0 })
            .collect()
    }

    pub fn freeness_tests(&self) -> FreenessReport {
        let p = self.p();
        let n = self.n();
        let c = self.indecomposable_multiplicities();
        let free = c[..p - 1].iter().all(|&x| x == 0);
        let top = self.image(p - 1);
        let socle = self.kernel(1);
        let r_top = top.dim();
        FreenessReport {
            free,
            socle_is_top_power: socle == top,
            almost_kernel_is_image: self.kernel(p - 1) == self.image(1),
            top_power_iso: r_top == n - self.image(1).dim() && r_top == socle.dim(),
        }
    }

    pub fn is_free(&self) -> bool {
        let rep = self.freeness_tests();
        debug_assert!(rep.consistent());
        rep.free
    }

    /// The `p` graded pieces `delta^i M / delta^{i+1} M` or
    /// `M[delta^{i+1}] / M[delta^i]`, `i = 0..p`.
    pub fn delta_graded(&self, mode: Filtration) -> Vec<DModule> {
        (0..self.p())
            .map(|i| match mode {
                Filtration::Image => self.host.subquotient(&self.image(i + 1), &self.image(i)),
                Filtration::Kernel => self.host.subquotient(&self.kernel(i), &self.kernel(i + 1)),
            })
            .collect()
    }

    /// `<delta m, n> = <m, tilde(delta) n>` for the host pairing.
    pub fn tilde_adjoint_holds(&self) -> Option<bool> {
        let pm = self.host.pairing.as_ref()?;
        let dt = RElement::delta(&self.host.field).tilde().eval(&self.delta);
        Some(self.delta.transpose().mul(pm) == pm.mul(&dt))
    }

    /// Orthogonal complement under the host pairing.
    pub fn orthogonal(&self, s: &Subspace) -> Result<Subspace> {
        let pm = self
            .host
            .pairing
            .as_ref()
            .ok_or_else(|| Error::Invalid("module carries no pairing".into()))?;
        let rows = s.basis_matrix().mul(pm);
        Ok(Subspace::kernel_of(&rows))
    }

    /// `R`-structure on a `gamma`-stable summand such as the etale part.
    pub fn restrict(&self, s: &Subspace) -> Result<RStructure> {
        if !self.host.is_stable(s) {
            return Err(Error::Invalid("subspace is not stable".into()));
        }
        RStructure::new(self.host.restrict(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldRef};

    fn jordan(k: &FieldRef, sizes: &[usize]) -> Matrix {
        let n: usize = sizes.iter().sum();
        let mut g = Matrix::identity(k, n);
        let mut base = 0;
        for &s in sizes {
            for i in 1..s {
                g.set(base + i, base + i - 1, 1);
            }
            base += s;
        }
        g
    }

    #[test]
    fn trivial_action_is_not_free() {
        let k = Field::prime(3).unwrap();
        let rs = RStructure::from_action(Matrix::identity(&k, 2)).unwrap();
        let rep = rs.freeness_tests();
        assert!(rep.consistent() && !rep.free);
        assert_eq!(rs.indecomposable_multiplicities(), vec![2, 0, 0]);
    }

    #[test]
    fn v1_plus_vp_is_not_free() {
        let k = Field::prime(3).unwrap();
        let rs = RStructure::from_action(jordan(&k, &[1, 3])).unwrap();
        let rep = rs.freeness_tests();
        assert!(!rep.socle_is_top_power);
        assert!(rep.consistent());
        assert_eq!(rs.indecomposable_multiplicities(), vec![1, 0, 1]);
    }

    #[test]
    fn free_module_passes_all_tests() {
        let k = Field::prime(5).unwrap();
        let rs = RStructure::from_action(jordan(&k, &[5, 5])).unwrap();
        let rep = rs.freeness_tests();
        assert!(rep.free && rep.consistent());
        let gr = rs.delta_graded(Filtration::Image);
        assert_eq!(gr.len(), 5);
        assert!(gr.iter().all(|m| m.n == 2));
    }

    #[test]
    fn multiplicities_for_mixed_blocks() {
        let k = Field::new(3, 2).unwrap();
        let rs = RStructure::from_action(jordan(&k, &[2, 1, 3, 2])).unwrap();
        assert_eq!(rs.indecomposable_multiplicities(), vec![1, 2, 1]);
        assert!(rs.freeness_tests().consistent());
    }

    #[test]
    fn graded_pieces_of_free_rank_one() {
        let k = Field::prime(3).unwrap();
        let rs = RStructure::from_action(jordan(&k, &[3])).unwrap();
        for mode in [Filtration::Image, Filtration::Kernel] {
            let gr = rs.delta_graded(mode);
            assert_eq!(gr.iter().map(|m| m.n).collect::<Vec<_>>(), vec![1, 1, 1]);
        }
    }

    #[test]
    fn rejects_non_action() {
        let k = Field::prime(3).unwrap();
        let mut g = Matrix::identity(&k, 2);
        g.set(0, 0, 2);
        assert!(RStructure::from_action(g).is_err());
    }
}
