//! Frobenius on etale parts: fixed points, splitting tests, field degrees.
//!
//! Dieudonne modules here are contravariant, so a subobject of the group
//! scheme shows up as a quotient of the module. The kernel sequence is
//! tested through `M / delta M` and the cokernel sequence through `M[delta]`.

use serde::{Deserialize, Serialize};

use super::RStructure;
use crate::dmodule::DModule;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{dot, vec_frob, Matrix};
use crate::semilinear::{fixed_points, solve_fp_linear, SemilinearMap};

/// Iteration cap for order searches.
const ORDER_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub split_ker: bool,
    pub split_coker: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionDegrees {
    pub d1: u64,
    pub d2: u64,
    pub mu: Option<usize>,
}

/// One row of etale data for a cover `Y -> X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct EtaleReport {
    pub nu_X: usize,
    pub nu_Y: usize,
    pub split_ker: bool,
    pub split_coker: bool,
    pub d1: u64,
    pub d2: u64,
    pub mu: Option<usize>,
}

impl EtaleReport {
    /// Build from the etale parts of `X` and of `Y` with its `G`-action.
    pub fn new(x_et: &DModule, y_et: &RStructure) -> Result<EtaleReport> {
        let nu_x = nu(&x_et.frobenius())?;
        let nu_y = nu(&y_et.host.frobenius())?;
        let split = y_et.etale_splitting_tests()?;
        let deg = extension_degrees(&x_et.frobenius(), &y_et.host.frobenius(), nu_x, nu_y)?;
        Ok(EtaleReport {
            nu_X: nu_x,
            nu_Y: nu_y,
            split_ker: split.split_ker,
            split_coker: split.split_coker,
            d1: deg.d1,
            d2: deg.d2,
            mu: deg.mu,
        })
    }
}

fn require_bijective(frob: &SemilinearMap) -> Result<()> {
    if frob.rank() != frob.matrix.rows {
        return Err(Error::Invalid(
            "Frobenius is not bijective on this module".into(),
        ));
    }
    Ok(())
}

/// The `k`-linear map `F^r`, whose inverse gives the Galois action.
pub fn galois_matrix(frob: &SemilinearMap) -> Matrix {
    let r = frob.field().degree();
    frob.pow(r).matrix
}

/// `log_p` of the number of `k`-points: the `F_p`-dimension of `{Fv = v}`.
pub fn nu(frob: &SemilinearMap) -> Result<usize> {
    require_bijective(frob)?;
    let fixed = fixed_points(frob).len();
    let phi = galois_matrix(frob);
    let n = phi.rows;
    let over_k = n - phi.sub(&Matrix::identity(frob.field(), n)).rank();
    if fixed != over_k {
        return Err(Error::Invariant(format!(
            "fixed points {fixed} over F_p vs {over_k} over k"
        )));
    }
    Ok(fixed)
}

/// Least `n >= 1` with `a^n = 1`.
pub fn matrix_order(a: &Matrix) -> Result<u64> {
    let id = Matrix::identity(&a.field, a.rows);
    let mut acc = a.clone();
    for n in 1..=ORDER_CAP {
        if acc == id {
            return Ok(n);
        }
        acc = acc.mul(a);
    }
    Err(Error::Bound(format!("matrix order exceeds {ORDER_CAP}")))
}

/// `d1`, `d2` and, when both `nu` are 1, the size exponent `mu` of the
/// free complement over the least nontrivial degree `d | p-1` where it has
/// points.
pub fn extension_degrees(
    frob_x: &SemilinearMap,
    frob_y: &SemilinearMap,
    nu_x: usize,
    nu_y: usize,
) -> Result<ExtensionDegrees> {
    require_bijective(frob_x)?;
    require_bijective(frob_y)?;
    let px = galois_matrix(frob_x);
    let py = galois_matrix(frob_y);
    let d1 = matrix_order(&px)?;
    let d2 = matrix_order(&py.pow(d1))?;
    let p = frob_y.field().p();
    let mut mu = None;
    if nu_x == 1 && nu_y == 1 && p > 2 {
        let n = py.rows;
        let id = Matrix::identity(frob_y.field(), n);
        for d in (2..p).filter(|d| (p - 1).is_multiple_of(*d)) {
            let fixed = n - py.pow(d).sub(&id).rank();
            if fixed > 1 {
                mu = Some(fixed - 1);
                break;
            }
        }
    }
    Ok(ExtensionDegrees { d1, d2, mu })
}

/// `nu_X <= nu_Y <= p nu_X`, and `nu_Y - 1 <= p (nu_X - 1)` when the kernel
/// sequence splits.
pub fn nu_inequalities_hold(p: usize, nu_x: usize, nu_y: usize, split_ker: bool) -> bool {
    let basic = nu_x <= nu_y && nu_y <= p * nu_x;
    let refined = !split_ker || nu_y + p <= p * nu_x + 1;
    basic && refined
}

/// Whether some `v` in `M[delta]` outside `delta^{p-1} M` has `F v = v`.
pub fn split_coker_test(rs: &RStructure) -> bool {
    let n = rs.n();
    let k = rs.host.field.clone();
    let frob = rs.host.frobenius();
    let delta = &rs.delta;
    let sols = solve_fp_linear(&k, n, 2 * n, |v| {
        let fv = frob.apply(v);
        let mut out: Vec<Elem> = fv.iter().zip(v).map(|(&a, &b)| k.sub(a, b)).collect();
        out.extend(delta.mul_vec(v));
        out
    });
    let top = rs.image(rs.p() - 1);
    sols.iter().any(|v| !top.contains(v))
}

/// Whether some `lambda` on `M / delta M` with `lambda(F m) = lambda(m)^p`
/// is nonzero on the image of `M[delta]`.
pub fn split_ker_test(rs: &RStructure) -> bool {
    let k = rs.host.field.clone();
    let dm = rs.image(1);
    let q = rs.host.quotient(&dm);
    let nq = q.n;
    let a = q.f.clone();
    let line: Vec<Vec<Elem>> = rs
        .kernel(1)
        .basis()
        .iter()
        .map(|v| dm.quotient_coords(v))
        .collect();
    let sols = solve_fp_linear(&k, nq, nq, |lam| {
        let lhs: Vec<Elem> = (0..nq).map(|j| dot(&k, lam, &a.col(j))).collect();
        let rhs = vec_frob(&k, lam, 1);
        lhs.iter().zip(&rhs).map(|(&x, &y)| k.sub(x, y)).collect()
    });
    sols.iter()
        .any(|lam| line.iter().any(|l| dot(&k, lam, l) != 0))
}

impl RStructure {
    /// Check the `S`-module type `W_1 + W_p^{f-1}` expected of an etale part.
    pub fn check_etale_type(&self) -> Result<usize> {
        require_bijective(&self.host.frobenius())?;
        let p = self.p();
        let c = self.indecomposable_multiplicities();
        let ok = c[0] == 1 && (p == 1 || c[1..p - 1].iter().all(|&x| x == 0));
        if !ok {
            return Err(Error::Invariant(format!("etale part has G-type {c:?}")));
        }
        Ok(1 + c[p - 1])
    }

    pub fn etale_splitting_tests(&self) -> Result<SplitReport> {
        self.check_etale_type()?;
        Ok(SplitReport {
            split_ker: split_ker_test(self),
            split_coker: split_coker_test(self),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldRef};

    fn etale(k: &FieldRef, a: Matrix, gamma: Matrix) -> RStructure {
        let n = a.rows;
        let m = DModule::new(a, Matrix::zeros(k, n, n))
            .unwrap()
            .with_gamma(gamma);
        RStructure::new(m).unwrap()
    }

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
    fn split_etale_part() {
        let k = Field::prime(3).unwrap();
        let rs = etale(&k, Matrix::identity(&k, 4), jordan(&k, &[1, 3]));
        assert_eq!(rs.check_etale_type().unwrap(), 2);
        let s = rs.etale_splitting_tests().unwrap();
        assert!(s.split_ker && s.split_coker);
        assert_eq!(nu(&rs.host.frobenius()).unwrap(), 4);
        let d = extension_degrees(&rs.host.frobenius(), &rs.host.frobenius(), 4, 4).unwrap();
        assert_eq!((d.d1, d.d2, d.mu), (1, 1, None));
    }

    #[test]
    fn unsplit_extension() {
        let k = Field::prime(3).unwrap();
        // gamma = J_1 + J_3 on basis e0 | e1 e2 e3 (e3 the socle of J_3)
        let g = jordan(&k, &[1, 3]);
        // F mixes the trivial line into the free block: F e1 = e1 + e0
        let mut a = Matrix::identity(&k, 4);
        a.set(0, 1, 1);
        // commutes with gamma only if delta e1 = e2 maps compatibly
        let dm = g.sub(&Matrix::identity(&k, 4));
        assert_eq!(a.mul(&dm), dm.mul(&a));
        let rs = etale(&k, a, g);
        let s = rs.etale_splitting_tests().unwrap();
        assert!(!s.split_ker);
        assert!(s.split_coker);
    }

    #[test]
    fn nu_over_extension_field() {
        let k = Field::new(3, 2).unwrap();
        // F = sigma on k^2: fixed points F_3^2
        let f = SemilinearMap::new(Matrix::identity(&k, 2), 1);
        assert_eq!(nu(&f).unwrap(), 2);
        let mut a = Matrix::identity(&k, 2);
        a.set(0, 1, 1);
        assert_eq!(nu(&SemilinearMap::new(a, 1)).unwrap(), 1);
    }

    #[test]
    fn nu_requires_bijective() {
        let k = Field::prime(5).unwrap();
        let f = SemilinearMap::new(Matrix::zeros(&k, 1, 1), 1);
        assert!(nu(&f).is_err());
    }

    #[test]
    fn order_and_mu() {
        let k = Field::prime(5).unwrap();
        // diag(1, 2): order 4 on the second line
        let mut a = Matrix::identity(&k, 2);
        a.set(1, 1, 2);
        assert_eq!(matrix_order(&a).unwrap(), 4);
        let fx = SemilinearMap::new(Matrix::identity(&k, 1), 1);
        let fy = SemilinearMap::new(a, 1);
        let d = extension_degrees(&fx, &fy, 1, 1).unwrap();
        assert_eq!((d.d1, d.d2, d.mu), (1, 4, Some(1)));
    }

    #[test]
    fn inequalities() {
        assert!(nu_inequalities_hold(3, 1, 1, true));
        assert!(nu_inequalities_hold(3, 2, 4, true));
        assert!(!nu_inequalities_hold(3, 2, 5, true));
        assert!(nu_inequalities_hold(3, 2, 5, false));
        assert!(!nu_inequalities_hold(3, 2, 7, false));
    }
}
