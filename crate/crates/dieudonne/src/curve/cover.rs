//! Unramified Artin-Schreier covers `Y: z^p - z = g` of a hyperelliptic
//! curve and the invariants of `H^1_dR(Y)` with its `G`-action.

use serde::Serialize;

use crate::dmodule::{DModule, WordMultiset};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::gring::{unipotent_exponents, EtaleReport, Filtration, RStructure};

use super::cohomology::{cohomology, CohomologyPackage};
use super::expr::{parse_function, FnElem};
use super::hyperelliptic::HyperellipticCurve;
use super::places::{PlaceCertificate, Tower};

#[derive(Clone, Debug)]
pub struct ASCover {
    pub base: HyperellipticCurve,
    pub g: FnElem,
}

/// Outcome of the local reductions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnramifiedReport {
    pub unramified: bool,
    pub failure: Option<String>,
    pub certificates: Vec<PlaceCertificate>,
}

/// Structural identities checked on one cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub g_x: usize,
    pub g_y: usize,
    pub f_x: usize,
    pub f_y: usize,
    pub a_x: usize,
    pub a_y: usize,
    pub nu_x: usize,
    pub nu_y: usize,
    pub fv_vf_zero: bool,
    pub bt1: bool,
    pub pairing_compatible: bool,
    pub riemann_hurwitz: bool,
    pub deuring_shafarevich: bool,
    pub r_type_full: bool,
    pub r_type_etale: bool,
    pub r_type_multiplicative: bool,
    pub etale_delta_kernel: bool,
    pub ll_free: bool,
    pub ll_gradeds_match_base: bool,
    pub nu_bounds: bool,
    pub a_bounds: bool,
}

impl CoverInvariants {
    pub fn all_hold(&self) -> bool {
        [
            self.fv_vf_zero,
            self.bt1,
            self.pairing_compatible,
            self.riemann_hurwitz,
            self.deuring_shafarevich,
            self.r_type_full,
            self.r_type_etale,
            self.r_type_multiplicative,
            self.etale_delta_kernel,
            self.ll_free,
            self.ll_gradeds_match_base,
            self.nu_bounds,
            self.a_bounds,
        ]
        .iter()
        .all(|&b| b)
    }

    /// Names of the failed checks.
    pub fn violations(&self) -> Vec<&'static str> {
        let named = [
            ("fv_vf_zero", self.fv_vf_zero),
            ("bt1", self.bt1),
            ("pairing_compatible", self.pairing_compatible),
            ("riemann_hurwitz", self.riemann_hurwitz),
            ("deuring_shafarevich", self.deuring_shafarevich),
            ("r_type_full", self.r_type_full),
            ("r_type_etale", self.r_type_etale),
            ("r_type_multiplicative", self.r_type_multiplicative),
            ("etale_delta_kernel", self.etale_delta_kernel),
            ("ll_free", self.ll_free),
            ("ll_gradeds_match_base", self.ll_gradeds_match_base),
            ("nu_bounds", self.nu_bounds),
            ("a_bounds", self.a_bounds),
        ];
        named
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| *n)
            .collect()
    }
}

/// Everything computed from one pass over `H^1_dR(X)` and `H^1_dR(Y)`.
#[derive(Clone, Debug, Serialize)]
pub struct CoverAnalysis {
    pub cover: String,
    pub invariants: CoverInvariants,
    pub etale: EtaleReport,
    pub ll_eo: Vec<usize>,
    pub ll_words: WordMultiset,
    /// Exponents of the invariant factors `(F-1)^(e_i)` on the etale part,
    /// when `F` is unipotent there.
    pub etale_factors: Option<Vec<usize>>,
}

/// `[c_1, ..., c_p]` with `c_1 = a`, `c_p = b` and zeros between.
fn r_type(p: usize, a: usize, b: usize) -> Vec<usize> {
    let mut v = vec![0; p];
    v[0] += a;
    v[p - 1] += b;
    v
}

pub fn de_rham_base(x: &HyperellipticCurve) -> Result<CohomologyPackage> {
    cohomology(&Tower::base_curve(x)?)
}

impl ASCover {
    pub fn new(base: &HyperellipticCurve, g: FnElem) -> ASCover {
        ASCover {
            base: base.clone(),
            g,
        }
    }

    pub fn parse(base: &HyperellipticCurve, g: &str) -> Result<ASCover> {
        Ok(ASCover::new(base, parse_function(g, &base.f, &base.k)?))
    }

    /// `z^p - z = g + a`.
    pub fn twisted(&self, a: i64) -> ASCover {
        let c = FnElem::constant(self.base.k.from_int(a));
        ASCover::new(&self.base, self.g.add(&c, &self.base.k))
    }

    pub fn p(&self) -> usize {
        self.base.p() as usize
    }

    pub fn genus(&self) -> usize {
        self.p() * (self.base.genus - 1) + 1
    }

    pub fn describe(&self) -> String {
        format!("z^{} - z = {}", self.p(), self.g.display(&self.base.k))
    }

    pub fn tower(&self) -> Result<Tower> {
        Tower::new(&self.base, Some(&self.g), None)
    }

    pub fn check_unramified(&self) -> Result<UnramifiedReport> {
        match self.tower() {
            Ok(t) => Ok(UnramifiedReport {
                unramified: true,
                failure: None,
                certificates: t.certificates,
            }),
            Err(Error::Ramified(msg)) => Ok(UnramifiedReport {
                unramified: false,
                failure: Some(msg),
                certificates: Vec::new(),
            }),
            Err(e) => Err(e),
        }
    }

    /// `H^1_dR(Y)` with `F`, `V`, the cup product and `gamma: z -> z+1`.
    pub fn de_rham_with_g(&self) -> Result<CohomologyPackage> {
        let pkg = cohomology(&self.tower()?)?;
        if pkg.module.n != 2 * self.genus() {
            return Err(Error::Dimension(format!(
                "H^1_dR(Y) has dimension {}, expected {}",
                pkg.module.n,
                2 * self.genus()
            )));
        }
        Ok(pkg)
    }

    /// Exponents `e_i` of the invariant factors `(F-1)^(e_i)` of `F` on the
    /// etale part of the twist `z^p - z = g + a`.
    pub fn etale_invariant_factors(&self, a: i64) -> Result<Vec<usize>> {
        let pkg = self.twisted(a).de_rham_with_g()?;
        let et = pkg.module.decompose()?.etale;
        unipotent_exponents(&et.f)
            .ok_or_else(|| Error::Invariant("Frobenius on the etale part is not unipotent".into()))
    }

    /// Hypercohomology of `O_Y(-T) -> Omega_Y(T)` for the fiber `T` over a
    /// rational point `s = (x0, y0)`.
    pub fn ny_module(&self, s: (i64, i64)) -> Result<CohomologyPackage> {
        let k = &self.base.k;
        let pt: (Elem, Elem) = (k.from_int(s.0), k.from_int(s.1));
        let tower = Tower::new(&self.base, Some(&self.g), Some(pt))?;
        if tower.marked_degree() != self.p() {
            return Err(Error::Invalid(
                "the marked point must be a rational point of X".into(),
            ));
        }
        let pkg = cohomology(&tower)?;
        if pkg.module.n != 2 * self.p() * self.base.genus {
            return Err(Error::Dimension(
                "fiber module has the wrong dimension".into(),
            ));
        }
        Ok(pkg)
    }

    /// One etale-table row from the etale parts of `X` and `Y`.
    pub fn table_row(&self) -> Result<EtaleReport> {
        let x = de_rham_base(&self.base)?.module.decompose()?.etale;
        let y = self.de_rham_with_g()?.module.decompose()?.etale;
        EtaleReport::new(&x, &RStructure::new(y)?)
    }

    pub fn analysis(&self) -> Result<CoverAnalysis> {
        let p = self.p();
        let xm = de_rham_base(&self.base)?.module;
        let ym = self.de_rham_with_g()?.module;
        let invariants = invariants_of(p, &xm, &ym)?;
        let xd = xm.decompose()?;
        let yd = ym.decompose()?;
        let etale_factors = unipotent_exponents(&yd.etale.f);
        let etale = EtaleReport::new(&xd.etale, &RStructure::new(yd.etale)?)?;
        Ok(CoverAnalysis {
            etale_factors,
            cover: self.describe(),
            invariants,
            etale,
            ll_eo: yd.local_local.eo_sequence()?,
            ll_words: yd.local_local.kraft_words()?,
        })
    }

    pub fn invariants(&self) -> Result<CoverInvariants> {
        let p = self.p();
        let xm = de_rham_base(&self.base)?.module;
        let ym = self.de_rham_with_g()?.module;
        invariants_of(p, &xm, &ym)
    }
}

/// Structural identities for `H^1_dR(X)` and `H^1_dR(Y)` with `G`-action.
pub fn invariants_of(p: usize, xm: &DModule, ym: &DModule) -> Result<CoverInvariants> {
    let g_x = xm.n / 2;
    let g_y = ym.n / 2;
    let (f_x, f_y) = (xm.p_rank(), ym.p_rank());
    let (a_x, a_y) = (xm.a_number(), ym.a_number());
    let xd = xm.decompose()?;
    let yd = ym.decompose()?;
    let nu_x = crate::gring::nu(&xd.etale.frobenius())?;
    let nu_y = crate::gring::nu(&yd.etale.frobenius())?;
    let rep = ym.verify();
    let full = RStructure::new(ym.clone())?;
    let et = RStructure::new(yd.etale.clone())?;
    let mu = RStructure::new(yd.multiplicative.clone())?;
    let ll = RStructure::new(yd.local_local.clone())?;
    let ll_rep = ll.freeness_tests();
    let x_ll_eo = xd.local_local.eo_sequence()?;
    let mut gradeds_ok = true;
    for piece in ll.delta_graded(Filtration::Image) {
        gradeds_ok &= piece.n == xd.local_local.n && piece.eo_sequence()? == x_ll_eo;
    }
    Ok(CoverInvariants {
        g_x,
        g_y,
        f_x,
        f_y,
        a_x,
        a_y,
        nu_x,
        nu_y,
        fv_vf_zero: rep.fv_zero && rep.vf_zero,
        bt1: ym.is_bt1(),
        pairing_compatible: rep.all_pass() && rep.pairing_compatible == Some(true),
        riemann_hurwitz: 2 * g_y as i64 - 2 == p as i64 * (2 * g_x as i64 - 2),
        deuring_shafarevich: f_y as i64 - 1 == p as i64 * (f_x as i64 - 1),
        r_type_full: full.indecomposable_multiplicities() == r_type(p, 2, 2 * g_x - 2),
        r_type_etale: et.indecomposable_multiplicities() == r_type(p, 1, f_x.saturating_sub(1)),
        r_type_multiplicative: mu.indecomposable_multiplicities()
            == r_type(p, 1, f_x.saturating_sub(1)),
        etale_delta_kernel: et.kernel(1).dim() == f_x,
        ll_free: ll_rep.free && ll_rep.consistent(),
        ll_gradeds_match_base: gradeds_ok,
        nu_bounds: nu_x <= nu_y && nu_y <= p * nu_x,
        a_bounds: a_x <= a_y && a_y <= p * a_x,
    })
}

/// `dim ker(V - 1)` and `dim ker(V - 1)^3` on `H^0(Omega_Y(T))`.
pub fn ny_kernel_dims(pkg: &CohomologyPackage) -> (usize, usize) {
    let c = pkg.cartier();
    let n = c.rows;
    let m = c.sub(&crate::linalg::Matrix::identity(&c.field, n));
    (n - m.rank(), n - m.pow(3).rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row1() -> ASCover {
        let x = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        ASCover::parse(&x, "(x^4 + x^2 + x)y").unwrap()
    }

    #[test]
    fn cover_of_genus_three_curve() {
        let c = row1();
        let pkg = c.de_rham_with_g().unwrap();
        assert_eq!(pkg.module.n, 14);
        assert!(pkg.module.verify().all_pass());
        let inv = c.invariants().unwrap();
        assert!(inv.all_hold(), "{:?}", inv.violations());
        let rep = c.check_unramified().unwrap();
        assert!(rep.unramified);
        assert_eq!(rep.certificates.len(), 1);
    }

    #[test]
    fn prime_to_p_pole_is_rejected() {
        let x = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        let c = ASCover::parse(&x, "1/x").unwrap();
        let rep = c.check_unramified().unwrap();
        assert!(!rep.unramified);
        assert!(rep.failure.unwrap().contains("prime to p"));
        assert!(matches!(c.de_rham_with_g(), Err(Error::Ramified(_))));
    }

    #[test]
    fn artin_schreier_image_is_reducible() {
        let x = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        let c = ASCover::parse(&x, "(x^2 y + 1)^3 - (x^2 y + 1)").unwrap();
        assert!(c.check_unramified().unwrap().unramified);
        assert!(matches!(c.de_rham_with_g(), Err(Error::Reducible)));
    }

    #[test]
    fn ny_module_is_free() {
        let x = HyperellipticCurve::parse(3, "x^7 + x^5 + x").unwrap();
        let c = ASCover::parse(&x, "(x^4 + x^2 + x)y").unwrap();
        let pkg = c.ny_module((0, 0)).unwrap();
        assert_eq!(pkg.module.n, 2 * 3 * 3);
        let rs = RStructure::new(pkg.module.clone()).unwrap();
        assert_eq!(rs.indecomposable_multiplicities(), vec![0, 0, 6]);
        assert!(pkg.module.verify().fv_zero);
        assert!(c.ny_module((1, 1)).is_err());
    }
}
