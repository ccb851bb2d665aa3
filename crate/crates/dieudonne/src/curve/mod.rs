//! Hyperelliptic curves over F_p, their unramified Artin-Schreier covers
//! and explicit de Rham cohomology with F, V, the pairing and the deck
//! transformation.

pub mod cohomology;
pub mod cover;
pub mod expr;
pub mod hyperelliptic;
pub mod places;
pub mod series;

pub use cohomology::{cohomology, CohomologyPackage};
pub use cover::{
    de_rham_base, invariants_of, ny_kernel_dims, ASCover, CoverAnalysis, CoverInvariants,
    UnramifiedReport,
};
pub use expr::{parse_function, parse_poly, FnElem, RatFn};
pub use hyperelliptic::{CurveSummary, HyperellipticCurve};
pub use places::{PlaceCertificate, Tower};
pub use series::Series;
